// tcpgen/include/tcpgen/biasing_tree.h

// Copyright 2026  The tcpgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef TCPGEN_BIASING_TREE_H_
#define TCPGEN_BIASING_TREE_H_

#include <string>
#include <utility>
#include <vector>

#include "tcpgen/lexicon.h"

namespace tcpgen {

// Per-hypothesis traversal cursor: either sitting at a tree node or detached
// (the word in progress has left the tree). Cheap to copy.
class TreeState {
 public:
  static TreeState Root() { return TreeState(0); }
  static TreeState Detached() { return TreeState(-1); }

  bool detached() const { return node_ < 0; }
  int node() const { return node_; }

  bool operator==(const TreeState &o) const = default;

 private:
  explicit TreeState(int node) : node_(node) {}
  int node_;
  friend class PrefixTree;
};

// Prefix tree over the subword sequences of a biasing list. Node 0 is the root.
// Children of each node are kept sorted by subword id, so child lookup is a
// binary search bounded by the vocabulary size, never by the list length.
class PrefixTree {
 public:
  struct Node {
    std::vector<std::pair<int, int>> children;  // (subword id, node id)
    bool is_word_end = false;
  };

  // Tree with only the root.
  PrefixTree() : nodes_(1) {}

  // Words that cannot be segmented are skipped and returned through
  // `rejected` when non-null. Duplicates collapse.
  static PrefixTree Build(const SubwordVocab &vocab,
                          const std::vector<std::string> &words,
                          std::vector<std::string> *rejected = nullptr);

  // Inserts one token path; returns false if it was already present.
  bool Insert(const TokenSeq &tokens);

  int NumNodes() const { return static_cast<int>(nodes_.size()); }
  int NumWords() const { return num_words_; }
  bool empty() const { return num_words_ == 0; }
  const Node &node(int id) const { return nodes_[id]; }
  // Child of `node` labelled `id`, or -1.
  int Child(int node, int id) const;
  int MaxBranching() const;

  // Subword ids that extend the current prefix. Detached yields nothing. The
  // OOL entry is not included; the pointer adds it on its own.
  std::vector<int> ValidSet(const TreeState &state) const;

  // Moves the cursor over an emitted lexical unit. A word-final unit always
  // returns to the root; a word-internal unit that leaves the tree detaches.
  TreeState Advance(const SubwordVocab &vocab, const TreeState &state,
                    int emitted) const;

  // Replays Advance from the root over `tokens`.
  TreeState Replay(const SubwordVocab &vocab, const TokenSeq &tokens) const;

  // Indented text, one node per line: "<indent><unit>[ *]" where '*' marks a
  // word end. The root prints as "<root>".
  std::string Dump(const SubwordVocab &vocab) const;

 private:
  std::vector<Node> nodes_;
  int num_words_ = 0;
};

}  // namespace tcpgen

#endif  // TCPGEN_BIASING_TREE_H_
