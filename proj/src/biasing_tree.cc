// tcpgen/src/biasing_tree.cc

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

#include "tcpgen/biasing_tree.h"

#include <algorithm>
#include <functional>

#include "tcpgen/common.h"

namespace tcpgen {

PrefixTree PrefixTree::Build(const SubwordVocab &vocab,
                             const std::vector<std::string> &words,
                             std::vector<std::string> *rejected) {
  PrefixTree tree;
  for (const auto &w : words) {
    TokenSeq tokens;
    try {
      tokens = TokenizeWord(vocab, w);
    } catch (const UnsegmentableWord &) {
      if (rejected) rejected->push_back(w);
      continue;
    }
    tree.Insert(tokens);
  }
  return tree;
}

bool PrefixTree::Insert(const TokenSeq &tokens) {
  TCPGEN_CHECK(!tokens.empty());
  int cur = 0;
  for (int id : tokens) {
    auto &ch = nodes_[cur].children;
    auto it = std::lower_bound(
        ch.begin(), ch.end(), id,
        [](const std::pair<int, int> &p, int v) { return p.first < v; });
    if (it != ch.end() && it->first == id) {
      cur = it->second;
    } else {
      int next = static_cast<int>(nodes_.size());
      ch.insert(it, {id, next});
      nodes_.emplace_back();  // invalidates `ch`
      cur = next;
    }
  }
  if (nodes_[cur].is_word_end) return false;
  nodes_[cur].is_word_end = true;
  ++num_words_;
  return true;
}

int PrefixTree::Child(int node, int id) const {
  const auto &ch = nodes_[node].children;
  auto it = std::lower_bound(
      ch.begin(), ch.end(), id,
      [](const std::pair<int, int> &p, int v) { return p.first < v; });
  if (it != ch.end() && it->first == id) return it->second;
  return -1;
}

int PrefixTree::MaxBranching() const {
  size_t b = 0;
  for (const auto &n : nodes_) b = std::max(b, n.children.size());
  return static_cast<int>(b);
}

std::vector<int> PrefixTree::ValidSet(const TreeState &state) const {
  std::vector<int> out;
  if (state.detached()) return out;
  TCPGEN_CHECK(state.node() < NumNodes());
  const auto &ch = nodes_[state.node()].children;
  out.reserve(ch.size());
  for (const auto &[id, unused] : ch) out.push_back(id);
  return out;
}

TreeState PrefixTree::Advance(const SubwordVocab &vocab, const TreeState &state,
                              int emitted) const {
  if (!vocab.IsLexical(emitted)) {
    throw ContractViolation("advance: non-lexical id " +
                            std::to_string(emitted));
  }
  if (vocab.IsWordFinal(emitted)) return TreeState::Root();
  if (state.detached()) return state;
  int child = Child(state.node(), emitted);
  return child < 0 ? TreeState::Detached() : TreeState(child);
}

TreeState PrefixTree::Replay(const SubwordVocab &vocab,
                             const TokenSeq &tokens) const {
  TreeState s = TreeState::Root();
  for (int id : tokens) s = Advance(vocab, s, id);
  return s;
}

std::string PrefixTree::Dump(const SubwordVocab &vocab) const {
  std::string out = "<root>\n";
  std::function<void(int, int)> walk = [&](int node, int depth) {
    for (const auto &[id, child] : nodes_[node].children) {
      out.append(2 * depth, ' ');
      out += vocab.Unit(id);
      if (nodes_[child].is_word_end) out += " *";
      out += '\n';
      walk(child, depth + 1);
    }
  };
  walk(0, 1);
  return out;
}

}  // namespace tcpgen
