// tcpgen/include/tcpgen/biasing_lists.h

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

#ifndef TCPGEN_BIASING_LISTS_H_
#define TCPGEN_BIASING_LISTS_H_

#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "tcpgen/lexicon.h"
#include "tcpgen/prng.h"

namespace tcpgen {

enum class ListLevel { kUtterance, kChapter, kBook };
std::string ToString(ListLevel level);
ListLevel ParseListLevel(const std::string &s);

// Words kept sorted and unique.
struct BiasingList {
  std::vector<std::string> words;
  ListLevel level = ListLevel::kUtterance;
  std::string source_id;

  bool Contains(const std::string &w) const;
  std::string ToText() const;
  static BiasingList FromText(const std::string &text, ListLevel level,
                              const std::string &source_id);
};

class RareWordList {
 public:
  RareWordList() = default;
  explicit RareWordList(std::vector<std::string> words);

  const std::vector<std::string> &words() const { return words_; }
  bool Contains(const std::string &w) const { return set_.count(w) != 0; }
  size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

 private:
  std::vector<std::string> words_;
  std::unordered_set<std::string> set_;
};

using WordCounts = std::map<std::string, int64_t>;

WordCounts CountWords(const std::vector<std::vector<std::string>> &sentences);

// Words with corpus frequency <= threshold, sorted. Throws FormatError on an
// empty corpus.
RareWordList BuildRareWordList(const WordCounts &counts, int64_t threshold);
// The ceil(fraction * |vocabulary|) least frequent words (ties broken
// lexicographically), sorted.
RareWordList BuildRareWordListByFraction(const WordCounts &counts,
                                         double keep_fraction);

// Drops rare words that the vocabulary cannot segment; they are appended to
// `rejected` when non-null.
RareWordList FilterSegmentable(const SubwordVocab &vocab,
                               const RareWordList &rare,
                               std::vector<std::string> *rejected = nullptr);

// (ref ∩ rare) plus `n_distractors` words drawn uniformly without replacement
// from rare \ ref (all of them when fewer are available). With drop_rate > 0,
// each reference biasing word is independently removed with that probability
// (training-time dropping); dropped words never come back as distractors.
BiasingList BuildUtteranceList(const std::vector<std::string> &ref,
                               const RareWordList &rare, int n_distractors,
                               Prng *rng, double drop_rate = 0.0);

struct ChapterSpan {
  std::string chapter_id;
  int start_line = 0;  // inclusive
  int end_line = 0;    // exclusive
};

struct Book {
  std::string id;
  std::vector<std::string> lines;
  std::vector<ChapterSpan> chapters;  // sorted by start_line
};

struct LineWindow {
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
  bool operator==(const LineWindow &) const = default;
};

// Starts from the chapter and merges whole neighbouring chapters, forward
// first and then backward, until the text reaches `window` lines or the book
// runs out.
LineWindow ChapterWindow(const Book &book, const std::string &chapter_id,
                         int window);
// `window` lines centred on `anchor`; when one end hits a book boundary the
// other end is extended. Books shorter than `window` are used whole.
LineWindow BookWindow(int num_lines, LineWindow anchor, int window);

// Distinct rare words in the window; above `cap` the least frequent survive
// (by `counts`, ties lexicographic); below `cap` the list is padded with
// distractors from the rest of the rare list.
BiasingList BuildWindowList(const Book &book, LineWindow window,
                            const RareWordList &rare, const WordCounts &counts,
                            int cap, Prng *rng, ListLevel level,
                            const std::string &source_id);

BiasingList BuildChapterList(const Book &book, const std::string &chapter_id,
                             const RareWordList &rare, const WordCounts &counts,
                             Prng *rng, const std::string &source_id,
                             int cap = 1000, int window = 1000);

BiasingList BuildBookList(const Book &book, LineWindow anchor,
                          const RareWordList &rare, const WordCounts &counts,
                          Prng *rng, const std::string &source_id,
                          int cap = 1000, int window = 10000);

// Fraction of reference word tokens that appear in their utterance's list.
double Coverage(const std::vector<std::vector<std::string>> &refs,
                const std::vector<const BiasingList *> &lists);

}  // namespace tcpgen

#endif  // TCPGEN_BIASING_LISTS_H_
