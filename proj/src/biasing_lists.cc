// tcpgen/src/biasing_lists.cc

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

#include "tcpgen/biasing_lists.h"

#include <algorithm>
#include <cmath>

#include "tcpgen/common.h"

namespace tcpgen {

std::string ToString(ListLevel level) {
  switch (level) {
    case ListLevel::kUtterance: return "utterance";
    case ListLevel::kChapter: return "chapter";
    case ListLevel::kBook: return "book";
  }
  return "?";
}

ListLevel ParseListLevel(const std::string &s) {
  if (s == "utterance") return ListLevel::kUtterance;
  if (s == "chapter") return ListLevel::kChapter;
  if (s == "book") return ListLevel::kBook;
  throw FormatError("unknown list level '" + s + "'");
}

bool BiasingList::Contains(const std::string &w) const {
  return std::binary_search(words.begin(), words.end(), w);
}

std::string BiasingList::ToText() const {
  std::string out;
  for (const auto &w : words) out += w + "\n";
  return out;
}

BiasingList BiasingList::FromText(const std::string &text, ListLevel level,
                                  const std::string &source_id) {
  BiasingList list;
  list.level = level;
  list.source_id = source_id;
  list.words = SplitWords(text);
  std::sort(list.words.begin(), list.words.end());
  list.words.erase(std::unique(list.words.begin(), list.words.end()),
                   list.words.end());
  return list;
}

RareWordList::RareWordList(std::vector<std::string> words)
    : words_(std::move(words)) {
  std::sort(words_.begin(), words_.end());
  words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
  set_.insert(words_.begin(), words_.end());
}

WordCounts CountWords(const std::vector<std::vector<std::string>> &sentences) {
  WordCounts counts;
  for (const auto &s : sentences) {
    for (const auto &w : s) ++counts[w];
  }
  return counts;
}

RareWordList BuildRareWordList(const WordCounts &counts, int64_t threshold) {
  if (counts.empty()) throw FormatError("rare word list: empty corpus");
  std::vector<std::string> words;
  for (const auto &[w, c] : counts) {
    if (c <= threshold) words.push_back(w);
  }
  return RareWordList(std::move(words));
}

RareWordList BuildRareWordListByFraction(const WordCounts &counts,
                                         double keep_fraction) {
  if (counts.empty()) throw FormatError("rare word list: empty corpus");
  TCPGEN_CHECK(keep_fraction >= 0.0 && keep_fraction <= 1.0);
  std::vector<std::pair<int64_t, std::string>> by_freq;
  for (const auto &[w, c] : counts) by_freq.emplace_back(c, w);
  std::sort(by_freq.begin(), by_freq.end());
  size_t keep = static_cast<size_t>(std::ceil(keep_fraction * by_freq.size()));
  std::vector<std::string> words;
  for (size_t i = 0; i < keep; ++i) words.push_back(by_freq[i].second);
  return RareWordList(std::move(words));
}

RareWordList FilterSegmentable(const SubwordVocab &vocab,
                               const RareWordList &rare,
                               std::vector<std::string> *rejected) {
  std::vector<std::string> kept;
  for (const auto &w : rare.words()) {
    try {
      TokenizeWord(vocab, w);
      kept.push_back(w);
    } catch (const UnsegmentableWord &) {
      if (rejected) rejected->push_back(w);
    }
  }
  return RareWordList(std::move(kept));
}

namespace {

// Appends up to `n` words from `pool` (sorted) that are not in `exclude`,
// drawn uniformly without replacement.
void AddDistractors(const std::vector<std::string> &pool,
                    const std::unordered_set<std::string> &exclude, int n,
                    Prng *rng, std::vector<std::string> *out) {
  if (n <= 0) return;
  std::vector<const std::string *> candidates;
  for (const auto &w : pool) {
    if (!exclude.count(w)) candidates.push_back(&w);
  }
  const size_t take = std::min(candidates.size(), static_cast<size_t>(n));
  for (size_t i = 0; i < take; ++i) {
    size_t j = i + static_cast<size_t>(rng->Below(candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
    out->push_back(*candidates[i]);
  }
}

void SortUnique(std::vector<std::string> *words) {
  std::sort(words->begin(), words->end());
  words->erase(std::unique(words->begin(), words->end()), words->end());
}

}  // namespace

BiasingList BuildUtteranceList(const std::vector<std::string> &ref,
                               const RareWordList &rare, int n_distractors,
                               Prng *rng, double drop_rate) {
  TCPGEN_CHECK(drop_rate >= 0.0 && drop_rate <= 1.0);
  BiasingList list;
  list.level = ListLevel::kUtterance;
  std::unordered_set<std::string> in_ref(ref.begin(), ref.end());
  std::vector<std::string> hits;
  for (const auto &w : ref) {
    if (rare.Contains(w)) hits.push_back(w);
  }
  SortUnique(&hits);
  for (const auto &w : hits) {
    // The draw happens even at drop_rate 0 so that the distractor stream does
    // not depend on the rate.
    if (rng->Uniform() >= drop_rate) list.words.push_back(w);
  }
  AddDistractors(rare.words(), in_ref, n_distractors, rng, &list.words);
  SortUnique(&list.words);
  return list;
}

LineWindow ChapterWindow(const Book &book, const std::string &chapter_id,
                         int window) {
  const auto &ch = book.chapters;
  int k = -1;
  for (size_t i = 0; i < ch.size(); ++i) {
    if (ch[i].chapter_id == chapter_id) k = static_cast<int>(i);
  }
  if (k < 0) throw FormatError("chapter " + chapter_id + " not in book " + book.id);
  int lo = k, hi = k;
  auto length = [&] { return ch[hi].end_line - ch[lo].start_line; };
  while (length() < window) {
    if (hi + 1 < static_cast<int>(ch.size())) {
      ++hi;
    } else if (lo > 0) {
      --lo;
    } else {
      break;
    }
  }
  const int n = static_cast<int>(book.lines.size());
  return {std::clamp(ch[lo].start_line, 0, n), std::clamp(ch[hi].end_line, 0, n)};
}

LineWindow BookWindow(int num_lines, LineWindow anchor, int window) {
  if (num_lines <= window) return {0, num_lines};
  const int center = (anchor.begin + anchor.end) / 2;
  int begin = center - window / 2;
  begin = std::clamp(begin, 0, num_lines - window);
  return {begin, begin + window};
}

BiasingList BuildWindowList(const Book &book, LineWindow window,
                            const RareWordList &rare, const WordCounts &counts,
                            int cap, Prng *rng, ListLevel level,
                            const std::string &source_id) {
  TCPGEN_CHECK(cap >= 0);
  std::unordered_set<std::string> seen;
  std::vector<std::pair<int64_t, std::string>> found;
  for (int l = std::max(0, window.begin);
       l < std::min<int>(window.end, book.lines.size()); ++l) {
    for (auto &w : SplitWords(book.lines[l])) {
      if (rare.Contains(w) && seen.insert(w).second) {
        auto it = counts.find(w);
        found.emplace_back(it == counts.end() ? 0 : it->second, w);
      }
    }
  }
  std::sort(found.begin(), found.end());
  if (found.size() > static_cast<size_t>(cap)) found.resize(cap);

  BiasingList list;
  list.level = level;
  list.source_id = source_id;
  std::unordered_set<std::string> in_list;
  for (auto &[c, w] : found) {
    in_list.insert(w);
    list.words.push_back(std::move(w));
  }
  AddDistractors(rare.words(), in_list, cap - static_cast<int>(list.words.size()),
                 rng, &list.words);
  SortUnique(&list.words);
  return list;
}

BiasingList BuildChapterList(const Book &book, const std::string &chapter_id,
                             const RareWordList &rare, const WordCounts &counts,
                             Prng *rng, const std::string &source_id, int cap,
                             int window) {
  return BuildWindowList(book, ChapterWindow(book, chapter_id, window), rare,
                         counts, cap, rng, ListLevel::kChapter, source_id);
}

BiasingList BuildBookList(const Book &book, LineWindow anchor,
                          const RareWordList &rare, const WordCounts &counts,
                          Prng *rng, const std::string &source_id, int cap,
                          int window) {
  LineWindow w =
      BookWindow(static_cast<int>(book.lines.size()), anchor, window);
  return BuildWindowList(book, w, rare, counts, cap, rng, ListLevel::kBook,
                         source_id);
}

double Coverage(const std::vector<std::vector<std::string>> &refs,
                const std::vector<const BiasingList *> &lists) {
  TCPGEN_CHECK(refs.size() == lists.size());
  size_t total = 0, hit = 0;
  for (size_t i = 0; i < refs.size(); ++i) {
    for (const auto &w : refs[i]) {
      ++total;
      if (lists[i] && lists[i]->Contains(w)) ++hit;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hit) / total;
}

}  // namespace tcpgen
