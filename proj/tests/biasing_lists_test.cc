// tcpgen/tests/biasing_lists_test.cc

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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "tcpgen/common.h"
#include "test_util.h"

namespace tcpgen {
namespace {

using Words = std::vector<std::string>;

// "W0000", "W0001", ...
Words NumberedWords(int n, const std::string &prefix = "W") {
  Words w;
  char buf[16];
  for (int i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "%04d", i);
    w.push_back(prefix + buf);
  }
  return w;
}

bool IsSortedUnique(const Words &w) {
  return std::is_sorted(w.begin(), w.end()) &&
         std::adjacent_find(w.begin(), w.end()) == w.end();
}

TEST(RareWordList, ThresholdSemantics) {
  std::vector<Words> corpus(100, Words{"THE"});
  corpus[0].push_back("VIGNETTE");
  corpus[1].push_back("TURNER");
  corpus[2].push_back("TURNER");
  corpus[3].push_back("TURNER");
  WordCounts counts = CountWords(corpus);
  RareWordList r = BuildRareWordList(counts, 2);
  EXPECT_EQ(r.words(), Words{"VIGNETTE"});
  EXPECT_FALSE(r.Contains("THE"));
  EXPECT_TRUE(BuildRareWordList(counts, 0).empty());
  EXPECT_EQ(BuildRareWordList(counts, 3).words(), (Words{"TURNER", "VIGNETTE"}));
  EXPECT_THROW(BuildRareWordList(WordCounts{}, 2), FormatError);
}

TEST(RareWordList, MatchesBruteForceCountOnZipfCorpus) {
  Prng rng(31);
  Words lexicon = NumberedWords(60);
  std::vector<double> cdf;
  double total = 0.0;
  for (size_t i = 0; i < lexicon.size(); ++i) {
    total += 1.0 / std::pow(i + 1.0, 1.2);
    cdf.push_back(total);
  }
  std::vector<Words> corpus;
  for (int s = 0; s < 400; ++s) {
    Words sentence;
    for (int k = 0; k < 6; ++k) {
      double u = rng.Uniform() * total;
      size_t idx = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
      sentence.push_back(lexicon[std::min(idx, lexicon.size() - 1)]);
    }
    corpus.push_back(sentence);
  }
  WordCounts counts = CountWords(corpus);
  for (int threshold : {0, 1, 3, 10, 50}) {
    std::set<std::string> expected;
    for (const std::string &w : lexicon) {
      int64_t c = 0;
      for (const Words &s : corpus) c += std::count(s.begin(), s.end(), w);
      if (c > 0 && c <= threshold) expected.insert(w);
    }
    RareWordList r = BuildRareWordList(counts, threshold);
    EXPECT_EQ(r.words(), Words(expected.begin(), expected.end())) << threshold;
  }
}

TEST(RareWordList, FractionKeepsLeastFrequent) {
  WordCounts counts{{"A", 5}, {"B", 1}, {"C", 1}, {"D", 3}, {"E", 9}};
  EXPECT_EQ(BuildRareWordListByFraction(counts, 0.4).words(), (Words{"B", "C"}));
  // ceil(0.5 * 5) = 3.
  EXPECT_EQ(BuildRareWordListByFraction(counts, 0.5).words(),
            (Words{"B", "C", "D"}));
  EXPECT_TRUE(BuildRareWordListByFraction(counts, 0.0).empty());
}

TEST(RareWordList, UnsegmentableWordsAreDropped) {
  SubwordVocab vocab = testing::TinyVocab();
  RareWordList rare({"BADO", "KIKI", "XYZ", "BAD"});
  Words rejected;
  RareWordList kept = FilterSegmentable(vocab, rare, &rejected);
  EXPECT_EQ(kept.words(), (Words{"BADO", "KIKI"}));
  std::sort(rejected.begin(), rejected.end());
  EXPECT_EQ(rejected, (Words{"BAD", "XYZ"}));
}

TEST(UtteranceList, NoDistractors) {
  RareWordList rare({"TURNER", "VIGNETTE", "BOLT"});
  Prng rng(1);
  BiasingList l = BuildUtteranceList({"THE", "VIGNETTE", "OF", "TURNER"}, rare, 0, &rng);
  EXPECT_EQ(l.words, (Words{"TURNER", "VIGNETTE"}));
  EXPECT_EQ(l.level, ListLevel::kUtterance);
}

TEST(UtteranceList, DistractorsOnly) {
  RareWordList rare(NumberedWords(40));
  Prng rng(2);
  BiasingList l = BuildUtteranceList({"THE", "CAT"}, rare, 5, &rng);
  EXPECT_EQ(l.words.size(), 5u);
  for (const auto &w : l.words) EXPECT_TRUE(rare.Contains(w));
}

TEST(UtteranceList, FewerCandidatesThanRequested) {
  RareWordList rare({"A1", "B1", "C1"});
  Prng rng(3);
  BiasingList l = BuildUtteranceList({"A1"}, rare, 10, &rng);
  EXPECT_EQ(l.words, (Words{"A1", "B1", "C1"}));
}

TEST(UtteranceList, DeterministicDisjointAndCovering) {
  RareWordList rare(NumberedWords(200));
  Prng pick(4);
  for (int trial = 0; trial < 200; ++trial) {
    Words ref{"COMMON"};
    for (int k = 0; k < 3; ++k) ref.push_back(rare.words()[pick.Below(200)]);
    const int n = static_cast<int>(pick.Below(30));
    Prng a(1000 + trial), b(1000 + trial);
    BiasingList la = BuildUtteranceList(ref, rare, n, &a);
    BiasingList lb = BuildUtteranceList(ref, rare, n, &b);
    EXPECT_EQ(la.ToText(), lb.ToText());
    EXPECT_TRUE(IsSortedUnique(la.words));
    std::set<std::string> in_ref;
    for (const auto &w : ref)
      if (rare.Contains(w)) in_ref.insert(w);
    int distractors = 0;
    for (const auto &w : la.words)
      if (!in_ref.count(w)) ++distractors;
    EXPECT_EQ(distractors, n);
    for (const auto &w : in_ref) EXPECT_TRUE(la.Contains(w)) << w;
  }
}

TEST(UtteranceList, TrainingDropRemovesReferenceWords) {
  RareWordList rare(NumberedWords(50));
  Words ref{"W0001", "W0002", "W0003"};
  Prng rng(5);
  BiasingList all_dropped = BuildUtteranceList(ref, rare, 10, &rng, 1.0);
  EXPECT_EQ(all_dropped.words.size(), 10u);
  for (const auto &w : ref) EXPECT_FALSE(all_dropped.Contains(w));
  // Drop rate 0.5: about half the reference words survive over many draws.
  int kept = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    Prng r(100 + trial);
    BiasingList l = BuildUtteranceList(ref, rare, 0, &r, 0.5);
    kept += static_cast<int>(l.words.size());
  }
  EXPECT_NEAR(kept / 6000.0, 0.5, 0.03);
}

TEST(BiasingList, TextRoundTrip) {
  BiasingList l = BiasingList::FromText("TURNER\nBOLT\nTURNER\n\nVIGNETTE\n",
                                        ListLevel::kChapter, "c1");
  EXPECT_EQ(l.words, (Words{"BOLT", "TURNER", "VIGNETTE"}));
  EXPECT_EQ(l.ToText(), "BOLT\nTURNER\nVIGNETTE\n");
  EXPECT_EQ(BiasingList::FromText(l.ToText(), ListLevel::kChapter, "c1").words, l.words);
  EXPECT_EQ(ParseListLevel("book"), ListLevel::kBook);
  EXPECT_THROW(ParseListLevel("page"), FormatError);
}

// Book whose chapters have the given lengths, back to back.
Book MakeBook(const std::vector<int> &chapter_lines) {
  Book b;
  b.id = "bk";
  int line = 0;
  for (size_t c = 0; c < chapter_lines.size(); ++c) {
    ChapterSpan span{"c" + std::to_string(c), line, line + chapter_lines[c]};
    line += chapter_lines[c];
    b.chapters.push_back(span);
  }
  b.lines.assign(line, "FILLER");
  return b;
}

TEST(ChapterWindow, MergesForwardThenBackward) {
  Book b = MakeBook({300, 300, 300, 300, 300});
  EXPECT_EQ(ChapterWindow(b, "c0", 1000), (LineWindow{0, 1200}));
  // c3 and c4 forward, then c1 backward.
  EXPECT_EQ(ChapterWindow(b, "c2", 1000), (LineWindow{300, 1500}));
  // c4 forward, then c2 and c1 backward.
  EXPECT_EQ(ChapterWindow(b, "c3", 1000), (LineWindow{300, 1500}));
  EXPECT_EQ(ChapterWindow(b, "c4", 1000), (LineWindow{300, 1500}));
  EXPECT_EQ(ChapterWindow(b, "c1", 250), (LineWindow{300, 600}));
  // Whole book when it is shorter than the window.
  Book small = MakeBook({100, 100});
  EXPECT_EQ(ChapterWindow(small, "c1", 1000), (LineWindow{0, 200}));
  EXPECT_THROW(ChapterWindow(small, "c9", 1000), FormatError);
}

TEST(BookWindow, BoundaryRules) {
  EXPECT_EQ(BookWindow(20000, {50, 51}, 10000), (LineWindow{0, 10000}));
  EXPECT_EQ(BookWindow(20000, {19990, 19995}, 10000), (LineWindow{10000, 20000}));
  EXPECT_EQ(BookWindow(3000, {1500, 1510}, 10000), (LineWindow{0, 3000}));
  LineWindow mid = BookWindow(40000, {20000, 20010}, 10000);
  EXPECT_EQ(mid.size(), 10000);
  EXPECT_EQ(mid.begin, 20005 - 5000);
  EXPECT_LE(mid.begin, 20000);
  EXPECT_GE(mid.end, 20010);
}

TEST(WindowList, PadsWithDistractors) {
  Words rare_words = NumberedWords(1500);
  rare_words.push_back("VIGNETTE");
  RareWordList rare(rare_words);
  Book b = MakeBook({10});
  b.lines[3] = "THE VIGNETTE OF A HOUSE";
  Prng rng(6);
  BiasingList l = BuildWindowList(b, {0, 10}, rare, {}, 1000, &rng,
                                  ListLevel::kChapter, "u1");
  EXPECT_EQ(l.words.size(), 1000u);
  EXPECT_TRUE(l.Contains("VIGNETTE"));
  EXPECT_TRUE(IsSortedUnique(l.words));
  EXPECT_EQ(l.level, ListLevel::kChapter);
  EXPECT_EQ(l.source_id, "u1");
}

TEST(WindowList, KeepsLeastFrequentWhenOverCap) {
  Words in_window = NumberedWords(1200, "R");
  Words extra = NumberedWords(100, "X");
  Words all = in_window;
  all.insert(all.end(), extra.begin(), extra.end());
  RareWordList rare(all);
  WordCounts counts;
  Prng rng(7);
  for (const auto &w : in_window) counts[w] = static_cast<int64_t>(rng.Below(5));
  Book b;
  b.id = "bk";
  for (size_t i = 0; i < in_window.size(); i += 10) {
    std::string line;
    for (size_t j = i; j < i + 10; ++j) line += in_window[j] + " ";
    b.lines.push_back(line);
  }
  b.chapters.push_back({"c0", 0, static_cast<int>(b.lines.size())});
  BiasingList l = BuildWindowList(b, {0, static_cast<int>(b.lines.size())}, rare,
                                  counts, 1000, &rng, ListLevel::kBook, "u");
  ASSERT_EQ(l.words.size(), 1000u);
  // Sort-and-cut oracle: (count, word) order, first 1000.
  std::vector<std::pair<int64_t, std::string>> order;
  for (const auto &w : in_window) order.push_back({counts[w], w});
  std::sort(order.begin(), order.end());
  Words expected;
  for (int i = 0; i < 1000; ++i) expected.push_back(order[i].second);
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(l.words, expected);
  int64_t max_kept = 0, min_excluded = 1 << 30;
  for (const auto &w : in_window) {
    if (l.Contains(w)) max_kept = std::max(max_kept, counts[w]);
    else min_excluded = std::min(min_excluded, counts[w]);
  }
  EXPECT_LE(max_kept, min_excluded);
}

TEST(WindowList, NoRareWordsGivesPureDistractors) {
  RareWordList rare(NumberedWords(300));
  Book b = MakeBook({20});
  Prng rng(8);
  BiasingList l = BuildWindowList(b, {0, 20}, rare, {}, 100, &rng,
                                  ListLevel::kChapter, "u");
  EXPECT_EQ(l.words.size(), 100u);
  EXPECT_TRUE(IsSortedUnique(l.words));
}

TEST(Coverage, CountsListedReferenceTokens) {
  BiasingList l1, l2;
  l1.words = {"B"};
  l2.words = {"C", "D"};
  std::vector<Words> refs{{"A", "B", "B"}, {"C", "E", "F", "G", "H"}};
  std::vector<const BiasingList *> lists{&l1, &l2};
  EXPECT_DOUBLE_EQ(Coverage(refs, lists), 3.0 / 8.0);
}

}  // namespace
}  // namespace tcpgen
