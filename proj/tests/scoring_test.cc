// tcpgen/tests/scoring_test.cc

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

#include "tcpgen/scoring.h"

#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <sstream>

#include "tcpgen/common.h"
#include "tcpgen/prng.h"
#include "oracles.h"

namespace tcpgen {
namespace {

using oracle::List;
using oracle::Split;
using oracle::Words;

TEST(Align, IdenticalSequencesAreAllMatches) {
  Alignment a = Align(Split("A B C"), Split("A B C"));
  EXPECT_EQ(a.cost, 0);
  ASSERT_EQ(a.ops.size(), 3u);
  for (const AlignedPair &p : a.ops) EXPECT_EQ(p.op, EditOp::kMatch);
}

TEST(Align, SingleEdits) {
  Alignment sub = Align(Split("A B C"), Split("A X C"));
  EXPECT_EQ(sub.cost, 1);
  EXPECT_EQ(CountErrors(sub).sub, 1);
  Alignment ins = Align(Split("A B"), Split("A B C"));
  EXPECT_EQ(ins.cost, 1);
  ASSERT_EQ(ins.ops.size(), 3u);
  EXPECT_EQ(ins.ops[2].op, EditOp::kInsert);
  EXPECT_EQ(ins.ops[2].hyp, 2);
  EXPECT_EQ(ins.ops[2].ref, -1);
}

TEST(Align, BacktracePrefersMatchOverDeletion) {
  // The trailing A is matched; the first one is deleted.
  Alignment a = Align(Split("A A"), Split("A"));
  ASSERT_EQ(a.ops.size(), 2u);
  EXPECT_EQ(a.ops[0].op, EditOp::kDelete);
  EXPECT_EQ(a.ops[0].ref, 0);
  EXPECT_EQ(a.ops[1].op, EditOp::kMatch);
  EXPECT_EQ(a.ops[1].ref, 1);
  EXPECT_EQ(a.ops[1].hyp, 0);
}

TEST(Align, BacktracePrefersSubstitutionOverInsertion) {
  Alignment a = Align(Split("A"), Split("B C"));
  ASSERT_EQ(a.ops.size(), 2u);
  EXPECT_EQ(a.ops[0].op, EditOp::kInsert);
  EXPECT_EQ(a.ops[0].hyp, 0);
  EXPECT_EQ(a.ops[1].op, EditOp::kSubstitute);
  EXPECT_EQ(a.ops[1].hyp, 1);
}

TEST(Align, CostMatchesBruteForceAndOpsReplay) {
  Prng rng(2024);
  const char *alpha[] = {"A", "B", "C"};
  for (int trial = 0; trial < 3000; ++trial) {
    Words r, h;
    int nr = static_cast<int>(rng.Below(13)), nh = static_cast<int>(rng.Below(13));
    for (int i = 0; i < nr; ++i) r.push_back(alpha[rng.Below(3)]);
    for (int i = 0; i < nh; ++i) h.push_back(alpha[rng.Below(3)]);
    Alignment a = Align(r, h);
    ASSERT_EQ(a.cost, oracle::EditDistance(r, h));
    ErrorCounts c = CountErrors(a);
    EXPECT_EQ(c.errors(), a.cost);
    EXPECT_EQ(c.ref_tokens, nr);
    Words rr, hh;
    for (const AlignedPair &p : a.ops) {
      if (p.ref >= 0) rr.push_back(r[p.ref]);
      if (p.hyp >= 0) hh.push_back(h[p.hyp]);
      switch (p.op) {
        case EditOp::kMatch: EXPECT_EQ(r[p.ref], h[p.hyp]); break;
        case EditOp::kSubstitute: EXPECT_NE(r[p.ref], h[p.hyp]); break;
        case EditOp::kDelete: EXPECT_EQ(p.hyp, -1); break;
        case EditOp::kInsert: EXPECT_EQ(p.ref, -1); break;
      }
    }
    EXPECT_EQ(rr, r);
    EXPECT_EQ(hh, h);
  }
}

// Hand-counted cases against the list {VIGNETTE, TURNER, BOLT}.
TEST(Rwer, GoldenCases) {
  BiasingList list = List("VIGNETTE TURNER BOLT");
  for (const oracle::GoldenCase &g : oracle::GoldenCases()) {
    SCOPED_TRACE(std::string(g.ref) + " | " + g.hyp);
    Alignment a = Align(Split(g.ref), Split(g.hyp));
    ErrorCounts e = CountErrors(a);
    RwerCounts r = CountRwer(a, list);
    EXPECT_EQ(e.sub, g.s);
    EXPECT_EQ(e.del, g.d);
    EXPECT_EQ(e.ins, g.i);
    EXPECT_EQ(r.sub, g.sb);
    EXPECT_EQ(r.del, g.db);
    EXPECT_EQ(r.ins, g.ib);
    EXPECT_EQ(r.bias_tokens, g.nb);
    EXPECT_EQ(r.hyp_side_sub, g.hyp_side_sub);
    // Biasing errors and tokens are subsets of all errors and tokens.
    EXPECT_LE(r.errors(), e.errors());
    EXPECT_LE(r.bias_tokens, e.ref_tokens);
    EXPECT_EQ(r.Rate().has_value(), g.nb > 0);
  }
}

TEST(Rwer, ListExamples) {
  BiasingList list = List("VIGNETTE TURNER");
  Alignment a = Align(Split("THE VIGNETTE OF TURNER"), Split("THE VIGNETTE OF TURNIP"));
  std::vector<Alignment> one{a};
  std::vector<const BiasingList *> lists{&list};
  EXPECT_DOUBLE_EQ(*ComputeRwer(one, lists), 0.5);

  Alignment same = Align(Split("THE VIGNETTE"), Split("THE VIGNETTE"));
  std::vector<Alignment> s{same};
  EXPECT_DOUBLE_EQ(*ComputeRwer(s, lists), 0.0);

  BiasingList turner = List("TURNER");
  Alignment ins = Align(Split("A TURNER"), Split("A TURNER TURNER"));
  std::vector<Alignment> i{ins};
  std::vector<const BiasingList *> tl{&turner};
  EXPECT_DOUBLE_EQ(*ComputeRwer(i, tl), 1.0);

  Alignment none = Align(Split("A B"), Split("A C"));
  std::vector<Alignment> n{none};
  EXPECT_FALSE(ComputeRwer(n, tl).has_value());
}

TEST(Rwer, CanExceedOne) {
  BiasingList list = List("BOLT");
  std::vector<Alignment> a{Align(Split("BOLT"), Split("BOLT BOLT BOLT BOLT"))};
  std::vector<const BiasingList *> l{&list};
  EXPECT_DOUBLE_EQ(*ComputeRwer(a, l), 3.0);
}

TEST(Wer, Examples) {
  std::vector<Alignment> ok{Align(Split("A B"), Split("A B")),
                            Align(Split("C"), Split("C"))};
  EXPECT_DOUBLE_EQ(ComputeWer(ok), 0.0);
  std::vector<Alignment> sub{Align(Split("A B C"), Split("A X C"))};
  EXPECT_DOUBLE_EQ(ComputeWer(sub), 1.0 / 3);
  std::vector<Alignment> ins{Align(Split("A"), Split("A B"))};
  EXPECT_DOUBLE_EQ(ComputeWer(ins), 1.0);
  std::vector<Alignment> empty;
  EXPECT_THROW(ComputeWer(empty), FormatError);
  std::vector<Alignment> no_ref{Align({}, Split("A"))};
  EXPECT_THROW(ComputeWer(no_ref), FormatError);
}

std::vector<std::pair<double, double>> Pairs(int first_better, int second_better,
                                             int ties) {
  std::vector<std::pair<double, double>> p;
  for (int i = 0; i < first_better; ++i) p.push_back({0.1, 0.2});
  for (int i = 0; i < second_better; ++i) p.push_back({0.3, 0.2});
  for (int i = 0; i < ties; ++i) p.push_back({0.25, 0.25});
  return p;
}

TEST(SignTest, ExactBinomialValues) {
  SignTestResult r = SignTest(Pairs(9, 1, 0));
  EXPECT_EQ(r.first_better, 9);
  EXPECT_EQ(r.second_better, 1);
  EXPECT_DOUBLE_EQ(*r.p_value, 22.0 / 1024.0);
  EXPECT_DOUBLE_EQ(*SignTest(Pairs(9, 1, 4)).p_value, 0.021484375);
  EXPECT_DOUBLE_EQ(*SignTest(Pairs(5, 5, 0)).p_value, 1.0);
  EXPECT_DOUBLE_EQ(*SignTest(Pairs(1, 0, 0)).p_value, 1.0);
  EXPECT_DOUBLE_EQ(*SignTest(Pairs(10, 0, 0)).p_value, 2.0 / 1024.0);
}

TEST(SignTest, AllTiesHaveNoPValue) {
  SignTestResult r = SignTest(Pairs(0, 0, 6));
  EXPECT_EQ(r.ties, 6);
  EXPECT_FALSE(r.p_value.has_value());
  EXPECT_FALSE(SignTest({}).p_value.has_value());
}

TEST(SignTest, SymmetricAndInRange) {
  Prng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<double, double>> p, q;
    int n = 1 + static_cast<int>(rng.Below(30));
    for (int i = 0; i < n; ++i) {
      double a = static_cast<double>(rng.Below(4)), b = static_cast<double>(rng.Below(4));
      p.push_back({a, b});
      q.push_back({b, a});
    }
    SignTestResult x = SignTest(p), y = SignTest(q);
    ASSERT_EQ(x.p_value.has_value(), y.p_value.has_value());
    if (!x.p_value) continue;
    EXPECT_DOUBLE_EQ(*x.p_value, *y.p_value);
    EXPECT_GT(*x.p_value, 0.0);
    EXPECT_LE(*x.p_value, 1.0);
  }
}

std::vector<ScoredUtterance> SampleSet(const BiasingList *list, bool better) {
  std::vector<ScoredUtterance> utts;
  for (int c = 0; c < 4; ++c) {
    for (int u = 0; u < 3; ++u) {
      ScoredUtterance s;
      s.utt_id = "u" + std::to_string(c) + std::to_string(u);
      s.chapter_id = "ch" + std::to_string(3 - c);
      s.ref = Split("A VIGNETTE B");
      s.hyp = better ? Split("A VIGNETTE B") : Split("A VIGNET B C");
      s.list = list;
      utts.push_back(s);
    }
  }
  return utts;
}

TEST(ScoreSet, TotalsChaptersAndDeterminism) {
  BiasingList list = List("VIGNETTE");
  ScoreReport r = ScoreSet("sys", ListLevel::kUtterance, SampleSet(&list, false));
  EXPECT_EQ(r.wer.ref_tokens, 36);
  EXPECT_EQ(r.wer.sub, 12);
  EXPECT_EQ(r.wer.ins, 12);
  EXPECT_DOUBLE_EQ(r.Wer(), 24.0 / 36.0);
  EXPECT_EQ(r.rwer.bias_tokens, 12);
  EXPECT_DOUBLE_EQ(*r.Rwer(), 1.0);
  ASSERT_EQ(r.chapters.size(), 4u);
  for (size_t i = 0; i < r.chapters.size(); ++i)
    EXPECT_EQ(r.chapters[i].chapter_id, "ch" + std::to_string(i));
  ScoreReport again = ScoreSet("sys", ListLevel::kUtterance, SampleSet(&list, false));
  EXPECT_EQ(r.ToText(), again.ToText());
  EXPECT_EQ(r.SummaryLine(), "sys\tutterance\t0.666667\t1.000000\t12\t0\t12\t36\t12\t0\t0\t12");
}

TEST(ScoreSet, ChapterSignTest) {
  BiasingList list = List("VIGNETTE");
  ScoreReport good = ScoreSet("good", ListLevel::kUtterance, SampleSet(&list, true));
  ScoreReport bad = ScoreSet("bad", ListLevel::kUtterance, SampleSet(&list, false));
  SignTestResult r = ChapterSignTest(good, bad, true);
  EXPECT_EQ(r.first_better, 4);
  EXPECT_DOUBLE_EQ(*r.p_value, 2.0 / 16.0);
  std::string text = good.ToText(&bad);
  EXPECT_NE(text.find("sign"), std::string::npos);
}

}  // namespace
}  // namespace tcpgen
