// tcpgen/include/tcpgen/scoring.h

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

#ifndef TCPGEN_SCORING_H_
#define TCPGEN_SCORING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tcpgen/biasing_lists.h"

namespace tcpgen {

enum class EditOp { kMatch, kSubstitute, kDelete, kInsert };

struct AlignedPair {
  EditOp op;
  int ref = -1;  // index into the reference, -1 for insertions
  int hyp = -1;  // index into the hypothesis, -1 for deletions
};

struct Alignment {
  std::vector<std::string> ref;
  std::vector<std::string> hyp;
  std::vector<AlignedPair> ops;
  int cost = 0;
};

// Minimal unit-cost Levenshtein alignment. Backtrace prefers match, then
// substitution, then deletion, then insertion.
Alignment Align(const std::vector<std::string> &ref,
                const std::vector<std::string> &hyp);

struct ErrorCounts {
  int64_t sub = 0, del = 0, ins = 0, ref_tokens = 0;
  int64_t errors() const { return sub + del + ins; }
  void Add(const ErrorCounts &o);
};

// Substitutions and deletions count when the reference word is in the list;
// insertions count when the inserted word is. The denominator is the number
// of reference tokens in the list.
struct RwerCounts {
  int64_t sub = 0, del = 0, ins = 0, bias_tokens = 0;
  // Substitutions whose hypothesis word (but not the reference word) is in
  // the list. Reported only; not part of the rate.
  int64_t hyp_side_sub = 0;
  int64_t errors() const { return sub + del + ins; }
  // Unset when there are no biasing tokens.
  std::optional<double> Rate() const;
  void Add(const RwerCounts &o);
};

ErrorCounts CountErrors(const Alignment &a);
RwerCounts CountRwer(const Alignment &a, const BiasingList &list);

// (S + D + I) / N_ref over the set. Throws FormatError when N_ref is zero.
double ComputeWer(std::span<const Alignment> alignments);
std::optional<double> ComputeRwer(std::span<const Alignment> alignments,
                                  std::span<const BiasingList *const> lists);

struct SignTestResult {
  int first_better = 0;   // pairs with first < second
  int second_better = 0;  // pairs with second < first
  int ties = 0;
  std::optional<double> p_value;  // unset when every pair is tied
};

// Exact two-sided binomial sign test over (metric_A, metric_B) pairs with
// ties removed; the p-value is capped at 1.
SignTestResult SignTest(std::span<const std::pair<double, double>> pairs);

struct ScoredUtterance {
  std::string utt_id;
  std::string chapter_id;
  std::vector<std::string> ref;
  std::vector<std::string> hyp;
  const BiasingList *list = nullptr;
};

struct ChapterScore {
  std::string chapter_id;
  ErrorCounts wer;
  RwerCounts rwer;
};

struct ScoreReport {
  std::string system;
  ListLevel level = ListLevel::kUtterance;
  ErrorCounts wer;
  RwerCounts rwer;
  std::vector<ChapterScore> chapters;  // sorted by chapter id

  double Wer() const;
  std::optional<double> Rwer() const { return rwer.Rate(); }
  // Human-readable report. When `baseline` is given, chapter-level sign tests
  // of this system against it are appended.
  std::string ToText(const ScoreReport *baseline = nullptr) const;
  // One tab-separated line:
  // system level wer rwer S D I N S_b D_b I_b N_b
  std::string SummaryLine() const;
};

// Aligns every utterance and folds the counts in utterance-id order.
ScoreReport ScoreSet(const std::string &system, ListLevel level,
                     std::vector<ScoredUtterance> utts);

// Per-chapter (WER, R-WER) sign tests of `a` against `b`.
SignTestResult ChapterSignTest(const ScoreReport &a, const ScoreReport &b,
                               bool use_rwer);

}  // namespace tcpgen

#endif  // TCPGEN_SCORING_H_
