// tcpgen/src/scoring.cc

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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "tcpgen/common.h"

namespace tcpgen {

Alignment Align(const std::vector<std::string> &ref,
                const std::vector<std::string> &hyp) {
  const size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1, 0));
  for (size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      int diag = d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      d[i][j] = std::min({diag, d[i - 1][j] + 1, d[i][j - 1] + 1});
    }
  }

  Alignment a;
  a.ref = ref;
  a.hyp = hyp;
  a.cost = d[n][m];
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] &&
        d[i][j] == d[i - 1][j - 1]) {
      a.ops.push_back({EditOp::kMatch, int(i - 1), int(j - 1)});
      --i, --j;
    } else if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1) {
      a.ops.push_back({EditOp::kSubstitute, int(i - 1), int(j - 1)});
      --i, --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      a.ops.push_back({EditOp::kDelete, int(i - 1), -1});
      --i;
    } else {
      a.ops.push_back({EditOp::kInsert, -1, int(j - 1)});
      --j;
    }
  }
  std::reverse(a.ops.begin(), a.ops.end());
  return a;
}

void ErrorCounts::Add(const ErrorCounts &o) {
  sub += o.sub;
  del += o.del;
  ins += o.ins;
  ref_tokens += o.ref_tokens;
}

std::optional<double> RwerCounts::Rate() const {
  if (bias_tokens == 0) return std::nullopt;
  return static_cast<double>(errors()) / bias_tokens;
}

void RwerCounts::Add(const RwerCounts &o) {
  sub += o.sub;
  del += o.del;
  ins += o.ins;
  bias_tokens += o.bias_tokens;
  hyp_side_sub += o.hyp_side_sub;
}

ErrorCounts CountErrors(const Alignment &a) {
  ErrorCounts c;
  c.ref_tokens = static_cast<int64_t>(a.ref.size());
  for (const auto &op : a.ops) {
    switch (op.op) {
      case EditOp::kMatch: break;
      case EditOp::kSubstitute: ++c.sub; break;
      case EditOp::kDelete: ++c.del; break;
      case EditOp::kInsert: ++c.ins; break;
    }
  }
  return c;
}

RwerCounts CountRwer(const Alignment &a, const BiasingList &list) {
  RwerCounts c;
  for (const auto &w : a.ref) {
    if (list.Contains(w)) ++c.bias_tokens;
  }
  for (const auto &op : a.ops) {
    switch (op.op) {
      case EditOp::kMatch: break;
      case EditOp::kSubstitute:
        if (list.Contains(a.ref[op.ref])) {
          ++c.sub;
        } else if (list.Contains(a.hyp[op.hyp])) {
          ++c.hyp_side_sub;
        }
        break;
      case EditOp::kDelete:
        if (list.Contains(a.ref[op.ref])) ++c.del;
        break;
      case EditOp::kInsert:
        if (list.Contains(a.hyp[op.hyp])) ++c.ins;
        break;
    }
  }
  return c;
}

double ComputeWer(std::span<const Alignment> alignments) {
  ErrorCounts total;
  for (const auto &a : alignments) total.Add(CountErrors(a));
  if (total.ref_tokens == 0) throw FormatError("WER: empty reference set");
  return static_cast<double>(total.errors()) / total.ref_tokens;
}

std::optional<double> ComputeRwer(std::span<const Alignment> alignments,
                                  std::span<const BiasingList *const> lists) {
  TCPGEN_CHECK(alignments.size() == lists.size());
  RwerCounts total;
  for (size_t i = 0; i < alignments.size(); ++i) {
    if (lists[i]) total.Add(CountRwer(alignments[i], *lists[i]));
  }
  return total.Rate();
}

SignTestResult SignTest(std::span<const std::pair<double, double>> pairs) {
  SignTestResult r;
  for (const auto &[a, b] : pairs) {
    if (a < b) {
      ++r.first_better;
    } else if (b < a) {
      ++r.second_better;
    } else {
      ++r.ties;
    }
  }
  const int n = r.first_better + r.second_better;
  if (n == 0) return r;
  const int k = std::min(r.first_better, r.second_better);
  // P(X <= k) for X ~ Binomial(n, 1/2). The pmf recurrence starting from
  // 2^-n is exact for small n; large n falls back to log space.
  double tail = 0.0;
  if (n <= 1000) {
    double pmf = std::ldexp(1.0, -n);
    for (int i = 0; i <= k; ++i) {
      tail += pmf;
      pmf = pmf * (n - i) / (i + 1);
    }
  } else {
    for (int i = 0; i <= k; ++i) {
      double log_pmf = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
                       std::lgamma(n - i + 1.0) - n * std::log(2.0);
      tail += std::exp(log_pmf);
    }
  }
  r.p_value = std::min(1.0, 2.0 * tail);
  return r;
}

double ScoreReport::Wer() const {
  if (wer.ref_tokens == 0) throw FormatError("WER: empty reference set");
  return static_cast<double>(wer.errors()) / wer.ref_tokens;
}

namespace {

std::string Fmt(const char *fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string RateText(const std::optional<double> &r) {
  return r ? Fmt("%.4f", *r) : std::string("n/a (no biasing tokens)");
}

std::string PText(const SignTestResult &s) {
  if (!s.p_value) return "undefined (all tied)";
  return Fmt("%.6g", *s.p_value) + " (" + std::to_string(s.first_better) +
         " better, " + std::to_string(s.second_better) + " worse, " +
         std::to_string(s.ties) + " tied)";
}

}  // namespace

std::string ScoreReport::ToText(const ScoreReport *baseline) const {
  const std::string lv = ToString(level);
  std::string out;
  out += "# system " + system + "\n";
  out += "[WER]\n";
  out += "wer = " + Fmt("%.4f", wer.ref_tokens ? Wer() : 0.0) + "\n";
  out += "[R-WER_" + lv + "]\n";
  out += "rwer = " + RateText(Rwer()) + "\n";
  out += "[counts]\n";
  out += "sub = " + std::to_string(wer.sub) + "\n";
  out += "del = " + std::to_string(wer.del) + "\n";
  out += "ins = " + std::to_string(wer.ins) + "\n";
  out += "ref_tokens = " + std::to_string(wer.ref_tokens) + "\n";
  out += "bias_sub = " + std::to_string(rwer.sub) + "\n";
  out += "bias_del = " + std::to_string(rwer.del) + "\n";
  out += "bias_ins = " + std::to_string(rwer.ins) + "\n";
  out += "bias_tokens = " + std::to_string(rwer.bias_tokens) + "\n";
  out += "hyp_side_bias_sub = " + std::to_string(rwer.hyp_side_sub) + "\n";
  out += "[chapters]\n";
  out += "chapter\tref_tokens\terrors\twer\tbias_tokens\tbias_errors\trwer\n";
  for (const auto &c : chapters) {
    out += c.chapter_id + "\t" + std::to_string(c.wer.ref_tokens) + "\t" +
           std::to_string(c.wer.errors()) + "\t" +
           Fmt("%.4f", c.wer.ref_tokens
                           ? double(c.wer.errors()) / c.wer.ref_tokens
                           : 0.0) +
           "\t" + std::to_string(c.rwer.bias_tokens) + "\t" +
           std::to_string(c.rwer.errors()) + "\t" +
           (c.rwer.Rate() ? Fmt("%.4f", *c.rwer.Rate()) : "n/a") + "\n";
  }
  if (baseline) {
    out += "[sign-test vs " + baseline->system + "]\n";
    out += "wer_p = " + PText(ChapterSignTest(*this, *baseline, false)) + "\n";
    out += "rwer_p = " + PText(ChapterSignTest(*this, *baseline, true)) + "\n";
  }
  out += "[summary]\n" + SummaryLine() + "\n";
  return out;
}

std::string ScoreReport::SummaryLine() const {
  auto r = Rwer();
  return system + "\t" + ToString(level) + "\t" +
         Fmt("%.6f", wer.ref_tokens ? Wer() : 0.0) + "\t" +
         (r ? Fmt("%.6f", *r) : std::string("nan")) + "\t" +
         std::to_string(wer.sub) + "\t" + std::to_string(wer.del) + "\t" +
         std::to_string(wer.ins) + "\t" + std::to_string(wer.ref_tokens) +
         "\t" + std::to_string(rwer.sub) + "\t" + std::to_string(rwer.del) +
         "\t" + std::to_string(rwer.ins) + "\t" +
         std::to_string(rwer.bias_tokens);
}

ScoreReport ScoreSet(const std::string &system, ListLevel level,
                     std::vector<ScoredUtterance> utts) {
  std::sort(utts.begin(), utts.end(),
            [](const ScoredUtterance &a, const ScoredUtterance &b) {
              return a.utt_id < b.utt_id;
            });
  ScoreReport rep;
  rep.system = system;
  rep.level = level;
  std::map<std::string, ChapterScore> chapters;
  const BiasingList empty;
  for (const auto &u : utts) {
    Alignment a = Align(u.ref, u.hyp);
    ErrorCounts e = CountErrors(a);
    RwerCounts r = CountRwer(a, u.list ? *u.list : empty);
    rep.wer.Add(e);
    rep.rwer.Add(r);
    ChapterScore &c = chapters[u.chapter_id];
    c.chapter_id = u.chapter_id;
    c.wer.Add(e);
    c.rwer.Add(r);
  }
  for (auto &[id, c] : chapters) rep.chapters.push_back(c);
  return rep;
}

SignTestResult ChapterSignTest(const ScoreReport &a, const ScoreReport &b,
                               bool use_rwer) {
  std::map<std::string, const ChapterScore *> other;
  for (const auto &c : b.chapters) other[c.chapter_id] = &c;
  std::vector<std::pair<double, double>> pairs;
  for (const auto &c : a.chapters) {
    auto it = other.find(c.chapter_id);
    if (it == other.end()) continue;
    if (use_rwer) {
      auto ra = c.rwer.Rate();
      auto rb = it->second->rwer.Rate();
      if (ra && rb) pairs.emplace_back(*ra, *rb);
    } else if (c.wer.ref_tokens > 0) {
      pairs.emplace_back(double(c.wer.errors()) / c.wer.ref_tokens,
                         double(it->second->wer.errors()) /
                             it->second->wer.ref_tokens);
    }
  }
  return SignTest(pairs);
}

}  // namespace tcpgen
