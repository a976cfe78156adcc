// tcpgen/tests/training_test.cc

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

#include "tcpgen/training.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "test_util.h"

namespace tcpgen {
namespace {

using testing::RandomMatrix;
using testing::TinyVocab;

const ModelDims kDims{4, 5, 4, 3, 3};

std::unique_ptr<ToyModel> MakeModel(ModelFamily f, Variant v,
                                    const SubwordVocab &vocab, uint64_t seed) {
  std::unique_ptr<ToyModel> m;
  if (f == ModelFamily::kAed)
    m = std::make_unique<ToyAed>(vocab, kDims, v);
  else
    m = std::make_unique<ToyRnnt>(vocab, kDims, v);
  Prng rng(seed);
  m->Init(&rng);
  return m;
}

std::vector<TrainUtterance> SmallCorpus(const SubwordVocab &vocab, int n,
                                        uint64_t seed) {
  const char *sentences[] = {"BADO KI", "DO BAKI", "KIBA DO DO", "BA KIDO",
                             "DOBA BA", "KI KI BADO"};
  Prng rng(seed);
  std::vector<TrainUtterance> out;
  for (int i = 0; i < n; ++i) {
    TrainUtterance u;
    u.id = "u" + std::to_string(i);
    std::string text = sentences[i % 6];
    u.words = SplitWords(text);
    u.target = TokenizeSentence(vocab, text);
    u.features = RandomMatrix(static_cast<int>(u.target.size()) * 2 + 1, 4, &rng);
    out.push_back(u);
  }
  return out;
}

std::vector<double> Flatten(ToyModel &m) {
  std::vector<double> v;
  for (const NamedParam &p : m.Params())
    v.insert(v.end(), p.value->data().begin(), p.value->data().end());
  return v;
}

std::vector<double> Flatten(const GradSet &g) {
  std::vector<double> v;
  for (size_t i = 0; i < g.size(); ++i)
    v.insert(v.end(), g.at(i).data().begin(), g.at(i).data().end());
  return v;
}

TEST(Adam, MatchesHandIteration) {
  Matrix w(1, 2);
  w(0, 0) = 1.0;
  w(0, 1) = -2.0;
  ParamList params{{"w", &w}};
  const double lr = 0.1, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  Adam adam(params, lr, b1, b2, eps);
  const double g[2][2] = {{0.5, -1.0}, {0.25, 2.0}};
  double m[2] = {0, 0}, v[2] = {0, 0}, x[2] = {1.0, -2.0};
  for (int t = 1; t <= 2; ++t) {
    GradSet grads(params);
    grads.at(0)(0, 0) = g[t - 1][0];
    grads.at(0)(0, 1) = g[t - 1][1];
    adam.Step(grads);
    for (int j = 0; j < 2; ++j) {
      m[j] = b1 * m[j] + (1 - b1) * g[t - 1][j];
      v[j] = b2 * v[j] + (1 - b2) * g[t - 1][j] * g[t - 1][j];
      double mh = m[j] / (1 - std::pow(b1, t)), vh = v[j] / (1 - std::pow(b2, t));
      x[j] -= lr * mh / (std::sqrt(vh) + eps);
    }
    EXPECT_NEAR(w(0, 0), x[0], 1e-15);
    EXPECT_NEAR(w(0, 1), x[1], 1e-15);
  }
  // The first step moves each weight by about lr against the gradient sign.
  EXPECT_EQ(adam.steps(), 2);
}

TEST(ClipGradNorm, RescalesOnlyAboveLimit) {
  Matrix a(1, 2), b(2, 1);
  ParamList params{{"a", &a}, {"b", &b}};
  GradSet g(params);
  g.at(0)(0, 0) = 3.0;
  g.at(1)(1, 0) = 4.0;
  EXPECT_DOUBLE_EQ(ClipGradNorm(&g, 10.0), 5.0);
  EXPECT_DOUBLE_EQ(g.at(0)(0, 0), 3.0);
  EXPECT_DOUBLE_EQ(ClipGradNorm(&g, 1.0), 5.0);
  EXPECT_NEAR(g.at(0)(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(g.at(1)(1, 0), 0.8, 1e-15);
  EXPECT_NEAR(std::sqrt(g.SquaredNorm()), 1.0, 1e-15);
}

TEST(TrainingList, DropRateExtremes) {
  RareWordList rare({"BADO", "BAKI", "KIBA", "DOBA", "KIDO"});
  TrainUtterance u;
  u.id = "u0";
  u.words = {"BADO", "KI", "KIBA"};
  TrainConfig c;
  c.distractor_count = 2;
  c.drop_rate = 0.0;
  for (int epoch = 1; epoch <= 5; ++epoch) {
    BiasingList l = TrainingList(c, rare, u, epoch);
    EXPECT_TRUE(l.Contains("BADO"));
    EXPECT_TRUE(l.Contains("KIBA"));
    EXPECT_EQ(l.words.size(), 4u);
  }
  c.drop_rate = 1.0;
  for (int epoch = 1; epoch <= 5; ++epoch) {
    BiasingList l = TrainingList(c, rare, u, epoch);
    EXPECT_FALSE(l.Contains("BADO"));
    EXPECT_FALSE(l.Contains("KIBA"));
    EXPECT_EQ(l.words.size(), 2u);
  }
  // Lists are rebuilt each epoch and reproducible for a given epoch.
  c.drop_rate = 0.4;
  EXPECT_EQ(TrainingList(c, rare, u, 3).ToText(), TrainingList(c, rare, u, 3).ToText());
}

TEST(BatchGradient, ParallelEqualsSerialBitwise) {
  SubwordVocab vocab = TinyVocab();
  PrefixTree tree = PrefixTree::Build(vocab, {"BADO", "KIBA", "BAKI"});
  auto corpus = SmallCorpus(vocab, 9, 3);
  for (ModelFamily f : {ModelFamily::kAed, ModelFamily::kRnnt}) {
    auto model = MakeModel(f, Variant::kTcpgenDb, vocab, 4);
    std::vector<BatchItem> batch;
    for (size_t i = 0; i < corpus.size(); ++i)
      batch.push_back({&corpus[i], i % 3 ? &tree : nullptr, 77 + i});
    for (double dropout : {0.0, 0.3}) {
      GradSet gs, gp;
      double ls = BatchGradientSerial(*model, batch, dropout, &gs);
      double lp = BatchGradientParallel(*model, batch, dropout, &gp);
      EXPECT_EQ(ls, lp);
      EXPECT_EQ(Flatten(gs), Flatten(gp));
    }
  }
}

TEST(BatchGradient, DuplicatedUtteranceDoublesGradient) {
  SubwordVocab vocab = TinyVocab();
  PrefixTree tree = PrefixTree::Build(vocab, {"BADO", "KIBA"});
  auto corpus = SmallCorpus(vocab, 1, 5);
  for (ModelFamily f : {ModelFamily::kAed, ModelFamily::kRnnt}) {
    auto model = MakeModel(f, Variant::kTcpgen, vocab, 6);
    GradSet one, two;
    double l1 = BatchGradientSerial(*model, {{&corpus[0], &tree, 1}}, 0.0, &one);
    double l2 = BatchGradientSerial(
        *model, {{&corpus[0], &tree, 1}, {&corpus[0], &tree, 1}}, 0.0, &two);
    EXPECT_NEAR(l2, 2 * l1, 1e-12);
    auto a = Flatten(one), b = Flatten(two);
    for (size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b[i], 2 * a[i], 1e-12);
  }
}

TEST(Loss, EmptyTreeEqualsBaselinePath) {
  SubwordVocab vocab = TinyVocab();
  PrefixTree empty;
  auto corpus = SmallCorpus(vocab, 6, 7);
  for (ModelFamily f : {ModelFamily::kAed, ModelFamily::kRnnt}) {
    for (Variant v : {Variant::kDeepBiasing, Variant::kTcpgen, Variant::kTcpgenDb}) {
      auto model = MakeModel(f, v, vocab, 8);
      for (const TrainUtterance &u : corpus) {
        ad::Tape t1, t2;
        double a = t1.scalar(model->Loss(t1, u.features, u.target, &empty));
        double b = t2.scalar(model->Loss(t2, u.features, u.target, nullptr));
        EXPECT_NEAR(a, b, 1e-9) << ToString(f) << ":" << ToString(v);
      }
    }
  }
}

TEST(Loss, DropoutIsSeededAndOffByDefault) {
  SubwordVocab vocab = TinyVocab();
  auto corpus = SmallCorpus(vocab, 1, 9);
  const TrainUtterance &u = corpus[0];
  for (ModelFamily f : {ModelFamily::kAed, ModelFamily::kRnnt}) {
    auto model = MakeModel(f, Variant::kBaseline, vocab, 10);
    ad::Tape t0, t1, t2, t3;
    Prng r1(5), r2(5);
    double plain = t0.scalar(model->Loss(t0, u.features, u.target, nullptr));
    double zero = t1.scalar(
        model->Loss(t1, u.features, u.target, nullptr, DropoutSpec{0.0, &r1}));
    double a = t2.scalar(
        model->Loss(t2, u.features, u.target, nullptr, DropoutSpec{0.5, &r1}));
    double b = t3.scalar(
        model->Loss(t3, u.features, u.target, nullptr, DropoutSpec{0.5, &r2}));
    EXPECT_EQ(plain, zero);
    EXPECT_NE(plain, a);
    EXPECT_EQ(a, b);
  }
}

TrainConfig SmallConfig() {
  TrainConfig c;
  c.epochs = 6;
  c.batch_size = 4;
  c.learning_rate = 1e-2;
  c.seed = 11;
  c.distractor_count = 2;
  return c;
}

TEST(Train, LossDecreasesAndRunsAreReproducible) {
  SubwordVocab vocab = TinyVocab();
  auto corpus = SmallCorpus(vocab, 12, 12);
  RareWordList rare({"BADO", "KIBA", "BAKI", "DOBA", "KIDO"});
  for (ModelFamily f : {ModelFamily::kAed, ModelFamily::kRnnt}) {
    TrainConfig c = SmallConfig();
    c.dropout = 0.1;
    auto a = MakeModel(f, Variant::kTcpgen, vocab, 13);
    auto b = MakeModel(f, Variant::kTcpgen, vocab, 13);
    auto ha = Train(*a, c, corpus, rare);
    c.parallel = false;
    auto hb = Train(*b, c, corpus, rare);
    ASSERT_EQ(ha.size(), 6u);
    EXPECT_LT(ha.back().mean_loss, ha.front().mean_loss);
    EXPECT_EQ(Flatten(*a), Flatten(*b));
    for (size_t i = 0; i < ha.size(); ++i) EXPECT_EQ(ha[i].mean_loss, hb[i].mean_loss);
  }
}

TEST(Train, CallbackSeesEveryEpoch) {
  SubwordVocab vocab = TinyVocab();
  auto corpus = SmallCorpus(vocab, 5, 14);
  auto model = MakeModel(ModelFamily::kAed, Variant::kBaseline, vocab, 15);
  TrainConfig c = SmallConfig();
  c.epochs = 3;
  std::vector<int> seen;
  Train(*model, c, corpus, RareWordList(), [&](const EpochStats &s) {
    seen.push_back(s.epoch);
    EXPECT_GT(s.mean_grad_norm, 0.0);
  });
  EXPECT_EQ(seen, (std::vector<int>{1, 2, 3}));
}

TEST(Train, NonFiniteLossThrowsDiverged) {
  SubwordVocab vocab = TinyVocab();
  auto corpus = SmallCorpus(vocab, 4, 16);
  auto model = MakeModel(ModelFamily::kRnnt, Variant::kBaseline, vocab, 17);
  model->Params()[0].value->data()[0] = std::numeric_limits<double>::quiet_NaN();
  TrainConfig c = SmallConfig();
  try {
    Train(*model, c, corpus, RareWordList());
    FAIL() << "expected TrainingDiverged";
  } catch (const TrainingDiverged &e) {
    EXPECT_EQ(e.epoch(), 1);
    EXPECT_EQ(e.step(), 1);
  }
}

TEST(TrainConfig, RejectsBadValues) {
  TrainConfig c;
  c.learning_rate = 0.0;
  EXPECT_THROW(c.Validate(), ContractViolation);
  c = TrainConfig();
  c.dropout = 1.0;
  EXPECT_THROW(c.Validate(), ContractViolation);
  c = TrainConfig();
  c.drop_rate = 1.5;
  EXPECT_THROW(c.Validate(), ContractViolation);
  c = TrainConfig();
  c.batch_size = 0;
  EXPECT_THROW(c.Validate(), ContractViolation);
}

}  // namespace
}  // namespace tcpgen
