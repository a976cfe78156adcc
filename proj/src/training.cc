// tcpgen/src/training.cc

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

#include <cmath>
#include <numeric>

#include "tcpgen/prng.h"

namespace tcpgen {

void TrainConfig::Validate() const {
  TCPGEN_CHECK(learning_rate > 0.0);
  TCPGEN_CHECK(beta1 >= 0.0 && beta1 < 1.0);
  TCPGEN_CHECK(beta2 >= 0.0 && beta2 < 1.0);
  TCPGEN_CHECK(epsilon > 0.0);
  TCPGEN_CHECK(clip_norm > 0.0);
  TCPGEN_CHECK(epochs >= 0);
  TCPGEN_CHECK(batch_size >= 1);
  TCPGEN_CHECK(drop_rate >= 0.0 && drop_rate <= 1.0);
  TCPGEN_CHECK(distractor_count >= 0);
  TCPGEN_CHECK(dropout >= 0.0 && dropout < 1.0);
}

Adam::Adam(const ParamList &params, double lr, double beta1, double beta2,
           double epsilon)
    : params_(params), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(epsilon) {
  for (const NamedParam &p : params_) {
    m_.emplace_back(p.value->rows(), p.value->cols());
    v_.emplace_back(p.value->rows(), p.value->cols());
  }
}

void Adam::Step(const GradSet &grads) {
  TCPGEN_CHECK(grads.size() == params_.size());
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (size_t i = 0; i < params_.size(); ++i) {
    double *w = params_[i].value->data().data();
    const double *g = grads.at(i).data().data();
    double *m = m_[i].data().data();
    double *v = v_[i].data().data();
    const size_t n = m_[i].size();
    for (size_t j = 0; j < n; ++j) {
      m[j] = beta1_ * m[j] + (1.0 - beta1_) * g[j];
      v[j] = beta2_ * v[j] + (1.0 - beta2_) * g[j] * g[j];
      w[j] -= lr_ * (m[j] / c1) / (std::sqrt(v[j] / c2) + eps_);
    }
  }
}

double ClipGradNorm(GradSet *grads, double max_norm) {
  double norm = std::sqrt(grads->SquaredNorm());
  if (norm > max_norm) grads->Scale(max_norm / norm);
  return norm;
}

double UtteranceGradient(const ToyModel &model, const BatchItem &item,
                         double dropout, GradSet *grads) {
  Prng rng(item.dropout_seed);
  DropoutSpec spec;
  if (dropout > 0.0) spec = {dropout, &rng};
  ad::Tape tape(grads);
  ad::Var loss = model.Loss(tape, item.utt->features, item.utt->target,
                            item.tree, spec);
  double value = tape.scalar(loss);
  if (std::isfinite(value)) tape.Backward(loss);
  return value;
}

double BatchGradientSerial(ToyModel &model, const std::vector<BatchItem> &batch,
                           double dropout, GradSet *grads) {
  // Per-utterance gradients added in batch order, as in the parallel form,
  // so the two agree bit for bit.
  const ParamList params = model.Params();
  *grads = GradSet(params);
  double total = 0.0;
  for (const BatchItem &item : batch) {
    GradSet local(params);
    total += UtteranceGradient(model, item, dropout, &local);
    grads->Add(local);
  }
  return total;
}

double BatchGradientParallel(ToyModel &model,
                             const std::vector<BatchItem> &batch,
                             double dropout, GradSet *grads) {
  const ParamList params = model.Params();
  const int n = static_cast<int>(batch.size());
  std::vector<GradSet> local(n);
  std::vector<double> losses(n, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    local[i] = GradSet(params);
    losses[i] = UtteranceGradient(model, batch[i], dropout, &local[i]);
  }
  *grads = GradSet(params);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    grads->Add(local[i]);
    total += losses[i];
  }
  return total;
}

BiasingList TrainingList(const TrainConfig &config, const RareWordList &rare,
                         const TrainUtterance &utt, int epoch) {
  Prng rng(DeriveSeed(config.seed,
                      "train-list/" + std::to_string(epoch) + "/" + utt.id));
  return BuildUtteranceList(utt.words, rare, config.distractor_count, &rng,
                            config.drop_rate);
}

std::vector<EpochStats> Train(ToyModel &model, const TrainConfig &config,
                              const std::vector<TrainUtterance> &corpus,
                              const RareWordList &rare,
                              const EpochCallback &on_epoch) {
  config.Validate();
  TCPGEN_CHECK(!corpus.empty());
  const bool biased =
      UsesTcpgen(model.variant()) || UsesDeepBiasing(model.variant());
  const ParamList params = model.Params();
  Adam adam(params, config.learning_rate, config.beta1, config.beta2,
            config.epsilon);
  std::vector<int> order(corpus.size());
  std::vector<EpochStats> history;
  int64_t step = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Prng shuffle_rng(DeriveSeed(config.seed, "shuffle/" + std::to_string(epoch)));
    Shuffle(&order, &shuffle_rng);

    EpochStats stats;
    stats.epoch = epoch;
    int64_t batches = 0;
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      size_t end = std::min(order.size(), start + config.batch_size);
      std::vector<BatchItem> batch;
      std::vector<PrefixTree> tree_store;
      tree_store.reserve(end - start);
      for (size_t i = start; i < end; ++i) {
        const TrainUtterance &u = corpus[order[i]];
        BatchItem item;
        item.utt = &u;
        item.dropout_seed = DeriveSeed(
            config.seed, "dropout/" + std::to_string(epoch) + "/" + u.id);
        if (biased) {
          BiasingList list = TrainingList(config, rare, u, epoch);
          tree_store.push_back(PrefixTree::Build(model.vocab(), list.words));
          item.tree = &tree_store.back();
        }
        batch.push_back(item);
      }

      GradSet grads;
      double loss =
          config.parallel
              ? BatchGradientParallel(model, batch, config.dropout, &grads)
              : BatchGradientSerial(model, batch, config.dropout, &grads);
      ++step;
      if (!std::isfinite(loss)) throw TrainingDiverged(epoch, step);
      // Mean over utterances.
      grads.Scale(1.0 / static_cast<double>(batch.size()));
      double norm = ClipGradNorm(&grads, config.clip_norm);
      if (!std::isfinite(norm)) throw TrainingDiverged(epoch, step);
      adam.Step(grads);
      stats.mean_loss += loss;
      stats.mean_grad_norm += norm;
      ++batches;
    }
    stats.mean_loss /= static_cast<double>(corpus.size());
    stats.mean_grad_norm /= static_cast<double>(std::max<int64_t>(batches, 1));
    history.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return history;
}

}  // namespace tcpgen
