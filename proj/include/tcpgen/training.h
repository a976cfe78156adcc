// tcpgen/include/tcpgen/training.h

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

#ifndef TCPGEN_TRAINING_H_
#define TCPGEN_TRAINING_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tcpgen/autodiff.h"
#include "tcpgen/biasing_lists.h"
#include "tcpgen/biasing_tree.h"
#include "tcpgen/toy_models.h"

namespace tcpgen {

struct TrainConfig {
  double learning_rate = 3e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clip_norm = 5.0;
  int epochs = 10;
  int batch_size = 16;
  uint64_t seed = 1;
  double drop_rate = 0.4;
  int distractor_count = 20;
  // Dropout on encoder states and previous-token embeddings.
  double dropout = 0.0;
  // Evaluate the utterances of a batch in parallel. Gradients are still
  // summed in utterance order, so results do not depend on the thread count.
  bool parallel = true;

  // Throws ContractViolation on out-of-range values.
  void Validate() const;
};

struct TrainUtterance {
  std::string id;
  Matrix features;
  std::vector<std::string> words;
  TokenSeq target;
};

class Adam {
 public:
  Adam(const ParamList &params, double lr, double beta1, double beta2,
       double epsilon);
  void Step(const GradSet &grads);
  int64_t steps() const { return t_; }

 private:
  ParamList params_;
  double lr_, beta1_, beta2_, eps_;
  std::vector<Matrix> m_, v_;
  int64_t t_ = 0;
};

// Rescales `grads` to norm `max_norm` when it is larger. Returns the norm
// before clipping.
double ClipGradNorm(GradSet *grads, double max_norm);

// One utterance of a batch. A null tree disables biasing; the dropout seed
// is only used when the dropout rate is positive.
struct BatchItem {
  const TrainUtterance *utt = nullptr;
  const PrefixTree *tree = nullptr;
  uint64_t dropout_seed = 0;
};

// Loss and gradients of one utterance, accumulated into `grads`.
double UtteranceGradient(const ToyModel &model, const BatchItem &item,
                         double dropout, GradSet *grads);

// Sum of per-utterance losses and gradients over a batch. `grads` is
// overwritten. The parallel form evaluates utterances concurrently and adds
// their gradients in batch order.
double BatchGradientSerial(ToyModel &model, const std::vector<BatchItem> &batch,
                           double dropout, GradSet *grads);
double BatchGradientParallel(ToyModel &model,
                             const std::vector<BatchItem> &batch,
                             double dropout, GradSet *grads);

// Training biasing list for one utterance in one epoch: reference rare words
// each dropped with probability drop_rate, plus sampled distractors.
BiasingList TrainingList(const TrainConfig &config, const RareWordList &rare,
                         const TrainUtterance &utt, int epoch);

class TrainingDiverged : public Error {
 public:
  TrainingDiverged(int epoch, int64_t step)
      : Error("loss is not finite at epoch " + std::to_string(epoch) +
              " step " + std::to_string(step)),
        epoch_(epoch),
        step_(step) {}
  int epoch() const { return epoch_; }
  int64_t step() const { return step_; }

 private:
  int epoch_;
  int64_t step_;
};

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;  // per utterance
  double mean_grad_norm = 0.0;
};

using EpochCallback = std::function<void(const EpochStats &)>;

// Trains in place. Variants without biasing components ignore the lists.
// Deterministic given config.seed.
std::vector<EpochStats> Train(ToyModel &model, const TrainConfig &config,
                              const std::vector<TrainUtterance> &corpus,
                              const RareWordList &rare,
                              const EpochCallback &on_epoch = nullptr);

}  // namespace tcpgen

#endif  // TCPGEN_TRAINING_H_
