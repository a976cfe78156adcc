// tcpgen/include/tcpgen/experiment.h

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

#ifndef TCPGEN_EXPERIMENT_H_
#define TCPGEN_EXPERIMENT_H_

#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "tcpgen/biasing_lists.h"
#include "tcpgen/config.h"
#include "tcpgen/corpus.h"
#include "tcpgen/decoding.h"
#include "tcpgen/scoring.h"
#include "tcpgen/toy_models.h"
#include "tcpgen/training.h"

namespace tcpgen {

// Failure inside one pipeline stage; the message starts with the stage name.
class StageError : public Error {
 public:
  StageError(const std::string &stage, const std::string &what)
      : Error("stage " + stage + ": " + what), stage_(stage) {}
  const std::string &stage() const { return stage_; }

 private:
  std::string stage_;
};

// Utterance id -> biasing list.
using ListMap = std::map<std::string, BiasingList>;

SubwordVocab LoadVocab(const ExperimentConfig &cfg);

// Lexicon words with at most cfg.rare_threshold training occurrences that the
// vocabulary can segment.
RareWordList ExperimentRareList(const ExperimentConfig &cfg,
                                const SyntheticCorpus &corpus);

ListMap BuildTestLists(const ExperimentConfig &cfg, const SyntheticCorpus &corpus,
                       const RareWordList &rare, ListLevel level);
// One "<utt_id>.<level>.txt" file per utterance.
void WriteLists(const ListMap &lists, ListLevel level, const std::string &dir);
ListMap ReadLists(const std::string &dir, ListLevel level,
                  const std::vector<std::string> &utt_ids);

std::vector<TrainUtterance> TrainingSet(const SyntheticCorpus &corpus);

// Fresh model with seeded initial weights.
std::unique_ptr<ToyModel> NewModel(const ExperimentConfig &cfg, const System &system,
                                   const SubwordVocab &vocab);
std::vector<EpochStats> TrainSystem(const ExperimentConfig &cfg,
                                    const System &system,
                                    const SyntheticCorpus &corpus,
                                    const RareWordList &rare, ToyModel *model,
                                    const EpochCallback &on_epoch = nullptr);

// Writes the checkpoint and "<path>.config" (the config with this system
// only).
void SaveModel(ToyModel &model, const ExperimentConfig &cfg, const std::string &path);
std::unique_ptr<ToyModel> LoadModel(const std::string &path, const SubwordVocab &vocab,
                                    ExperimentConfig *cfg = nullptr);

std::unique_ptr<LanguageModel> TrainBigram(const SyntheticCorpus &corpus);

// `lists` null decodes without biasing.
std::vector<NbestList> DecodeTestSet(const ExperimentConfig &cfg,
                                     const ToyModel &model,
                                     const std::vector<CorpusUtterance> &utts,
                                     const ListMap *lists,
                                     const LanguageModel *lm);

// Rank-1 words per utterance from an n-best file.
std::map<std::string, std::vector<std::string>> ReadNbestTop(const std::string &text);

ScoreReport ScoreTestSet(const std::string &system, ListLevel level,
                         const std::vector<CorpusUtterance> &utts,
                         const std::map<std::string, std::vector<std::string>> &hyps,
                         const ListMap &lists);

struct ExperimentResult {
  std::string run_dir;
  std::vector<ScoreReport> reports;
  std::string table;
};

// Builds lists, trains every configured system, decodes the test set with each
// list level, scores, and writes everything under out_root/<config hash>.
// An existing run directory is an error unless `force` is set.
ExperimentResult RunExperiment(const ExperimentConfig &cfg,
                               const std::string &data_dir,
                               const std::string &out_root, bool force,
                               std::ostream *log = nullptr);

}  // namespace tcpgen

#endif  // TCPGEN_EXPERIMENT_H_
