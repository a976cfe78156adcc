// tcpgen/include/tcpgen/config.h

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

#ifndef TCPGEN_CONFIG_H_
#define TCPGEN_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "tcpgen/biasing_lists.h"
#include "tcpgen/decoding.h"
#include "tcpgen/toy_models.h"
#include "tcpgen/training.h"

namespace tcpgen {

struct CorpusConfig {
  int num_words = 150;
  int num_rare = 30;
  int num_train = 2000;
  int num_test = 200;
  double zipf_exponent = 1.2;
  int min_sentence_len = 3;
  int max_sentence_len = 8;
  int min_word_units = 1;
  int max_word_units = 3;
  // Each rare word appears in at most this many training utterances.
  int rare_max_train = 2;
  // Fraction of test utterances that receive one rare word.
  double test_rare_rate = 0.5;
  int chapter_size = 50;
  int chapters_per_book = 4;
  // Unread text lines added to every chapter of the book text.
  int extra_lines_per_chapter = 100;
  int min_frames = 2;
  int max_frames = 4;
  double noise_sigma = 0.1;
  double prototype_scale = 1.0;

  void Validate() const;
};

struct System {
  ModelFamily family = ModelFamily::kAed;
  Variant variant = Variant::kBaseline;

  // "aed:tcpgen"
  std::string Name() const;
  static System Parse(const std::string &s);
  bool operator==(const System &) const = default;
};

struct ExperimentConfig {
  uint64_t seed = 17;
  std::vector<System> systems = {{ModelFamily::kAed, Variant::kBaseline},
                                 {ModelFamily::kAed, Variant::kTcpgen},
                                 {ModelFamily::kRnnt, Variant::kBaseline},
                                 {ModelFamily::kRnnt, Variant::kTcpgenDb}};
  ModelDims dims;
  TrainConfig train;
  DecodeConfig decode;
  CorpusConfig corpus;
  std::vector<ListLevel> levels = {ListLevel::kUtterance, ListLevel::kChapter,
                                   ListLevel::kBook};
  // Words with at most this many training occurrences form the rare list.
  int64_t rare_threshold = 20;
  // Training epochs per model family; the transducer converges far sooner.
  int aed_epochs = 100;
  int rnnt_epochs = 15;
  int test_distractors = 50;
  int chapter_list_cap = 1000;
  int chapter_window = 1000;
  int book_list_cap = 1000;
  int book_window = 10000;
  // Empty means the built-in syllable inventory.
  std::string vocab_file;

  // Flat "key = value" lines, '#' starts a comment. Unknown keys, duplicate
  // keys and malformed values throw FormatError with the line number.
  static ExperimentConfig Parse(const std::string &text);
  static ExperimentConfig FromFile(const std::string &path);
  // Every key with its current value, one per line, preceded by a comment.
  std::string ToText() const;
  // Hex digest of ToText(); names run directories.
  std::string Hash() const;

  void Validate() const;
};

}  // namespace tcpgen

#endif  // TCPGEN_CONFIG_H_
