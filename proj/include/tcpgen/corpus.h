// tcpgen/include/tcpgen/corpus.h

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

#ifndef TCPGEN_CORPUS_H_
#define TCPGEN_CORPUS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tcpgen/biasing_lists.h"
#include "tcpgen/config.h"
#include "tcpgen/lexicon.h"
#include "tcpgen/matrix.h"

namespace tcpgen {

// 10 consonants x 4 vowels, each syllable in word-internal and word-final
// form (80 units).
SubwordVocab DefaultVocab();

struct CorpusUtterance {
  std::string id;
  std::string book_id;
  std::string chapter_id;
  int start_line = 0;  // chapter span in the book text
  int end_line = 0;
  std::vector<std::string> words;
  Matrix features;
};

struct SyntheticCorpus {
  SubwordVocab vocab;
  std::vector<std::string> common;  // in Zipf rank order
  std::vector<std::string> rare;
  std::vector<CorpusUtterance> train;
  std::vector<CorpusUtterance> test;
  std::vector<Book> train_books;
  std::vector<Book> test_books;

  const Book &FindBook(const std::string &id) const;
  std::vector<std::vector<std::string>> TrainTranscripts() const;
  // Zero for lexicon words absent from the training transcripts.
  WordCounts TrainCounts() const;
};

// One prototype row per lexical unit, N(0, prototype_scale^2) entries.
Matrix SubwordPrototypes(const SubwordVocab &vocab, const CorpusConfig &cfg,
                         int feat_dim, uint64_t seed);

// Each unit's prototype repeated for a random 2-4 (configurable) frames plus
// Gaussian noise. Depends only on (tokens, utt_id, seed).
Matrix SynthesizeFeatures(const TokenSeq &tokens, const Matrix &prototypes,
                          const CorpusConfig &cfg, uint64_t seed,
                          const std::string &utt_id);

SyntheticCorpus GenerateCorpus(const SubwordVocab &vocab, const CorpusConfig &cfg,
                               int feat_dim, uint64_t seed);

// Directory layout:
//   vocab.txt  lexicon.txt  {train,test}.txt  {train,test}.index
//   {train,test}.feats  books/<book_id>.txt
void WriteCorpus(const SyntheticCorpus &corpus, const std::string &dir);
SyntheticCorpus ReadCorpus(const std::string &dir);

// "utt_id<TAB>TEXT" lines.
std::string FormatTranscripts(const std::vector<CorpusUtterance> &utts);
std::map<std::string, std::vector<std::string>> ParseTranscripts(
    const std::string &text);

}  // namespace tcpgen

#endif  // TCPGEN_CORPUS_H_
