// tcpgen/src/corpus.cc

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

#include "tcpgen/corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "tcpgen/checkpoint.h"
#include "tcpgen/prng.h"

namespace tcpgen {

namespace fs = std::filesystem;

namespace {

constexpr int kMaxWordRetries = 1000;

std::string ReadFile(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void WriteFile(const std::string &path, const std::string &text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!f) throw Error("write failed: " + path);
}

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, '\t')) out.push_back(field);
  return out;
}

std::string Id(const std::string &prefix, int n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*d", width, n);
  return prefix + buf;
}

// Random word: internal units followed by one word-final unit.
std::string RandomWord(const SubwordVocab &vocab, const std::vector<int> &internal,
                       const std::vector<int> &final_units, int n_units, Prng *rng) {
  std::string w;
  for (int i = 0; i + 1 < n_units; ++i) w += vocab.Unit(internal[rng->Below(internal.size())]);
  std::string last = vocab.Unit(final_units[rng->Below(final_units.size())]);
  last.pop_back();  // word-end marker
  return ToUpper(w + last);
}

class ZipfSampler {
 public:
  ZipfSampler(int n, double s) : cdf_(n) {
    double total = 0.0;
    for (int r = 0; r < n; ++r) {
      total += std::pow(static_cast<double>(r + 1), -s);
      cdf_[r] = total;
    }
    for (double &c : cdf_) c /= total;
  }
  int Sample(Prng *rng) const {
    double u = rng->Uniform();
    int r = static_cast<int>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    return std::min(r, static_cast<int>(cdf_.size()) - 1);
  }

 private:
  std::vector<double> cdf_;
};

std::vector<std::string> CommonSentence(const std::vector<std::string> &common,
                                        const ZipfSampler &zipf,
                                        const CorpusConfig &cfg, Prng *rng) {
  int len = cfg.min_sentence_len +
            static_cast<int>(rng->Below(cfg.max_sentence_len - cfg.min_sentence_len + 1));
  std::vector<std::string> s(len);
  for (auto &w : s) w = common[zipf.Sample(rng)];
  return s;
}

// Lays out utterances into chapters and books and writes the book text:
// each utterance line is followed by a share of unread lines.
void BuildBooks(const std::string &split, std::vector<CorpusUtterance> *utts,
                const std::vector<std::string> &common,
                const std::vector<std::string> &rare, const ZipfSampler &zipf,
                const CorpusConfig &cfg, Prng *rng, std::vector<Book> *books) {
  const int n = static_cast<int>(utts->size());
  const int per_book = cfg.chapter_size * cfg.chapters_per_book;
  for (int start = 0; start < n; start += per_book) {
    Book book;
    book.id = Id(split + "_bk", static_cast<int>(books->size()), 3);
    for (int cs = start; cs < std::min(n, start + per_book); cs += cfg.chapter_size) {
      int ce = std::min(n, cs + cfg.chapter_size);
      ChapterSpan span;
      span.chapter_id = Id(split + "_ch", cs / cfg.chapter_size, 3);
      span.start_line = static_cast<int>(book.lines.size());
      int count = ce - cs;
      for (int i = cs; i < ce; ++i) {
        book.lines.push_back(JoinWords((*utts)[i].words));
        int extra = cfg.extra_lines_per_chapter / count +
                    (i - cs < cfg.extra_lines_per_chapter % count ? 1 : 0);
        for (int e = 0; e < extra; ++e) {
          auto line = CommonSentence(common, zipf, cfg, rng);
          if (!rare.empty() && rng->Uniform() < 0.1)
            line[rng->Below(line.size())] = rare[rng->Below(rare.size())];
          book.lines.push_back(JoinWords(line));
        }
      }
      span.end_line = static_cast<int>(book.lines.size());
      for (int i = cs; i < ce; ++i) {
        auto &u = (*utts)[i];
        u.book_id = book.id;
        u.chapter_id = span.chapter_id;
        u.start_line = span.start_line;
        u.end_line = span.end_line;
      }
      book.chapters.push_back(span);
    }
    books->push_back(std::move(book));
  }
}

std::string FormatIndex(const std::vector<CorpusUtterance> &utts) {
  std::string out;
  for (const auto &u : utts) {
    out += u.id + "\t" + u.book_id + "\t" + u.chapter_id + "\t" +
           std::to_string(u.start_line) + "\t" + std::to_string(u.end_line) + "\n";
  }
  return out;
}

Checkpoint FeatureArchive(const std::vector<CorpusUtterance> &utts) {
  Checkpoint c;
  for (const auto &u : utts) c.tensors.push_back(FromMatrix(u.id, u.features));
  return c;
}

std::vector<CorpusUtterance> ReadSplit(const std::string &dir, const std::string &split) {
  auto transcripts = ParseTranscripts(ReadFile(dir + "/" + split + ".txt"));
  Checkpoint feats = LoadCheckpoint(dir + "/" + split + ".feats");
  std::vector<CorpusUtterance> utts;
  std::istringstream idx(ReadFile(dir + "/" + split + ".index"));
  std::string line;
  int lineno = 0;
  while (std::getline(idx, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = SplitTabs(line);
    if (f.size() != 5)
      throw FormatError(split + ".index line " + std::to_string(lineno) + ": expected 5 fields");
    CorpusUtterance u;
    u.id = f[0];
    u.book_id = f[1];
    u.chapter_id = f[2];
    u.start_line = std::stoi(f[3]);
    u.end_line = std::stoi(f[4]);
    auto it = transcripts.find(u.id);
    if (it == transcripts.end()) throw FormatError("no transcript for " + u.id);
    u.words = it->second;
    const Tensor *t = feats.Find(u.id);
    if (t == nullptr) throw FormatError("no features for " + u.id);
    u.features = ToMatrix(*t);
    utts.push_back(std::move(u));
  }
  return utts;
}

std::vector<Book> ReadBooks(const std::string &dir,
                            const std::vector<CorpusUtterance> &utts) {
  std::vector<Book> books;
  for (const auto &u : utts) {
    if (books.empty() || books.back().id != u.book_id) {
      Book b;
      b.id = u.book_id;
      std::istringstream in(ReadFile(dir + "/books/" + u.book_id + ".txt"));
      std::string line;
      while (std::getline(in, line)) b.lines.push_back(line);
      books.push_back(std::move(b));
    }
    Book &b = books.back();
    if (b.chapters.empty() || b.chapters.back().chapter_id != u.chapter_id)
      b.chapters.push_back({u.chapter_id, u.start_line, u.end_line});
  }
  return books;
}

}  // namespace

SubwordVocab DefaultVocab() {
  const std::string consonants = "BDGKLMNPST";
  const std::string vowels = "AEIO";
  std::vector<std::string> units;
  for (char c : consonants)
    for (char v : vowels) units.push_back(std::string{c, v});
  const size_t n = units.size();
  for (size_t i = 0; i < n; ++i) units.push_back(units[i] + "_");
  return SubwordVocab(units);
}

const Book &SyntheticCorpus::FindBook(const std::string &id) const {
  for (const auto *books : {&test_books, &train_books})
    for (const Book &b : *books)
      if (b.id == id) return b;
  throw FormatError("unknown book " + id);
}

std::vector<std::vector<std::string>> SyntheticCorpus::TrainTranscripts() const {
  std::vector<std::vector<std::string>> out;
  for (const auto &u : train) out.push_back(u.words);
  return out;
}

WordCounts SyntheticCorpus::TrainCounts() const {
  WordCounts counts = CountWords(TrainTranscripts());
  for (const auto &w : common) counts.emplace(w, 0);
  for (const auto &w : rare) counts.emplace(w, 0);
  return counts;
}

Matrix SubwordPrototypes(const SubwordVocab &vocab, const CorpusConfig &cfg,
                         int feat_dim, uint64_t seed) {
  Prng rng(DeriveSeed(seed, "prototypes"));
  Matrix p(vocab.NumLexical(), feat_dim);
  FillGaussian(&p, cfg.prototype_scale, &rng);
  return p;
}

Matrix SynthesizeFeatures(const TokenSeq &tokens, const Matrix &prototypes,
                          const CorpusConfig &cfg, uint64_t seed,
                          const std::string &utt_id) {
  Prng rng(DeriveSeed(seed, "features/" + utt_id));
  std::vector<int> frames;
  for (int tok : tokens) {
    TCPGEN_CHECK(tok >= 0 && tok < prototypes.rows());
    int n = cfg.min_frames +
            static_cast<int>(rng.Below(cfg.max_frames - cfg.min_frames + 1));
    for (int i = 0; i < n; ++i) frames.push_back(tok);
  }
  Matrix x(static_cast<int>(frames.size()), prototypes.cols());
  for (int t = 0; t < x.rows(); ++t) {
    for (int d = 0; d < x.cols(); ++d) {
      double noise = cfg.noise_sigma > 0.0 ? cfg.noise_sigma * rng.Gaussian() : 0.0;
      x(t, d) = prototypes(frames[t], d) + noise;
    }
  }
  return x;
}

SyntheticCorpus GenerateCorpus(const SubwordVocab &vocab, const CorpusConfig &cfg,
                               int feat_dim, uint64_t seed) {
  cfg.Validate();
  SyntheticCorpus corpus;
  corpus.vocab = vocab;
  std::vector<int> internal, final_units;
  for (int id = 0; id < vocab.NumLexical(); ++id)
    (vocab.IsWordFinal(id) ? final_units : internal).push_back(id);
  if (final_units.empty() || (cfg.max_word_units > 1 && internal.empty()))
    throw FormatError("vocabulary cannot form words");

  // Lexicon. Rare words are drawn from the longer end of the length range.
  Prng lex_rng(DeriveSeed(seed, "lexicon"));
  std::set<std::string> used;
  auto draw = [&](int min_units, int max_units) {
    for (int attempt = 0; attempt < kMaxWordRetries; ++attempt) {
      int n = min_units + static_cast<int>(lex_rng.Below(max_units - min_units + 1));
      std::string w = RandomWord(vocab, internal, final_units, n, &lex_rng);
      if (used.count(w)) continue;
      try {
        TokenizeWord(vocab, w);
      } catch (const UnsegmentableWord &) {
        continue;
      }
      used.insert(w);
      return w;
    }
    throw FormatError("could not generate a new segmentable word");
  };
  const int num_common = cfg.num_words - cfg.num_rare;
  for (int i = 0; i < num_common; ++i)
    corpus.common.push_back(draw(cfg.min_word_units, cfg.max_word_units));
  const int rare_min = std::min(cfg.max_word_units, std::max(cfg.min_word_units, 2));
  for (int i = 0; i < cfg.num_rare; ++i)
    corpus.rare.push_back(draw(rare_min, cfg.max_word_units));

  // Transcripts.
  ZipfSampler zipf(num_common, cfg.zipf_exponent);
  Prng text_rng(DeriveSeed(seed, "transcripts"));
  auto make_split = [&](const std::string &split, int n) {
    std::vector<CorpusUtterance> utts(n);
    for (int i = 0; i < n; ++i) {
      utts[i].id = Id(split + "_", i, 5);
      utts[i].words = CommonSentence(corpus.common, zipf, cfg, &text_rng);
    }
    return utts;
  };
  corpus.train = make_split("train", cfg.num_train);
  corpus.test = make_split("test", cfg.num_test);

  // Rare words: at most rare_max_train training utterances each, never two in
  // one utterance; one rare word in a test_rare_rate share of test utterances.
  Prng inject_rng(DeriveSeed(seed, "inject"));
  std::vector<int> slots(cfg.num_train);
  for (int i = 0; i < cfg.num_train; ++i) slots[i] = i;
  Shuffle(&slots, &inject_rng);
  size_t next_slot = 0;
  for (const auto &w : corpus.rare) {
    int c = static_cast<int>(inject_rng.Below(cfg.rare_max_train + 1));
    for (int k = 0; k < c && next_slot < slots.size(); ++k) {
      auto &words = corpus.train[slots[next_slot++]].words;
      words[inject_rng.Below(words.size())] = w;
    }
  }
  if (!corpus.rare.empty()) {
    for (auto &u : corpus.test) {
      if (inject_rng.Uniform() < cfg.test_rare_rate)
        u.words[inject_rng.Below(u.words.size())] =
            corpus.rare[inject_rng.Below(corpus.rare.size())];
    }
  }

  // Book text.
  Prng book_rng(DeriveSeed(seed, "books"));
  BuildBooks("train", &corpus.train, corpus.common, corpus.rare, zipf, cfg,
             &book_rng, &corpus.train_books);
  BuildBooks("test", &corpus.test, corpus.common, corpus.rare, zipf, cfg,
             &book_rng, &corpus.test_books);

  // Features.
  Matrix protos = SubwordPrototypes(vocab, cfg, feat_dim, seed);
  for (auto *split : {&corpus.train, &corpus.test}) {
    for (auto &u : *split) {
      u.features = SynthesizeFeatures(TokenizeSentence(vocab, JoinWords(u.words)),
                                      protos, cfg, seed, u.id);
    }
  }
  return corpus;
}

std::string FormatTranscripts(const std::vector<CorpusUtterance> &utts) {
  std::string out;
  for (const auto &u : utts) out += u.id + "\t" + JoinWords(u.words) + "\n";
  return out;
}

std::map<std::string, std::vector<std::string>> ParseTranscripts(
    const std::string &text) {
  std::map<std::string, std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw FormatError("transcript line " + std::to_string(lineno) + ": expected utt_id<TAB>text");
    std::string id = line.substr(0, tab);
    if (!out.emplace(id, SplitWords(line.substr(tab + 1))).second)
      throw FormatError("transcript line " + std::to_string(lineno) + ": duplicate id " + id);
  }
  return out;
}

void WriteCorpus(const SyntheticCorpus &corpus, const std::string &dir) {
  fs::create_directories(dir + "/books");
  WriteFile(dir + "/vocab.txt", corpus.vocab.ToText());
  std::string lex;
  for (const auto &w : corpus.common) lex += w + "\tcommon\n";
  for (const auto &w : corpus.rare) lex += w + "\trare\n";
  WriteFile(dir + "/lexicon.txt", lex);
  WriteFile(dir + "/train.txt", FormatTranscripts(corpus.train));
  WriteFile(dir + "/test.txt", FormatTranscripts(corpus.test));
  WriteFile(dir + "/train.index", FormatIndex(corpus.train));
  WriteFile(dir + "/test.index", FormatIndex(corpus.test));
  SaveCheckpoint(FeatureArchive(corpus.train), dir + "/train.feats");
  SaveCheckpoint(FeatureArchive(corpus.test), dir + "/test.feats");
  for (const auto *books : {&corpus.train_books, &corpus.test_books}) {
    for (const Book &b : *books) {
      std::string text;
      for (const auto &l : b.lines) text += l + "\n";
      WriteFile(dir + "/books/" + b.id + ".txt", text);
    }
  }
}

SyntheticCorpus ReadCorpus(const std::string &dir) {
  SyntheticCorpus corpus;
  corpus.vocab = SubwordVocab::FromFile(dir + "/vocab.txt");
  std::istringstream lex(ReadFile(dir + "/lexicon.txt"));
  std::string line;
  while (std::getline(lex, line)) {
    if (line.empty()) continue;
    auto f = SplitTabs(line);
    if (f.size() != 2 || (f[1] != "common" && f[1] != "rare"))
      throw FormatError("lexicon.txt: bad line '" + line + "'");
    (f[1] == "rare" ? corpus.rare : corpus.common).push_back(f[0]);
  }
  corpus.train = ReadSplit(dir, "train");
  corpus.test = ReadSplit(dir, "test");
  corpus.train_books = ReadBooks(dir, corpus.train);
  corpus.test_books = ReadBooks(dir, corpus.test);
  return corpus;
}

}  // namespace tcpgen
