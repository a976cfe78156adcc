// tcpgen/src/config.cc

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

#include "tcpgen/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "tcpgen/lexicon.h"

namespace tcpgen {

namespace {

std::string Trim(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitList(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // Prefer the shortest form that reads back exactly.
  for (int prec = 1; prec <= 17; ++prec) {
    char shorter[32];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    if (std::stod(shorter) == v) return shorter;
  }
  return buf;
}

template <typename T>
T ParseInt(const std::string &s) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw FormatError("expected an integer, got '" + s + "'");
  return v;
}

double ParseDouble(const std::string &s) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw FormatError("expected a number, got '" + s + "'");
  return v;
}

bool ParseBool(const std::string &s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw FormatError("expected true or false, got '" + s + "'");
}

struct Field {
  const char *key;
  const char *doc;
  std::function<std::string(const ExperimentConfig &)> get;
  std::function<void(ExperimentConfig &, const std::string &)> set;
};

#define INT_FIELD(key, member, doc)                                          \
  Field {                                                                    \
    key, doc, [](const ExperimentConfig &c) { return std::to_string(c.member); }, \
        [](ExperimentConfig &c, const std::string &v) {                      \
          c.member = ParseInt<decltype(c.member)>(v);                        \
        }                                                                    \
  }
#define REAL_FIELD(key, member, doc)                                         \
  Field {                                                                    \
    key, doc, [](const ExperimentConfig &c) { return FormatDouble(c.member); }, \
        [](ExperimentConfig &c, const std::string &v) { c.member = ParseDouble(v); } \
  }

const std::vector<Field> &Fields() {
  static const std::vector<Field> fields = {
      INT_FIELD("seed", seed, "master seed for every random stream"),
      Field{"systems", "comma-separated family:variant pairs",
            [](const ExperimentConfig &c) {
              std::string s;
              for (size_t i = 0; i < c.systems.size(); ++i)
                s += (i ? ", " : "") + c.systems[i].Name();
              return s;
            },
            [](ExperimentConfig &c, const std::string &v) {
              c.systems.clear();
              for (const auto &item : SplitList(v)) c.systems.push_back(System::Parse(item));
            }},
      Field{"levels", "list levels to evaluate: utterance, chapter, book",
            [](const ExperimentConfig &c) {
              std::string s;
              for (size_t i = 0; i < c.levels.size(); ++i)
                s += (i ? ", " : "") + ToString(c.levels[i]);
              return s;
            },
            [](ExperimentConfig &c, const std::string &v) {
              c.levels.clear();
              for (const auto &item : SplitList(v)) c.levels.push_back(ParseListLevel(item));
            }},
      Field{"vocab_file", "subword inventory, one unit per line (empty: built-in)",
            [](const ExperimentConfig &c) { return c.vocab_file; },
            [](ExperimentConfig &c, const std::string &v) { c.vocab_file = v; }},
      INT_FIELD("feat_dim", dims.feat, "feature dimension"),
      INT_FIELD("hidden_dim", dims.hidden, "encoder/decoder/predictor width"),
      INT_FIELD("emb_dim", dims.emb, "subword embedding width"),
      INT_FIELD("att_dim", dims.att, "pointer attention width"),
      INT_FIELD("value_dim", dims.value, "pointer value width"),
      REAL_FIELD("learning_rate", train.learning_rate, "Adam step size"),
      REAL_FIELD("beta1", train.beta1, "Adam first-moment decay"),
      REAL_FIELD("beta2", train.beta2, "Adam second-moment decay"),
      REAL_FIELD("epsilon", train.epsilon, "Adam denominator offset"),
      REAL_FIELD("clip_norm", train.clip_norm, "global gradient-norm clip"),
      INT_FIELD("aed_epochs", aed_epochs, "training epochs for attention encoder-decoder systems"),
      INT_FIELD("rnnt_epochs", rnnt_epochs, "training epochs for transducer systems"),
      INT_FIELD("batch_size", train.batch_size, "utterances per update"),
      REAL_FIELD("drop_rate", train.drop_rate,
                 "probability of dropping each reference word from a training list"),
      INT_FIELD("train_distractors", train.distractor_count,
                "distractors per training list"),
      REAL_FIELD("dropout", train.dropout,
                 "dropout on encoder states and previous-token embeddings"),
      Field{"parallel", "evaluate utterances of a batch or test set in parallel",
            [](const ExperimentConfig &c) { return std::string(c.train.parallel ? "true" : "false"); },
            [](ExperimentConfig &c, const std::string &v) { c.train.parallel = ParseBool(v); }},
      INT_FIELD("beam", decode.beam, "beam width"),
      REAL_FIELD("lm_weight", decode.lm_weight,
                 "shallow-fusion weight of the bigram LM (0 disables)"),
      INT_FIELD("max_symbols_per_frame", decode.max_symbols_per_frame,
                "transducer label expansions per frame"),
      INT_FIELD("max_output_len", decode.max_output_len, "AED output length limit"),
      INT_FIELD("rare_threshold", rare_threshold,
                "words with at most this many training occurrences are rare"),
      INT_FIELD("test_distractors", test_distractors,
                "distractors per utterance-level test list"),
      INT_FIELD("chapter_list_cap", chapter_list_cap, "chapter-level list size"),
      INT_FIELD("chapter_window", chapter_window, "chapter-level text window (lines)"),
      INT_FIELD("book_list_cap", book_list_cap, "book-level list size"),
      INT_FIELD("book_window", book_window, "book-level text window (lines)"),
      INT_FIELD("num_words", corpus.num_words, "lexicon size"),
      INT_FIELD("num_rare", corpus.num_rare, "designated rare words in the lexicon"),
      INT_FIELD("num_train", corpus.num_train, "training utterances"),
      INT_FIELD("num_test", corpus.num_test, "test utterances"),
      REAL_FIELD("zipf_exponent", corpus.zipf_exponent, "Zipf exponent over common words"),
      INT_FIELD("min_sentence_len", corpus.min_sentence_len, "words per sentence, minimum"),
      INT_FIELD("max_sentence_len", corpus.max_sentence_len, "words per sentence, maximum"),
      INT_FIELD("min_word_units", corpus.min_word_units, "subwords per word, minimum"),
      INT_FIELD("max_word_units", corpus.max_word_units, "subwords per word, maximum"),
      INT_FIELD("rare_max_train", corpus.rare_max_train,
                "training utterances per rare word, maximum"),
      REAL_FIELD("test_rare_rate", corpus.test_rare_rate,
                 "fraction of test utterances carrying a rare word"),
      INT_FIELD("chapter_size", corpus.chapter_size, "utterances per chapter"),
      INT_FIELD("chapters_per_book", corpus.chapters_per_book, "chapters per book"),
      INT_FIELD("extra_lines_per_chapter", corpus.extra_lines_per_chapter,
                "unread book-text lines per chapter"),
      INT_FIELD("min_frames", corpus.min_frames, "frames per subword, minimum"),
      INT_FIELD("max_frames", corpus.max_frames, "frames per subword, maximum"),
      REAL_FIELD("noise_sigma", corpus.noise_sigma, "feature noise standard deviation"),
      REAL_FIELD("prototype_scale", corpus.prototype_scale,
                 "standard deviation of subword prototype vectors"),
  };
  return fields;
}

#undef INT_FIELD
#undef REAL_FIELD

}  // namespace

void CorpusConfig::Validate() const {
  if (num_rare < 0 || num_words <= num_rare)
    throw FormatError("num_words must exceed num_rare");
  if (num_train < 1 || num_test < 1) throw FormatError("empty corpus split");
  if (min_sentence_len < 1 || max_sentence_len < min_sentence_len)
    throw FormatError("bad sentence length range");
  if (min_word_units < 1 || max_word_units < min_word_units)
    throw FormatError("bad word length range");
  if (rare_max_train < 0) throw FormatError("rare_max_train must be >= 0");
  if (test_rare_rate < 0.0 || test_rare_rate > 1.0)
    throw FormatError("test_rare_rate must be in [0,1]");
  if (chapter_size < 1 || chapters_per_book < 1 || extra_lines_per_chapter < 0)
    throw FormatError("bad book layout");
  if (min_frames < 1 || max_frames < min_frames) throw FormatError("bad frame range");
  if (noise_sigma < 0.0 || prototype_scale <= 0.0) throw FormatError("bad feature scale");
  if (zipf_exponent <= 0.0) throw FormatError("zipf_exponent must be > 0");
}

std::string System::Name() const { return ToString(family) + ":" + ToString(variant); }

System System::Parse(const std::string &s) {
  size_t colon = s.find(':');
  if (colon == std::string::npos)
    throw FormatError("system '" + s + "' is not family:variant");
  return System{ParseFamily(Trim(s.substr(0, colon))),
                ParseVariant(Trim(s.substr(colon + 1)))};
}

ExperimentConfig ExperimentConfig::Parse(const std::string &text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    std::string where = "config line " + std::to_string(lineno) + ": ";
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw FormatError(where + "expected key = value");
    std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    const Field *field = nullptr;
    for (const Field &f : Fields())
      if (key == f.key) field = &f;
    if (field == nullptr) throw FormatError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw FormatError(where + "duplicate key '" + key + "'");
    try {
      field->set(cfg, value);
    } catch (const Error &e) {
      throw FormatError(where + key + ": " + e.what());
    }
  }
  cfg.Validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::FromFile(const std::string &path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open config " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return Parse(ss.str());
}

std::string ExperimentConfig::ToText() const {
  std::string out;
  for (const Field &f : Fields()) {
    out += std::string("# ") + f.doc + "\n";
    out += std::string(f.key) + " = " + f.get(*this) + "\n";
  }
  return out;
}

std::string ExperimentConfig::Hash() const {
  // FNV-1a over the canonical text.
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : ToText()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void ExperimentConfig::Validate() const {
  corpus.Validate();
  if (dims.feat < 1 || dims.hidden < 1 || dims.emb < 1 || dims.att < 1 || dims.value < 1)
    throw FormatError("dimensions must be positive");
  try {
    train.Validate();
  } catch (const ContractViolation &) {
    throw FormatError("invalid training settings");
  }
  if (decode.beam < 1 || decode.lm_weight < 0.0 || decode.max_symbols_per_frame < 0 ||
      decode.max_output_len < 1)
    throw FormatError("invalid decode settings");
  if (rare_threshold < 0 || test_distractors < 0) throw FormatError("invalid list settings");
  if (aed_epochs < 0 || rnnt_epochs < 0) throw FormatError("invalid epoch count");
  if (chapter_list_cap < 1 || chapter_window < 1 || book_list_cap < 1 || book_window < 1)
    throw FormatError("invalid window settings");
  if (systems.empty()) throw FormatError("no systems configured");
}

}  // namespace tcpgen
