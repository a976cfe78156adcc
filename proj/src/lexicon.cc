// tcpgen/src/lexicon.cc

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

#include "tcpgen/lexicon.h"

#include <fstream>
#include <sstream>

#include "tcpgen/common.h"

namespace tcpgen {

SubwordVocab::SubwordVocab(std::vector<std::string> units, char word_end)
    : units_(std::move(units)), word_end_(word_end) {
  if (units_.empty()) throw FormatError("vocab: empty unit list");
  for (size_t i = 0; i < units_.size(); ++i) {
    const std::string &u = units_[i];
    if (u.empty()) {
      throw FormatError("vocab: empty unit at line " + std::to_string(i + 1));
    }
    if (!index_.emplace(u, static_cast<int>(i)).second) {
      throw FormatError("vocab: duplicate unit '" + u + "' at line " +
                        std::to_string(i + 1));
    }
    word_final_.push_back(u.back() == word_end_);
    max_len_ = std::max(max_len_, u.size());
  }
}

SubwordVocab SubwordVocab::FromText(std::string_view text, char word_end) {
  std::vector<std::string> units;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    units.push_back(std::move(line));
    pos = nl + 1;
  }
  return SubwordVocab(std::move(units), word_end);
}

SubwordVocab SubwordVocab::FromFile(const std::string &path, char word_end) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open vocab file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return FromText(ss.str(), word_end);
}

std::string SubwordVocab::ToText() const {
  std::string out;
  for (const auto &u : units_) out += u + "\n";
  return out;
}

const std::string &SubwordVocab::Unit(int id) const {
  static const std::string kSpecial[4] = {"<ool>", "<s>", "</s>", "<blank>"};
  if (IsLexical(id)) return units_[id];
  TCPGEN_CHECK(id >= NumLexical() && id < Size());
  return kSpecial[id - NumLexical()];
}

std::optional<int> SubwordVocab::Find(std::string_view unit) const {
  auto it = index_.find(std::string(unit));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenSeq TokenizeWord(const SubwordVocab &vocab, std::string_view word) {
  TCPGEN_CHECK(!word.empty());
  std::string marked(word);
  marked.push_back(vocab.word_end());
  TokenSeq out;
  size_t pos = 0;
  while (pos < marked.size()) {
    size_t max_len = std::min(vocab.MaxUnitLength(), marked.size() - pos);
    bool found = false;
    for (size_t len = max_len; len > 0; --len) {
      if (auto id = vocab.Find(std::string_view(marked).substr(pos, len))) {
        out.push_back(*id);
        pos += len;
        found = true;
        break;
      }
    }
    if (!found) throw UnsegmentableWord(std::string(word));
  }
  return out;
}

TokenSeq TokenizeSentence(const SubwordVocab &vocab, std::string_view text) {
  TokenSeq out;
  for (const auto &w : SplitWords(text)) {
    TokenSeq t = TokenizeWord(vocab, w);
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

Detokenized Detokenize(const SubwordVocab &vocab, const TokenSeq &seq) {
  Detokenized out;
  std::string cur;
  for (int id : seq) {
    if (!vocab.IsLexical(id)) {
      throw ContractViolation("detokenize: non-lexical id " +
                              std::to_string(id));
    }
    const std::string &u = vocab.Unit(id);
    if (vocab.IsWordFinal(id)) {
      cur.append(u, 0, u.size() - 1);
      out.words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += u;
    }
  }
  if (!cur.empty()) out.partial = std::move(cur);
  return out;
}

std::string ToUpper(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!cur.empty()) out.push_back(ToUpper(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(ToUpper(cur));
  return out;
}

std::string JoinWords(const std::vector<std::string> &words) {
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

}  // namespace tcpgen
