// tcpgen/include/tcpgen/lexicon.h

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

#ifndef TCPGEN_LEXICON_H_
#define TCPGEN_LEXICON_H_

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tcpgen {

using TokenSeq = std::vector<int>;

// Closed subword inventory. Lexical units occupy ids [0, NumLexical()); the
// special symbols follow in the fixed order OOL, SOS, EOS, BLANK. A unit whose
// string ends in the word-end marker closes a word.
class SubwordVocab {
 public:
  SubwordVocab() = default;
  // Throws FormatError on duplicates (with 1-based line number) or when the
  // list is empty.
  explicit SubwordVocab(std::vector<std::string> units, char word_end = '_');

  // One unit per line, LF endings; a trailing CR is stripped.
  static SubwordVocab FromText(std::string_view text, char word_end = '_');
  static SubwordVocab FromFile(const std::string &path, char word_end = '_');
  std::string ToText() const;

  int NumLexical() const { return static_cast<int>(units_.size()); }
  // Lexical units plus the four specials.
  int Size() const { return NumLexical() + 4; }
  int Ool() const { return NumLexical(); }
  int Sos() const { return NumLexical() + 1; }
  int Eos() const { return NumLexical() + 2; }
  int Blank() const { return NumLexical() + 3; }

  bool IsLexical(int id) const { return id >= 0 && id < NumLexical(); }
  bool IsWordFinal(int id) const {
    return IsLexical(id) && word_final_[id];
  }
  char word_end() const { return word_end_; }
  // Lexical unit string, or "<ool>", "<s>", "</s>", "<blank>".
  const std::string &Unit(int id) const;
  std::optional<int> Find(std::string_view unit) const;
  size_t MaxUnitLength() const { return max_len_; }

 private:
  std::vector<std::string> units_;
  std::vector<bool> word_final_;
  std::unordered_map<std::string, int> index_;
  char word_end_ = '_';
  size_t max_len_ = 0;
};

// Appends the word-end marker and segments greedily, always taking the longest
// unit that matches at the current position. Throws UnsegmentableWord when no
// unit matches somewhere.
TokenSeq TokenizeWord(const SubwordVocab &vocab, std::string_view word);

// Tokenizes a whitespace-separated sentence word by word.
TokenSeq TokenizeSentence(const SubwordVocab &vocab, std::string_view text);

struct Detokenized {
  std::vector<std::string> words;
  // Set when the sequence stops in the middle of a word.
  std::optional<std::string> partial;
};

// Splits at word-final units and strips the marker. Non-lexical ids are a
// contract violation.
Detokenized Detokenize(const SubwordVocab &vocab, const TokenSeq &seq);

// Uppercases ASCII letters and splits on whitespace.
std::vector<std::string> SplitWords(std::string_view text);
std::string ToUpper(std::string_view s);
std::string JoinWords(const std::vector<std::string> &words);

}  // namespace tcpgen

#endif  // TCPGEN_LEXICON_H_
