// tcpgen/include/tcpgen/common.h

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

#ifndef TCPGEN_COMMON_H_
#define TCPGEN_COMMON_H_

#include <stdexcept>
#include <string>

namespace tcpgen {

// Base class of every error raised by this library. The CLI prints what() on a
// single line, so messages must not contain newlines.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or configuration value.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A word that greedy longest-match segmentation cannot cover.
class UnsegmentableWord : public Error {
 public:
  explicit UnsegmentableWord(const std::string &word)
      : Error("unsegmentable word: " + word), word_(word) {}
  const std::string &word() const { return word_; }

 private:
  std::string word_;
};

// Caller broke a documented precondition (shape mismatch, invalid id, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace tcpgen

#define TCPGEN_STR_(x) #x
#define TCPGEN_STR(x) TCPGEN_STR_(x)

// Precondition check that survives NDEBUG builds.
#define TCPGEN_CHECK(cond)                                              \
  do {                                                                  \
    if (!(cond))                                                        \
      throw ::tcpgen::ContractViolation(                                \
          std::string(__FILE__ ":" TCPGEN_STR(__LINE__) ": check failed: ") + \
          #cond);                                                       \
  } while (0)

#endif  // TCPGEN_COMMON_H_
