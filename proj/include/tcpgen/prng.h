// tcpgen/include/tcpgen/prng.h

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

#ifndef TCPGEN_PRNG_H_
#define TCPGEN_PRNG_H_

#include <cstdint>
#include <string_view>
#include <vector>

namespace tcpgen {

// splitmix64 stream. All randomness in the project goes through this class so
// that runs are bit-reproducible from a single 64-bit seed.
class Prng {
 public:
  explicit Prng(uint64_t seed = 0) : state_(seed) {}

  uint64_t NextU64();
  // Uniform in [0, 1) from the top 53 bits.
  double Uniform();
  // Standard normal; one Box-Muller draw (cosine branch) per two uniforms.
  double Gaussian();
  // Uniform integer in [0, n). n must be positive.
  uint64_t Below(uint64_t n);

  uint64_t state() const { return state_; }

 private:
  uint64_t state_;
};

// The splitmix64 output function applied to an arbitrary 64-bit value.
uint64_t SplitMix64Mix(uint64_t z);

// Seed derivation: folds each byte of `key` into `master` with one splitmix64
// step per byte. Used for per-utterance generators.
uint64_t DeriveSeed(uint64_t master, std::string_view key);

// Fisher-Yates shuffle driven by `rng`.
template <typename T>
void Shuffle(std::vector<T> *v, Prng *rng) {
  for (size_t i = v->size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng->Below(i));
    std::swap((*v)[i - 1], (*v)[j]);
  }
}

}  // namespace tcpgen

#endif  // TCPGEN_PRNG_H_
