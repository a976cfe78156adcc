// tcpgen/include/tcpgen/checkpoint.h

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

#ifndef TCPGEN_CHECKPOINT_H_
#define TCPGEN_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "tcpgen/autodiff.h"
#include "tcpgen/common.h"

namespace tcpgen {

// Binary layout (little-endian):
//   "TCPG" | version u32 | count u32 |
//   per tensor: name_len u16 | name | rank u8 | dims u32 x rank | f64 data
constexpr uint32_t kCheckpointVersion = 1;

struct Tensor {
  std::string name;
  std::vector<uint32_t> shape;
  std::vector<double> data;  // row-major

  size_t NumElements() const;
};

struct Checkpoint {
  std::vector<Tensor> tensors;

  const Tensor *Find(const std::string &name) const;
};

// Load failure. `tensor()` names the tensor being read, empty when the
// header itself is bad.
class CheckpointError : public FormatError {
 public:
  CheckpointError(const std::string &what, std::string tensor)
      : FormatError(what), tensor_(std::move(tensor)) {}
  const std::string &tensor() const { return tensor_; }

 private:
  std::string tensor_;
};

std::string EncodeCheckpoint(const Checkpoint &ckpt);
Checkpoint DecodeCheckpoint(const std::string &bytes);

void SaveCheckpoint(const Checkpoint &ckpt, const std::string &path);
Checkpoint LoadCheckpoint(const std::string &path);

// Rank-2 tensors in parameter order.
Checkpoint FromParams(const ParamList &params);
// Copies every parameter from `ckpt`; missing tensors and shape mismatches
// throw CheckpointError naming the tensor.
void ToParams(const Checkpoint &ckpt, const ParamList &params);

Tensor FromMatrix(const std::string &name, const Matrix &m);
Matrix ToMatrix(const Tensor &t);

}  // namespace tcpgen

#endif  // TCPGEN_CHECKPOINT_H_
