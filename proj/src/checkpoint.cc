// tcpgen/src/checkpoint.cc

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

#include "tcpgen/checkpoint.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace tcpgen {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <typename T>
void Put(std::string *out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out->append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::string &bytes) : bytes_(bytes) {}

  template <typename T>
  T Get(const std::string &tensor, const char *field) {
    Need(sizeof(T), tensor, field);
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::string GetString(size_t n, const std::string &tensor, const char *field) {
    Need(n, tensor, field);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  void GetDoubles(double *dst, size_t n, const std::string &tensor) {
    if (n > (bytes_.size() - pos_) / sizeof(double)) {
      Need(std::numeric_limits<size_t>::max(), tensor, "data");
    }
    std::memcpy(dst, bytes_.data() + pos_, n * sizeof(double));
    pos_ += n * sizeof(double);
  }

  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  void Need(size_t n, const std::string &tensor, const char *field) {
    if (n > bytes_.size() - pos_) {
      std::string where = tensor.empty() ? "header" : "tensor '" + tensor + "'";
      throw CheckpointError("checkpoint truncated in " + where + " (" + field + ")",
                            tensor);
    }
  }

  const std::string &bytes_;
  size_t pos_ = 0;
};

}  // namespace

size_t Tensor::NumElements() const {
  size_t n = 1;
  for (uint32_t d : shape) n *= d;
  return n;
}

const Tensor *Checkpoint::Find(const std::string &name) const {
  for (const Tensor &t : tensors)
    if (t.name == name) return &t;
  return nullptr;
}

std::string EncodeCheckpoint(const Checkpoint &ckpt) {
  std::string out = "TCPG";
  Put<uint32_t>(&out, kCheckpointVersion);
  Put<uint32_t>(&out, static_cast<uint32_t>(ckpt.tensors.size()));
  for (const Tensor &t : ckpt.tensors) {
    TCPGEN_CHECK(t.name.size() <= std::numeric_limits<uint16_t>::max());
    TCPGEN_CHECK(t.shape.size() <= std::numeric_limits<uint8_t>::max());
    TCPGEN_CHECK(t.data.size() == t.NumElements());
    for (double v : t.data) {
      if (!std::isfinite(v)) throw FormatError("tensor '" + t.name + "' is not finite");
    }
    Put<uint16_t>(&out, static_cast<uint16_t>(t.name.size()));
    out += t.name;
    Put<uint8_t>(&out, static_cast<uint8_t>(t.shape.size()));
    for (uint32_t d : t.shape) Put<uint32_t>(&out, d);
    out.append(reinterpret_cast<const char *>(t.data.data()),
               t.data.size() * sizeof(double));
  }
  return out;
}

Checkpoint DecodeCheckpoint(const std::string &bytes) {
  Reader r(bytes);
  if (r.GetString(4, "", "magic") != "TCPG")
    throw CheckpointError("bad checkpoint magic", "");
  uint32_t version = r.Get<uint32_t>("", "version");
  if (version != kCheckpointVersion)
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version), "");
  uint32_t count = r.Get<uint32_t>("", "tensor count");
  Checkpoint ckpt;
  for (uint32_t i = 0; i < count; ++i) {
    std::string placeholder = "#" + std::to_string(i);
    uint16_t len = r.Get<uint16_t>(placeholder, "name length");
    Tensor t;
    t.name = r.GetString(len, placeholder, "name");
    uint8_t rank = r.Get<uint8_t>(t.name, "rank");
    for (uint8_t k = 0; k < rank; ++k) t.shape.push_back(r.Get<uint32_t>(t.name, "dims"));
    t.data.resize(t.NumElements());
    r.GetDoubles(t.data.data(), t.data.size(), t.name);
    ckpt.tensors.push_back(std::move(t));
  }
  if (!r.AtEnd()) throw CheckpointError("trailing bytes after last tensor", "");
  return ckpt;
}

void SaveCheckpoint(const Checkpoint &ckpt, const std::string &path) {
  std::string bytes = EncodeCheckpoint(ckpt);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error("write failed: " + path);
}

Checkpoint LoadCheckpoint(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return DecodeCheckpoint(ss.str());
}

Tensor FromMatrix(const std::string &name, const Matrix &m) {
  Tensor t;
  t.name = name;
  t.shape = {static_cast<uint32_t>(m.rows()), static_cast<uint32_t>(m.cols())};
  t.data = m.data();
  return t;
}

Matrix ToMatrix(const Tensor &t) {
  if (t.shape.size() != 2)
    throw CheckpointError("tensor '" + t.name + "' is not rank 2", t.name);
  Matrix m(static_cast<int>(t.shape[0]), static_cast<int>(t.shape[1]));
  m.data() = t.data;
  return m;
}

Checkpoint FromParams(const ParamList &params) {
  Checkpoint ckpt;
  for (const NamedParam &p : params) ckpt.tensors.push_back(FromMatrix(p.name, *p.value));
  return ckpt;
}

void ToParams(const Checkpoint &ckpt, const ParamList &params) {
  for (const NamedParam &p : params) {
    const Tensor *t = ckpt.Find(p.name);
    if (t == nullptr) throw CheckpointError("missing tensor '" + p.name + "'", p.name);
    if (t->shape.size() != 2 || static_cast<int>(t->shape[0]) != p.value->rows() ||
        static_cast<int>(t->shape[1]) != p.value->cols()) {
      throw CheckpointError("shape mismatch for tensor '" + p.name + "'", p.name);
    }
    p.value->data() = t->data;
  }
}

}  // namespace tcpgen
