/*
 * Copyright 2026 The A3 Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "a3/serialize.h"

#include <bit>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "a3/error.h"

namespace a3 {

void ByteWriter::U32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::U64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::String(std::string_view s) {
  U64(s.size());
  Bytes(s);
}

void ByteReader::Fail(const std::string& what) const {
  throw FormatError(source_, pos_, what);
}

std::string_view ByteReader::Bytes(std::size_t n) {
  if (n > bytes_.size() - pos_) {
    Fail("truncated: need " + std::to_string(n) + " bytes, " +
         std::to_string(bytes_.size() - pos_) + " left");
  }
  std::string_view out = bytes_.substr(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t ByteReader::U8() { return static_cast<std::uint8_t>(Bytes(1)[0]); }

std::uint32_t ByteReader::U32() {
  auto b = Bytes(4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(b[i]);
  return v;
}

std::uint64_t ByteReader::U64() {
  auto b = Bytes(8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(b[i]);
  return v;
}

double ByteReader::F64() { return std::bit_cast<double>(U64()); }

std::string ByteReader::String() {
  const std::uint64_t n = U64();
  return std::string(Bytes(n));
}

void ByteReader::Expect(std::string_view magic) {
  const std::size_t at = pos_;
  if (Bytes(magic.size()) != magic) {
    pos_ = at;
    Fail("bad magic, expected \"" + std::string(magic) + "\"");
  }
}

void WriteNetwork(ByteWriter& out, const nn::Network& net) {
  out.Bytes("A3NN");
  out.U32(kNetworkFormatVersion);
  out.U64(net.num_layers());
  for (const nn::DenseLayer& l : net.layers()) {
    out.U64(l.in_dim());
    out.U64(l.out_dim());
    out.U8(static_cast<std::uint8_t>(l.activation));
    out.F64(l.dropout_rate);
    for (double w : l.weights.data()) out.F64(w);
    for (double b : l.bias) out.F64(b);
  }
}

nn::Network ReadNetwork(ByteReader& in) {
  in.Expect("A3NN");
  const std::uint32_t version = in.U32();
  if (version != kNetworkFormatVersion) {
    in.Fail("unsupported network format version " + std::to_string(version));
  }
  const std::uint64_t count = in.U64();
  if (count > 4096) in.Fail("implausible layer count");
  std::vector<nn::DenseLayer> layers;
  layers.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t in_dim = in.U64();
    const std::uint64_t out_dim = in.U64();
    if (in_dim == 0 || out_dim == 0 || in_dim > (1u << 24) ||
        out_dim > (1u << 24)) {
      in.Fail("implausible layer dims");
    }
    nn::DenseLayer l;
    const std::uint8_t act = in.U8();
    if (act > static_cast<std::uint8_t>(nn::Activation::kSigmoid)) {
      in.Fail("unknown activation code " + std::to_string(act));
    }
    l.activation = static_cast<nn::Activation>(act);
    l.dropout_rate = in.F64();
    l.weights = Matrix(out_dim, in_dim);
    for (double& w : l.weights.data()) w = in.F64();
    l.bias.resize(out_dim);
    for (double& b : l.bias) b = in.F64();
    layers.push_back(std::move(l));
  }
  try {
    return nn::Network(std::move(layers));
  } catch (const Error& e) {
    in.Fail(e.what());
  }
}

std::string SerializeNetwork(const nn::Network& net) {
  ByteWriter w;
  WriteNetwork(w, net);
  return w.Take();
}

nn::Network DeserializeNetwork(std::string_view bytes) {
  ByteReader r(bytes, "<network>");
  nn::Network net = ReadNetwork(r);
  if (!r.done()) r.Fail("trailing bytes after network");
  return net;
}

void SaveNetwork(const nn::Network& net, const std::filesystem::path& path) {
  WriteFileBytes(path, SerializeNetwork(net));
}

nn::Network LoadNetwork(const std::filesystem::path& path) {
  const std::string bytes = ReadFileBytes(path);
  ByteReader r(bytes, path.string());
  nn::Network net = ReadNetwork(r);
  if (!r.done()) r.Fail("trailing bytes after network");
  return net;
}

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::string Fingerprint(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace a3
