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

// Binary model format. All integers are little-endian, reals are IEEE-754
// binary64 stored bit for bit, so a save/load round trip is exact.
//
//   "A3NN" u32 version  u64 layer_count
//   per layer: u64 in_dim  u64 out_dim  u8 activation  f64 dropout_rate
//              f64[out_dim * in_dim] weights (row-major)  f64[out_dim] bias

#ifndef A3_SERIALIZE_H_
#define A3_SERIALIZE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>

#include "a3/nn.h"

namespace a3 {

class ByteWriter {
 public:
  void Bytes(std::string_view bytes) { out_.append(bytes); }
  void U8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void U32(std::uint32_t v);
  void U64(std::uint64_t v);
  void F64(double v);
  // u64 length prefix + raw bytes.
  void String(std::string_view s);

  const std::string& buffer() const { return out_; }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

// Bounds-checked reader; every failure reports the byte offset.
class ByteReader {
 public:
  ByteReader(std::string_view bytes, std::string source)
      : bytes_(bytes), source_(std::move(source)) {}

  std::string_view Bytes(std::size_t n);
  std::uint8_t U8();
  std::uint32_t U32();
  std::uint64_t U64();
  double F64();
  std::string String();
  void Expect(std::string_view magic);

  std::size_t offset() const { return pos_; }
  bool done() const { return pos_ == bytes_.size(); }
  [[noreturn]] void Fail(const std::string& what) const;

 private:
  std::string_view bytes_;
  std::string source_;
  std::size_t pos_ = 0;
};

inline constexpr std::uint32_t kNetworkFormatVersion = 1;

void WriteNetwork(ByteWriter& out, const nn::Network& net);
nn::Network ReadNetwork(ByteReader& in);

std::string SerializeNetwork(const nn::Network& net);
nn::Network DeserializeNetwork(std::string_view bytes);

void SaveNetwork(const nn::Network& net, const std::filesystem::path& path);
nn::Network LoadNetwork(const std::filesystem::path& path);

std::string ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes);

// 64-bit FNV-1a digest, rendered as 16 hex digits.
std::string Fingerprint(std::string_view bytes);

}  // namespace a3

#endif  // A3_SERIALIZE_H_
