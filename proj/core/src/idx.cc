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

#include <algorithm>
#include <map>

#include "a3/data.h"
#include "a3/error.h"
#include "a3/serialize.h"

namespace a3::data {
namespace {

std::uint32_t BigEndian32(ByteReader& in) {
  const auto b = in.Bytes(4);
  return (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[0])) << 24) |
         (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[1])) << 16) |
         (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[2])) << 8) |
         static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[3]));
}

void PutBigEndian32(std::string& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<char>((v >> shift) & 0xff));
  }
}

std::vector<std::string> LabelNames(IdxLabels labels) {
  std::vector<std::string> names;
  switch (labels) {
    case IdxLabels::kDigits:
      for (char c = '0'; c <= '9'; ++c) names.emplace_back(1, c);
      break;
    case IdxLabels::kEmnistLetters:
      names.emplace_back("N/A");  // label 0 is unused in the letters split
      for (char c = 'A'; c <= 'Z'; ++c) names.emplace_back(1, c);
      break;
    case IdxLabels::kEmnistByClass:
      for (char c = '0'; c <= '9'; ++c) names.emplace_back(1, c);
      for (char c = 'A'; c <= 'Z'; ++c) names.emplace_back(1, c);
      for (char c = 'a'; c <= 'z'; ++c) names.emplace_back(1, c);
      break;
  }
  return names;
}

}  // namespace

int Dataset::ClassId(const std::string& name) const {
  auto it = std::find(class_names.begin(), class_names.end(), name);
  return it == class_names.end() ? -1
                                 : static_cast<int>(it - class_names.begin());
}

std::vector<std::size_t> Dataset::RowsOfClasses(
    std::span<const std::string> names) const {
  std::vector<bool> wanted(class_names.size(), false);
  for (const std::string& n : names) {
    const int id = ClassId(n);
    if (id >= 0) wanted[static_cast<std::size_t>(id)] = true;
  }
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] >= 0 && wanted[static_cast<std::size_t>(y[i])]) rows.push_back(i);
  }
  return rows;
}

Dataset Dataset::Subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.x = GatherRows(x, rows);
  out.y.reserve(rows.size());
  for (std::size_t r : rows) out.y.push_back(y[r]);
  out.class_names = class_names;
  return out;
}

Dataset Merge(const Dataset& a, const Dataset& b) {
  Dataset out;
  out.class_names = a.class_names;
  std::vector<int> remap(b.class_names.size());
  for (std::size_t i = 0; i < b.class_names.size(); ++i) {
    int id = out.ClassId(b.class_names[i]);
    if (id < 0) {
      id = static_cast<int>(out.class_names.size());
      out.class_names.push_back(b.class_names[i]);
    }
    remap[i] = id;
  }
  out.x = VStack(a.x, b.x);
  out.y = a.y;
  for (int label : b.y) out.y.push_back(remap[static_cast<std::size_t>(label)]);
  return out;
}

Matrix ReadIdxImages(const std::filesystem::path& path, bool transpose) {
  const std::string bytes = ReadFileBytes(path);
  ByteReader in(bytes, path.string());
  const std::uint32_t magic = BigEndian32(in);
  if (magic != kIdxImageMagic) {
    throw FormatError(path.string(), 0, "bad IDX image magic");
  }
  const std::uint32_t count = BigEndian32(in);
  const std::uint32_t rows = BigEndian32(in);
  const std::uint32_t cols = BigEndian32(in);
  if (transpose && rows != cols) {
    throw FormatError(path.string(), 8, "cannot transpose non-square images");
  }
  const std::size_t dim = static_cast<std::size_t>(rows) * cols;
  const std::size_t expected = dim * count;
  if (bytes.size() - in.offset() < expected) {
    throw FormatError(path.string(), bytes.size(),
                      "truncated: header promises " + std::to_string(count) +
                          " images of " + std::to_string(dim) + " bytes");
  }
  const auto pixels = in.Bytes(expected);
  Matrix out(count, dim);
  for (std::size_t n = 0; n < count; ++n) {
    auto row = out.row(n);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        const std::size_t src = n * dim + r * cols + c;
        const std::size_t dst = transpose ? c * rows + r : r * cols + c;
        row[dst] = static_cast<std::uint8_t>(pixels[src]) / 255.0;
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> ReadIdxLabels(const std::filesystem::path& path) {
  const std::string bytes = ReadFileBytes(path);
  ByteReader in(bytes, path.string());
  const std::uint32_t magic = BigEndian32(in);
  if (magic != kIdxLabelMagic) {
    throw FormatError(path.string(), 0, "bad IDX label magic");
  }
  const std::uint32_t count = BigEndian32(in);
  if (bytes.size() - in.offset() < count) {
    throw FormatError(path.string(), bytes.size(),
                      "truncated: header promises " + std::to_string(count) +
                          " labels");
  }
  const auto raw = in.Bytes(count);
  return {raw.begin(), raw.end()};
}

Dataset LoadIdx(const std::filesystem::path& images,
                const std::filesystem::path& labels,
                const IdxOptions& options) {
  Dataset ds;
  ds.x = ReadIdxImages(images, options.transpose);
  const std::vector<std::uint8_t> raw = ReadIdxLabels(labels);
  if (raw.size() != ds.x.rows()) {
    throw FormatError(labels.string(), 4,
                      "label count " + std::to_string(raw.size()) +
                          " does not match image count " +
                          std::to_string(ds.x.rows()));
  }
  ds.class_names = LabelNames(options.labels);
  ds.y.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] >= ds.class_names.size()) {
      throw FormatError(labels.string(), 8 + i,
                        "label " + std::to_string(raw[i]) + " out of range");
    }
    ds.y.push_back(raw[i]);
  }
  return ds;
}

void WriteIdxImages(const std::filesystem::path& path,
                    std::span<const std::uint8_t> pixels, std::uint32_t count,
                    std::uint32_t rows, std::uint32_t cols) {
  if (pixels.size() != static_cast<std::size_t>(count) * rows * cols) {
    throw DimensionError("WriteIdxImages",
                         std::to_string(static_cast<std::size_t>(count) * rows * cols),
                         std::to_string(pixels.size()));
  }
  std::string out;
  PutBigEndian32(out, kIdxImageMagic);
  PutBigEndian32(out, count);
  PutBigEndian32(out, rows);
  PutBigEndian32(out, cols);
  out.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
  WriteFileBytes(path, out);
}

void WriteIdxLabels(const std::filesystem::path& path,
                    std::span<const std::uint8_t> labels) {
  std::string out;
  PutBigEndian32(out, kIdxLabelMagic);
  PutBigEndian32(out, static_cast<std::uint32_t>(labels.size()));
  out.append(reinterpret_cast<const char*>(labels.data()), labels.size());
  WriteFileBytes(path, out);
}

}  // namespace a3::data
