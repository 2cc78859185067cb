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

// Single-file detector archive:
//
//   "A3DB" u32 version  string header_json
//   target network  alarm network  [vae encoder  vae decoder]
//
// The JSON header carries the target kind, generator settings, the input
// preprocessing and free-form run metadata.

#ifndef A3_BUNDLE_H_
#define A3_BUNDLE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "a3/alarm.h"
#include "a3/tabular.h"

namespace a3 {

inline constexpr std::uint32_t kBundleFormatVersion = 1;

struct Preprocessing {
  enum class Kind { kImage, kTabular };
  Kind kind = Kind::kImage;
  std::size_t input_dim = 0;
  bool transpose = false;  // image only
  std::optional<data::CsvSchema> schema;             // tabular only
  std::optional<data::TabularTransform> transform;  // tabular only

  nlohmann::json ToJson() const;
  static Preprocessing FromJson(const nlohmann::json& j);
};

struct DetectorBundle {
  Detector detector;
  Preprocessing preprocessing;
  nlohmann::json metadata = nlohmann::json::object();
};

std::string SerializeBundle(const DetectorBundle& bundle);
DetectorBundle DeserializeBundle(std::string_view bytes,
                                 const std::string& source = "<memory>");
void SaveBundle(const DetectorBundle& bundle, const std::filesystem::path& path);
DetectorBundle LoadBundle(const std::filesystem::path& path);

}  // namespace a3

#endif  // A3_BUNDLE_H_
