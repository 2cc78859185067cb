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

#include "a3/bundle.h"

#include "a3/error.h"
#include "a3/serialize.h"

namespace a3 {

nlohmann::json Preprocessing::ToJson() const {
  nlohmann::json j;
  j["kind"] = kind == Kind::kImage ? "image" : "tabular";
  j["input_dim"] = input_dim;
  if (kind == Kind::kImage) {
    j["transpose"] = transpose;
  } else {
    if (!schema || !transform) {
      throw StateError("tabular preprocessing without schema or transform");
    }
    j["schema"] = schema->ToJson();
    j["transform"] = transform->ToJson();
  }
  return j;
}

Preprocessing Preprocessing::FromJson(const nlohmann::json& j) {
  Preprocessing p;
  const std::string kind = j.at("kind").get<std::string>();
  j.at("input_dim").get_to(p.input_dim);
  if (kind == "image") {
    p.kind = Kind::kImage;
    p.transpose = j.value("transpose", false);
  } else if (kind == "tabular") {
    p.kind = Kind::kTabular;
    p.schema = data::CsvSchema::FromJson(j.at("schema"));
    p.transform = data::TabularTransform::FromJson(j.at("transform"));
    if (p.transform->output_dim() != p.input_dim) {
      throw InvalidArgument("tabular transform width does not match input_dim");
    }
  } else {
    throw InvalidArgument("unknown preprocessing kind '" + kind + "'");
  }
  return p;
}

std::string SerializeBundle(const DetectorBundle& bundle) {
  const Detector& d = bundle.detector;
  nlohmann::json header;
  header["target_kind"] = TargetKindName(d.target.kind);
  header["generator"] = {
      {"kind", GeneratorKindName(d.generator.kind)},
      {"noise_mean", d.generator.noise.mean},
      {"noise_stddev", d.generator.noise.stddev},
      {"perturb_variance", d.generator.perturb_variance},
      {"has_vae", d.generator.vae.has_value()},
  };
  header["preprocessing"] = bundle.preprocessing.ToJson();
  header["metadata"] = bundle.metadata;

  ByteWriter out;
  out.Bytes("A3DB");
  out.U32(kBundleFormatVersion);
  out.String(header.dump());
  WriteNetwork(out, d.target.net);
  WriteNetwork(out, d.alarm);
  if (d.generator.vae) {
    WriteNetwork(out, d.generator.vae->encoder());
    WriteNetwork(out, d.generator.vae->decoder());
  }
  return out.Take();
}

DetectorBundle DeserializeBundle(std::string_view bytes,
                                 const std::string& source) {
  ByteReader in(bytes, source);
  in.Expect("A3DB");
  const std::uint32_t version = in.U32();
  if (version != kBundleFormatVersion) {
    in.Fail("unsupported bundle version " + std::to_string(version));
  }
  const std::size_t header_offset = in.offset();
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(in.String());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(source, header_offset, e.what());
  }

  DetectorBundle b;
  try {
    const std::string kind = header.at("target_kind").get<std::string>();
    b.detector.target.kind = kind == TargetKindName(TargetKind::kClassifier)
                                 ? TargetKind::kClassifier
                                 : TargetKind::kAutoencoder;
    const auto& g = header.at("generator");
    b.detector.generator.kind =
        ParseGeneratorKind(g.at("kind").get<std::string>());
    g.at("noise_mean").get_to(b.detector.generator.noise.mean);
    g.at("noise_stddev").get_to(b.detector.generator.noise.stddev);
    g.at("perturb_variance").get_to(b.detector.generator.perturb_variance);
    b.preprocessing = Preprocessing::FromJson(header.at("preprocessing"));
    b.metadata = header.value("metadata", nlohmann::json::object());
    b.detector.target.net = ReadNetwork(in);
    b.detector.alarm = ReadNetwork(in);
    if (g.at("has_vae").get<bool>()) {
      nn::Network encoder = ReadNetwork(in);
      nn::Network decoder = ReadNetwork(in);
      b.detector.generator.vae.emplace(std::move(encoder), std::move(decoder),
                                       true);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(source, header_offset, e.what());
  }
  if (!in.done()) in.Fail("trailing bytes after bundle");
  if (b.detector.target.net.input_dim() != b.preprocessing.input_dim) {
    in.Fail("target input width does not match preprocessing metadata");
  }
  if (b.detector.alarm.input_dim() != b.detector.target.net.trace_width()) {
    in.Fail("alarm input width does not match the target trace width");
  }
  return b;
}

void SaveBundle(const DetectorBundle& bundle,
                const std::filesystem::path& path) {
  WriteFileBytes(path, SerializeBundle(bundle));
}

DetectorBundle LoadBundle(const std::filesystem::path& path) {
  return DeserializeBundle(ReadFileBytes(path), path.string());
}

}  // namespace a3
