// Copyright (c) 2026 FEPE Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "fepe/evalkit.hpp"
#include "fepe/labelgen.hpp"
#include "fepe/postproc.hpp"

namespace fepe {

// Per-image label container: <dir>/meta.json plus one raw little-endian
// row-major file per array, named <name>.<dtype>.
struct ContainerMeta {
  std::string image_id;
  int height = 0;
  int width = 0;
  int mu = 0;
  double delta = 0.0;
  double a_min = 0.0;
  // Size of the source image when labels were generated at another
  // resolution; detections are mapped back to it.
  std::optional<int> source_height;
  std::optional<int> source_width;
};

struct LabelContainer {
  ContainerMeta meta;
  std::optional<BinaryMap> text_map;
  std::optional<BinaryMap> kernel_map;
  std::optional<BinaryMap> ignore_mask;
  std::optional<Raster<float>> scale_map;
  std::optional<Raster<std::uint16_t>> surrounding;
  std::optional<ScoreMap> score_map;
};

void write_label_container(const std::filesystem::path& dir, const LabelSet& labels,
                           const ContainerMeta& meta);
void write_score_container(const std::filesystem::path& dir, const ScoreMap& scores,
                           const ContainerMeta& meta);

// Throws IoError naming the offending file when the container is malformed.
LabelContainer read_container(const std::filesystem::path& dir);

// The container's score map, or its kernel map read as probabilities.
ScoreMap container_scores(const LabelContainer& container);

nlohmann::ordered_json to_json(const DetectionSet& set);
DetectionSet detection_set_from_json(const nlohmann::json& doc);

nlohmann::ordered_json to_json(const AnnotatedImage& img);
AnnotatedImage annotated_image_from_json(const nlohmann::json& doc);

nlohmann::ordered_json to_json(const EvalReport& report);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace fepe
