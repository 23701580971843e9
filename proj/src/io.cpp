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

#include "fepe/io.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>

namespace fepe {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <typename T>
struct DType;
template <>
struct DType<std::uint8_t> {
  static constexpr const char* name = "u8";
};
template <>
struct DType<std::uint16_t> {
  static constexpr const char* name = "u16";
};
template <>
struct DType<float> {
  static constexpr const char* name = "f32";
};

template <typename T>
T byteswap_value(T v) {
  auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
  std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

template <typename T>
ordered_json write_array(const fs::path& dir, const std::string& name, const Raster<T>& raster) {
  const fs::path path = dir / (name + "." + DType<T>::name);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  if constexpr (std::endian::native == std::endian::little || sizeof(T) == 1) {
    out.write(reinterpret_cast<const char*>(raster.data().data()),
              static_cast<std::streamsize>(raster.size() * sizeof(T)));
  } else {
    for (T v : raster.data()) {
      const T swapped = byteswap_value(v);
      out.write(reinterpret_cast<const char*>(&swapped), sizeof(T));
    }
  }
  if (!out) throw IoError("error while writing " + path.string());
  ordered_json shape = ordered_json::array({raster.height(), raster.width()});
  if (raster.channels() != 1) shape.push_back(raster.channels());
  return ordered_json{{"name", name}, {"dtype", DType<T>::name}, {"shape", shape}};
}

template <typename T>
Raster<T> read_array(const fs::path& path, const std::vector<int>& shape) {
  if (shape.size() < 2 || shape.size() > 3 || std::any_of(shape.begin(), shape.end(), [](int d) { return d <= 0; })) {
    throw IoError("bad array shape for " + path.string());
  }
  Raster<T> raster(shape[0], shape[1], shape.size() == 3 ? shape[2] : 1);
  std::error_code ec;
  const auto bytes = fs::file_size(path, ec);
  if (ec || bytes != raster.size() * sizeof(T)) {
    throw IoError("array file " + path.string() + " does not match its declared shape");
  }
  std::ifstream in(path, std::ios::binary);
  in.read(reinterpret_cast<char*>(raster.data().data()), static_cast<std::streamsize>(bytes));
  if (!in) throw IoError("cannot read " + path.string());
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    for (T& v : raster.data()) v = byteswap_value(v);
  }
  return raster;
}

ordered_json meta_json(const ContainerMeta& meta) {
  ordered_json doc{{"height", meta.height}, {"width", meta.width}, {"mu", meta.mu},
                   {"delta", meta.delta},   {"a_min", meta.a_min}, {"image_id", meta.image_id}};
  if (meta.source_height && meta.source_width) {
    doc["source_height"] = *meta.source_height;
    doc["source_width"] = *meta.source_width;
  }
  return doc;
}

void write_meta(const fs::path& dir, ordered_json doc, ordered_json arrays) {
  doc["arrays"] = std::move(arrays);
  write_text_file(dir / "meta.json", doc.dump(2) + "\n");
}

ordered_json point_list(const Polygon& poly) {
  ordered_json pts = ordered_json::array();
  for (const Point& p : poly.points()) pts.push_back({p.x, p.y});
  return pts;
}

Polygon polygon_from_json(const json& pts) {
  std::vector<Point> points;
  for (const auto& p : pts) points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  try {
    return Polygon(std::move(points));
  } catch (const InvalidPolygon& e) {
    throw IoError(std::string("invalid polygon: ") + e.what());
  }
}

}  // namespace

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("error while writing " + path.string());
}

void write_label_container(const fs::path& dir, const LabelSet& labels, const ContainerMeta& meta) {
  fs::create_directories(dir);
  ordered_json arrays = ordered_json::array();
  arrays.push_back(write_array(dir, "text_map", labels.text_map));
  arrays.push_back(write_array(dir, "kernel_map", labels.kernel_map));
  arrays.push_back(write_array(dir, "ignore_mask", labels.ignore_mask));
  arrays.push_back(write_array(dir, "scale_map", labels.scale_map));
  arrays.push_back(write_array(dir, "surrounding", labels.surrounding));
  write_meta(dir, meta_json(meta), std::move(arrays));
}

void write_score_container(const fs::path& dir, const ScoreMap& scores, const ContainerMeta& meta) {
  fs::create_directories(dir);
  ordered_json arrays = ordered_json::array();
  arrays.push_back(write_array(dir, "score_map", scores));
  write_meta(dir, meta_json(meta), std::move(arrays));
}

LabelContainer read_container(const fs::path& dir) {
  const fs::path meta_path = dir / "meta.json";
  LabelContainer out;
  json doc;
  try {
    doc = json::parse(read_text_file(meta_path));
    out.meta.image_id = doc.at("image_id").get<std::string>();
    out.meta.height = doc.at("height").get<int>();
    out.meta.width = doc.at("width").get<int>();
    out.meta.mu = doc.value("mu", 0);
    out.meta.delta = doc.value("delta", 0.0);
    out.meta.a_min = doc.value("a_min", 0.0);
    if (doc.contains("source_height") && doc.contains("source_width")) {
      out.meta.source_height = doc.at("source_height").get<int>();
      out.meta.source_width = doc.at("source_width").get<int>();
    }
  } catch (const json::exception& e) {
    throw IoError("malformed " + meta_path.string() + ": " + e.what());
  }
  if (out.meta.height <= 0 || out.meta.width <= 0) {
    throw IoError("malformed " + meta_path.string() + ": non-positive dimensions");
  }

  try {
    for (const auto& entry : doc.at("arrays")) {
      const auto name = entry.at("name").get<std::string>();
      const auto dtype = entry.at("dtype").get<std::string>();
      const auto shape = entry.at("shape").get<std::vector<int>>();
      const fs::path path = dir / (name + "." + dtype);
      if (shape.size() < 2 || shape[0] != out.meta.height || shape[1] != out.meta.width) {
        throw IoError("array " + path.string() + " does not match the container dimensions");
      }
      if (dtype == "u8") {
        auto raster = read_array<std::uint8_t>(path, shape);
        if (name == "text_map") out.text_map = std::move(raster);
        else if (name == "kernel_map") out.kernel_map = std::move(raster);
        else if (name == "ignore_mask") out.ignore_mask = std::move(raster);
      } else if (dtype == "f32") {
        auto raster = read_array<float>(path, shape);
        if (name == "scale_map") out.scale_map = std::move(raster);
        else if (name == "score_map") out.score_map = std::move(raster);
      } else if (dtype == "u16") {
        auto raster = read_array<std::uint16_t>(path, shape);
        if (name == "surrounding") out.surrounding = std::move(raster);
      } else {
        throw IoError("unsupported dtype '" + dtype + "' in " + meta_path.string());
      }
    }
  } catch (const json::exception& e) {
    throw IoError("malformed " + meta_path.string() + ": " + e.what());
  }
  return out;
}

ScoreMap container_scores(const LabelContainer& container) {
  if (container.score_map) return *container.score_map;
  if (container.kernel_map) return raster_cast<float>(*container.kernel_map);
  throw IoError("container for '" + container.meta.image_id + "' holds no score or kernel map");
}

ordered_json to_json(const DetectionSet& set) {
  ordered_json dets = ordered_json::array();
  for (const Detection& det : set.detections) {
    dets.push_back({{"points", point_list(det.polygon)}, {"score", det.score}});
  }
  return {{"image_id", set.image_id}, {"detections", dets}};
}

DetectionSet detection_set_from_json(const json& doc) {
  DetectionSet set;
  try {
    set.image_id = doc.at("image_id").get<std::string>();
    for (const auto& det : doc.at("detections")) {
      set.detections.push_back({polygon_from_json(det.at("points")), det.value("score", 1.0)});
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed detection set: ") + e.what());
  }
  return set;
}

ordered_json to_json(const AnnotatedImage& img) {
  ordered_json instances = ordered_json::array();
  for (const TextInstance& inst : img.instances) {
    instances.push_back({{"points", point_list(inst.polygon)}, {"ignore", inst.ignore}});
  }
  return {{"image_id", img.image_id}, {"height", img.height}, {"width", img.width}, {"instances", instances}};
}

AnnotatedImage annotated_image_from_json(const json& doc) {
  AnnotatedImage img;
  try {
    img.image_id = doc.at("image_id").get<std::string>();
    img.height = doc.at("height").get<int>();
    img.width = doc.at("width").get<int>();
    for (const auto& inst : doc.at("instances")) {
      img.instances.push_back({polygon_from_json(inst.at("points")), inst.value("ignore", false)});
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed annotated image: ") + e.what());
  }
  return img;
}

ordered_json to_json(const EvalReport& report) {
  ordered_json per_image = ordered_json::array();
  for (const ImageEval& img : report.per_image) {
    ordered_json matches = ordered_json::array();
    for (const MatchRecord& m : img.matches) {
      matches.push_back({{"det", m.det}, {"gt", m.gt}, {"iou", m.iou}});
    }
    per_image.push_back({{"image_id", img.image_id},
                         {"tp", img.tp},
                         {"num_dets", img.num_dets},
                         {"num_gts", img.num_gts},
                         {"discarded", img.discarded},
                         {"matches", matches}});
  }
  return {{"precision", report.precision}, {"recall", report.recall}, {"fmeasure", report.fmeasure},
          {"tp", report.tp},               {"num_dets", report.num_dets}, {"num_gts", report.num_gts},
          {"per_image", per_image}};
}

}  // namespace fepe
