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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "fepe/error.hpp"
#include "fepe/io.hpp"
#include "oracles.hpp"

using namespace fepe;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("fepe_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string bytes_of(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

LabelSet sample_labels() {
  std::mt19937_64 rng(4);
  const AnnotatedImage img = oracle::random_layout(rng, 40, 56, 6);
  return gen_labelset(img, {});
}

}  // namespace

TEST_CASE("label container round trip") {
  TempDir tmp;
  const LabelSet ls = sample_labels();
  ContainerMeta meta{"img_7", 40, 56, 5, 0.4, 16.0, 80, 112};
  write_label_container(tmp.path / "img_7", ls, meta);

  const LabelContainer back = read_container(tmp.path / "img_7");
  CHECK(back.meta.image_id == "img_7");
  CHECK(back.meta.mu == 5);
  CHECK(back.meta.source_height == 80);
  CHECK(back.meta.source_width == 112);
  CHECK(*back.text_map == ls.text_map);
  CHECK(*back.kernel_map == ls.kernel_map);
  CHECK(*back.ignore_mask == ls.ignore_mask);
  CHECK(*back.scale_map == ls.scale_map);
  CHECK(*back.surrounding == ls.surrounding);
  CHECK(container_scores(back)[0] == static_cast<float>(ls.kernel_map[0]));
}

TEST_CASE("container files are raw little-endian row-major arrays") {
  TempDir tmp;
  const LabelSet ls = sample_labels();
  write_label_container(tmp.path, ls, {"x", 40, 56, 5, 0.4, 16.0, {}, {}});

  const std::string text = bytes_of(tmp.path / "text_map.u8");
  REQUIRE(text.size() == 40u * 56u);
  for (std::size_t i = 0; i < text.size(); ++i) REQUIRE(static_cast<std::uint8_t>(text[i]) == ls.text_map[i]);

  const std::string sur = bytes_of(tmp.path / "surrounding.u16");
  REQUIRE(sur.size() == 40u * 56u * 4u * 2u);
  for (std::size_t i = 0; i < ls.surrounding.size(); ++i) {
    const auto lo = static_cast<std::uint8_t>(sur[2 * i]);
    const auto hi = static_cast<std::uint8_t>(sur[2 * i + 1]);
    REQUIRE((lo | (hi << 8)) == ls.surrounding[i]);
  }

  const std::string scale = bytes_of(tmp.path / "scale_map.f32");
  REQUIRE(scale.size() == 40u * 56u * 4u);
  for (std::size_t i = 0; i < ls.scale_map.size(); ++i) {
    std::uint32_t bits = 0;
    for (int b = 3; b >= 0; --b) bits = (bits << 8) | static_cast<std::uint8_t>(scale[4 * i + b]);
    float v;
    std::memcpy(&v, &bits, 4);
    REQUIRE(v == ls.scale_map[i]);
  }

  const auto meta = nlohmann::json::parse(bytes_of(tmp.path / "meta.json"));
  for (const char* key : {"height", "width", "mu", "delta", "a_min", "image_id", "arrays"}) CHECK(meta.contains(key));
  bool found = false;
  for (const auto& a : meta["arrays"]) {
    if (a["name"] == "surrounding") {
      found = true;
      CHECK(a["dtype"] == "u16");
      CHECK(a["shape"] == nlohmann::json::array({40, 56, 4}));
    }
  }
  CHECK(found);
}

TEST_CASE("writing is byte-identical across runs") {
  TempDir tmp;
  const LabelSet ls = sample_labels();
  const ContainerMeta meta{"x", 40, 56, 5, 0.4, 16.0, {}, {}};
  write_label_container(tmp.path / "a", ls, meta);
  write_label_container(tmp.path / "b", ls, meta);
  for (const char* f : {"meta.json", "text_map.u8", "kernel_map.u8", "ignore_mask.u8", "scale_map.f32", "surrounding.u16"})
    CHECK(bytes_of(tmp.path / "a" / f) == bytes_of(tmp.path / "b" / f));
}

TEST_CASE("score container") {
  TempDir tmp;
  ScoreMap s(3, 4);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<float>(i) / 12.0f;
  write_score_container(tmp.path, s, {"s", 3, 4, 0, 0.0, 0.0, {}, {}});
  const LabelContainer back = read_container(tmp.path);
  CHECK(container_scores(back) == s);
}

TEST_CASE("malformed containers name the file") {
  TempDir tmp;
  write_label_container(tmp.path, sample_labels(), {"x", 40, 56, 5, 0.4, 16.0, {}, {}});
  fs::resize_file(tmp.path / "kernel_map.u8", 10);
  try {
    read_container(tmp.path);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("kernel_map.u8") != std::string::npos);
  }
  write_text_file(tmp.path / "meta.json", "{ not json");
  CHECK_THROWS_AS(read_container(tmp.path), IoError);
  CHECK_THROWS_AS(read_container(tmp.path / "missing"), IoError);
}

TEST_CASE("detection set json round trip") {
  const DetectionSet set{"d", {{Polygon({{0.5, 0}, {10, 0}, {10, 7.25}}), 0.875}}};
  const auto doc = to_json(set);
  CHECK(doc["image_id"] == "d");
  CHECK(doc["detections"][0]["points"].size() == 3);
  const DetectionSet back = detection_set_from_json(nlohmann::json::parse(doc.dump()));
  REQUIRE(back.detections.size() == 1);
  CHECK(back.detections[0].polygon == set.detections[0].polygon);
  CHECK(back.detections[0].score == 0.875);
  CHECK_THROWS_AS(detection_set_from_json(nlohmann::json::parse(R"({"image_id": "x", "detections": [{"points": [[0,0],[1,1]], "score": 1}]})")),
                  IoError);
}

TEST_CASE("annotated image json round trip") {
  std::mt19937_64 rng(3);
  const AnnotatedImage img = oracle::random_layout(rng, 50, 60, 5);
  const AnnotatedImage back = annotated_image_from_json(nlohmann::json::parse(to_json(img).dump()));
  CHECK(back.image_id == img.image_id);
  CHECK(back.height == 50);
  CHECK(back.instances == img.instances);
}

TEST_CASE("eval report json keys") {
  EvalReport r;
  r.precision = 1.0;
  r.per_image.push_back({"a", 1, 1, 1, {}, {{0, 0, 0.9}}});
  const auto doc = to_json(r);
  for (const char* key : {"precision", "recall", "fmeasure", "tp", "num_dets", "num_gts", "per_image"})
    CHECK(doc.contains(key));
}
