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

#include <filesystem>
#include <fstream>
#include <random>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "fepe/error.hpp"
#include "fepe/ingest.hpp"
#include "oracles.hpp"

using namespace fepe;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("fepe_ingest_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

std::vector<Point> pts(std::initializer_list<Point> list) { return list; }

}  // namespace

TEST_CASE("format names") {
  CHECK(parse_format_name("icdar15") == AnnotationFormat::kIcdar15Quad);
  CHECK(parse_format_name("polycsv") == AnnotationFormat::kPolyCsv);
  CHECK(parse_format_name("td500") == AnnotationFormat::kTd500RotRect);
  CHECK_FALSE(parse_format_name("coco").has_value());
  CHECK(format_name(AnnotationFormat::kPolyCsv) == "polycsv");
}

TEST_CASE("parse_icdar15_line examples") {
  const TextInstance a = parse_icdar15_line("0,0,10,0,10,5,0,5,HELLO");
  CHECK(a.polygon == Polygon(pts({{0, 0}, {10, 0}, {10, 5}, {0, 5}})));
  CHECK_FALSE(a.ignore);
  CHECK(parse_icdar15_line("0,0,10,0,10,5,0,5,###").ignore);
  CHECK_THROWS_AS(parse_icdar15_line("0,0,10,0"), ParseError);
  // Transcriptions may contain commas.
  CHECK_FALSE(parse_icdar15_line("0,0,10,0,10,5,0,5,a,b,###").ignore);
  // Byte-order mark and CRLF from the original release.
  CHECK(parse_icdar15_line("\xEF\xBB\xBF" "0,0,10,0,10,5,0,5,x\r").polygon.size() == 4);
  try {
    parse_icdar15_line("0,0,zz,0,10,5,0,5,x", 7);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
  }
}

TEST_CASE("parse_poly_csv_line examples") {
  std::string line;
  for (int i = 0; i < 14; ++i) {
    const double a = 2.0 * M_PI * i / 14;
    line += std::to_string(50 + 40 * std::cos(a)) + "," + std::to_string(50 + 20 * std::sin(a)) + ",";
  }
  line.pop_back();
  CHECK(parse_poly_csv_line(line).polygon.size() == 14);
  CHECK(parse_poly_csv_line("0,0,4,0,0,3").polygon.size() == 3);
  CHECK_THROWS_AS(parse_poly_csv_line("0,0,4,0,0,3,9"), ParseError);
  CHECK_THROWS_AS(parse_poly_csv_line("0,0,4,0"), ParseError);
  CHECK(parse_poly_csv_line("0,0,4,0,0,3,###").ignore);
  CHECK(parse_poly_csv_line("0,0,4,0,0,3,#").ignore);
  CHECK_FALSE(parse_poly_csv_line("0,0,4,0,0,3,word").ignore);
  CHECK_THROWS_AS(parse_poly_csv_line("0,0,2,2,2,0,0,2"), ParseError);
}

TEST_CASE("parse_ctw1500_offset_line") {
  std::string line = "100,200,150,230";
  for (int i = 0; i < 7; ++i) line += "," + std::to_string(i * 7) + ",0";
  for (int i = 6; i >= 0; --i) line += "," + std::to_string(i * 7) + ",30";
  const TextInstance inst = parse_ctw1500_offset_line(line);
  CHECK(inst.polygon.size() == 14);
  CHECK(polygon_area(inst.polygon) == doctest::Approx(42.0 * 30.0));
  CHECK_THROWS_AS(parse_ctw1500_offset_line("1,2,3"), ParseError);
}

TEST_CASE("parse_td500_line examples") {
  const TextInstance a = parse_td500_line("0 0 0 0 10 4 0");
  CHECK(a.polygon == Polygon(pts({{0, 0}, {10, 0}, {10, 4}, {0, 4}})));
  CHECK_FALSE(a.ignore);
  const TextInstance b = parse_td500_line("0 1 0 0 10 4 0");
  CHECK(b.polygon == a.polygon);
  CHECK(b.ignore);
  const TextInstance c = parse_td500_line("3 0 0 0 10 4 1.5707963267948966");
  double x0 = 1e9, x1 = -1e9, y0 = 1e9, y1 = -1e9;
  for (const auto& p : c.polygon.points()) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  CHECK(x1 - x0 == doctest::Approx(4.0));
  CHECK(y1 - y0 == doctest::Approx(10.0));
  CHECK((x0 + x1) / 2 == doctest::Approx(5.0));
  CHECK((y0 + y1) / 2 == doctest::Approx(2.0));
  CHECK_THROWS_AS(parse_td500_line("0 0 0 0 10 4"), ParseError);
  CHECK_THROWS_AS(parse_td500_line("0 0 0 0 10 4 0 9"), ParseError);
}

TEST_CASE("td500 corners are counter-clockwise for any angle") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-10.0, 10.0), size(1.0, 100.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string line = "0 0 5 5 " + std::to_string(size(rng)) + " " + std::to_string(size(rng)) + " " +
                             std::to_string(angle(rng));
    const TextInstance inst = parse_td500_line(line);
    CHECK(signed_area(inst.polygon.points()) > 0.0);
  }
}

TEST_CASE("out-of-range coordinates are parse errors") {
  CHECK_THROWS_AS(parse_poly_csv_line("10,10,50,8,90,10E90,40,50,42,10,40,###"), ParseError);
  CHECK_THROWS_AS(parse_icdar15_line("0,0,2e9,0,10,10,0,10,x"), ParseError);
  CHECK_THROWS_AS(parse_td500_line("0 0 0 0 1e300 4 0"), ParseError);
}

TEST_CASE("format then parse round trips exactly") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  for (int trial = 0; trial < 500; ++trial) {
    const Polygon q(oracle::random_convex(rng, u(rng), u(rng), 1.0));
    if (q.size() < 4) continue;
    const std::vector<Point> four(q.points().begin(), q.points().begin() + 4);
    if (!is_simple(four)) continue;
    const TextInstance quad{Polygon(four), trial % 3 == 0};
    CHECK(parse_icdar15_line(format_icdar15_line(quad)) == quad);
    const TextInstance poly{q, trial % 2 == 0};
    CHECK(parse_poly_csv_line(format_poly_csv_line(poly)) == poly);
  }
}

TEST_CASE("parsers only ever raise ParseError on arbitrary bytes") {
  std::mt19937_64 rng(1337);
  const std::string alphabet = "0123456789.,-+eE# \t\r\nabcXYZ";
  using Parser = TextInstance (*)(std::string_view, std::size_t);
  const Parser parsers[] = {parse_icdar15_line, parse_poly_csv_line, parse_td500_line, parse_ctw1500_offset_line};
  for (Parser parse : parsers) {
    int ok = 0, rejected = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      std::string line(rng() % 120, '\0');
      const bool raw = trial % 2 == 0;
      for (auto& ch : line) ch = raw ? static_cast<char>(rng() & 0xFF) : alphabet[rng() % alphabet.size()];
      try {
        parse(line, trial + 1);
        ++ok;
      } catch (const ParseError&) {
        ++rejected;
      }
    }
    CHECK(ok + rejected == 10000);
  }
}

TEST_CASE("read_image_size from real encoders") {
  TempDir tmp;
  const cv::Mat img(37, 53, CV_8UC3, cv::Scalar(10, 20, 30));
  for (const char* ext : {".png", ".jpg", ".bmp"}) {
    const fs::path p = tmp.path / (std::string("im") + ext);
    REQUIRE(cv::imwrite(p.string(), img));
    const auto size = read_image_size(p);
    REQUIRE(size.has_value());
    CHECK(size->height == 37);
    CHECK(size->width == 53);
  }
  write(tmp.path / "junk.png", "not an image");
  CHECK_FALSE(read_image_size(tmp.path / "junk.png").has_value());
  CHECK_FALSE(read_image_size(tmp.path / "missing.png").has_value());
}

TEST_CASE("load_dataset") {
  TempDir tmp;
  const fs::path gts = tmp.path / "gts";
  const fs::path images = tmp.path / "images";
  fs::create_directories(gts);
  fs::create_directories(images);

  LoadOptions opt;
  opt.gt_dir = gts;
  opt.image_dir = images;

  SUBCASE("empty directory") { CHECK(load_dataset(opt).images.empty()); }

  SUBCASE("three well-formed files") {
    for (int i = 0; i < 3; ++i) {
      write(gts / ("gt_img" + std::to_string(i) + ".txt"), "0,0,10,0,10,5,0,5,A\n20,20,30,20,30,30,20,30,###\n");
      cv::imwrite((images / ("img" + std::to_string(i) + ".png")).string(), cv::Mat(40 + i, 60, CV_8UC1));
    }
    const LoadResult r = load_dataset(opt);
    REQUIRE(r.images.size() == 3);
    CHECK(r.images[0].image_id == "img0");
    CHECK(r.images[2].height == 42);
    CHECK(r.images[2].width == 60);
    CHECK(r.images[1].instances.size() == 2);
    CHECK(r.images[1].instances[1].ignore);
    CHECK(r.warnings.empty());
  }

  SUBCASE("malformed line is skipped with a warning") {
    write(gts / "gt_a.txt", "0,0,10,0,10,5,0,5,A\n1,2,3\n");
    cv::imwrite((images / "a.png").string(), cv::Mat(20, 20, CV_8UC1));
    const LoadResult r = load_dataset(opt);
    REQUIRE(r.images.size() == 1);
    CHECK(r.images[0].instances.size() == 1);
    CHECK(r.warnings.size() == 1);
    opt.strict = true;
    CHECK_THROWS_AS(load_dataset(opt), ParseError);
  }

  SUBCASE("missing pair") {
    write(gts / "gt_a.txt", "0,0,10,0,10,5,0,5,A\n");
    const LoadResult r = load_dataset(opt);
    CHECK(r.images.empty());
    CHECK(r.warnings.size() == 1);
    opt.strict = true;
    CHECK_THROWS_AS(load_dataset(opt), InputError);
  }

  SUBCASE("sizes sidecar") {
    write(gts / "gt_a.txt", "0,0,10,0,10,5,0,5,A\n");
    write(gts / "sizes.json", R"({"a": [48, 64]})");
    opt.image_dir.reset();
    const LoadResult r = load_dataset(opt);
    REQUIRE(r.images.size() == 1);
    CHECK(r.images[0].height == 48);
    CHECK(r.images[0].width == 64);
  }

  SUBCASE("td500 pairing") {
    opt.format = AnnotationFormat::kTd500RotRect;
    opt.pairing = PairingRule::defaults_for(opt.format);
    write(gts / "IMG_1.gt", "0 0 10 10 40 10 0.1\n1 1 60 60 30 8 0\n");
    cv::imwrite((images / "IMG_1.jpg").string(), cv::Mat(100, 120, CV_8UC3));
    const LoadResult r = load_dataset(opt);
    REQUIRE(r.images.size() == 1);
    CHECK(r.images[0].image_id == "IMG_1");
    CHECK(r.images[0].instances[1].ignore);
  }

  SUBCASE("missing annotation directory") {
    opt.gt_dir = tmp.path / "nope";
    CHECK_THROWS_AS(load_dataset(opt), IoError);
  }
}
