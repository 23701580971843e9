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

#include "fepe/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace fepe {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\v\f";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

std::string_view strip_bom(std::string_view s) {
  if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") s.remove_prefix(3);
  return s;
}

std::optional<double> to_number(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

double require_number(std::string_view field, std::size_t index, std::size_t line_no) {
  const auto value = to_number(field);
  if (!value) {
    throw ParseError("field " + std::to_string(index + 1) + " is not a finite number", line_no);
  }
  return *value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

Polygon make_polygon(std::vector<Point> pts, std::size_t line_no) {
  try {
    return Polygon(std::move(pts));
  } catch (const InvalidPolygon& e) {
    throw ParseError(e.what(), line_no);
  }
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string format_points(const Polygon& poly) {
  std::string out;
  for (const Point& p : poly.points()) {
    if (!out.empty()) out += ',';
    out += format_number(p.x);
    out += ',';
    out += format_number(p.y);
  }
  return out;
}

}  // namespace

std::optional<AnnotationFormat> parse_format_name(std::string_view name) {
  if (name == "icdar15") return AnnotationFormat::kIcdar15Quad;
  if (name == "polycsv") return AnnotationFormat::kPolyCsv;
  if (name == "td500") return AnnotationFormat::kTd500RotRect;
  return std::nullopt;
}

std::string_view format_name(AnnotationFormat format) {
  switch (format) {
    case AnnotationFormat::kIcdar15Quad: return "icdar15";
    case AnnotationFormat::kPolyCsv: return "polycsv";
    case AnnotationFormat::kTd500RotRect: return "td500";
  }
  return "unknown";
}

TextInstance parse_icdar15_line(std::string_view line, std::size_t line_no) {
  line = trim(strip_bom(line));
  std::vector<Point> pts;
  std::size_t start = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos && i < 7) {
      throw ParseError("expected 8 coordinates, found " + std::to_string(i + 1) + " fields", line_no);
    }
    const auto field = line.substr(start, pos == std::string_view::npos ? line.npos : pos - start);
    const double v = require_number(field, i, line_no);
    if (i % 2 == 0) {
      pts.push_back({v, 0.0});
    } else {
      pts.back().y = v;
    }
    start = pos == std::string_view::npos ? line.size() : pos + 1;
  }
  const std::string_view transcription = trim(line.substr(std::min(start, line.size())));
  return {make_polygon(std::move(pts), line_no), transcription == "###"};
}

TextInstance parse_poly_csv_line(std::string_view line, std::size_t line_no) {
  line = trim(strip_bom(line));
  const auto fields = split(line, ',');
  std::vector<double> coords;
  std::size_t i = 0;
  for (; i < fields.size(); ++i) {
    const auto v = to_number(fields[i]);
    if (!v) break;
    coords.push_back(*v);
  }
  std::string transcription;
  for (std::size_t k = i; k < fields.size(); ++k) {
    if (k > i) transcription += ',';
    transcription += fields[k];
  }
  const std::string_view label = trim(transcription);
  if (coords.size() % 2 != 0) {
    throw ParseError("odd number of coordinates (" + std::to_string(coords.size()) + ")", line_no);
  }
  if (coords.size() < 6) {
    throw ParseError("polygon needs at least 3 points, got " + std::to_string(coords.size() / 2),
                     line_no);
  }
  std::vector<Point> pts;
  pts.reserve(coords.size() / 2);
  for (std::size_t k = 0; k < coords.size(); k += 2) pts.push_back({coords[k], coords[k + 1]});
  return {make_polygon(std::move(pts), line_no), label == "###" || label == "#"};
}

TextInstance parse_ctw1500_offset_line(std::string_view line, std::size_t line_no) {
  line = trim(strip_bom(line));
  const auto fields = split(line, ',');
  if (fields.size() < 32) {
    throw ParseError("expected 32 values (box + 14 offsets), got " + std::to_string(fields.size()),
                     line_no);
  }
  const double xmin = require_number(fields[0], 0, line_no);
  const double ymin = require_number(fields[1], 1, line_no);
  std::vector<Point> pts;
  for (std::size_t k = 4; k < 32; k += 2) {
    pts.push_back({xmin + require_number(fields[k], k, line_no),
                   ymin + require_number(fields[k + 1], k + 1, line_no)});
  }
  std::string transcription;
  for (std::size_t k = 32; k < fields.size(); ++k) {
    if (k > 32) transcription += ',';
    transcription += fields[k];
  }
  const std::string_view label = trim(transcription);
  return {make_polygon(std::move(pts), line_no), label == "###" || label == "#"};
}

TextInstance parse_td500_line(std::string_view line, std::size_t line_no) {
  line = trim(strip_bom(line));
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    if (values.size() == 7) throw ParseError("expected 7 fields, found more", line_no);
    values.push_back(require_number(line.substr(pos, end - pos), values.size(), line_no));
    pos = end;
  }
  if (values.size() != 7) {
    throw ParseError("expected 7 fields, found " + std::to_string(values.size()), line_no);
  }
  const double x = values[2], y = values[3], w = values[4], h = values[5], angle = values[6];
  const double cx = x + 0.5 * w;
  const double cy = y + 0.5 * h;
  const double cs = std::cos(angle);
  const double sn = std::sin(angle);
  std::vector<Point> pts;
  for (const auto& [px, py] : {std::pair{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}}) {
    const double dx = px - cx;
    const double dy = py - cy;
    pts.push_back({cx + dx * cs - dy * sn, cy + dx * sn + dy * cs});
  }
  return {make_polygon(std::move(pts), line_no), values[1] == 1.0};
}

TextInstance parse_line(AnnotationFormat format, std::string_view line, std::size_t line_no) {
  switch (format) {
    case AnnotationFormat::kIcdar15Quad: return parse_icdar15_line(line, line_no);
    case AnnotationFormat::kPolyCsv: return parse_poly_csv_line(line, line_no);
    case AnnotationFormat::kTd500RotRect: return parse_td500_line(line, line_no);
  }
  throw ParseError("unknown annotation format", line_no);
}

std::string format_icdar15_line(const TextInstance& inst, std::string_view transcription) {
  if (inst.polygon.size() != 4) throw InputError("ICDAR2015 lines hold exactly 4 points");
  return format_points(inst.polygon) + "," + std::string(inst.ignore ? "###" : transcription);
}

std::string format_poly_csv_line(const TextInstance& inst, std::string_view transcription) {
  return format_points(inst.polygon) + "," + std::string(inst.ignore ? "###" : transcription);
}

PairingRule PairingRule::defaults_for(AnnotationFormat format) {
  PairingRule rule;
  switch (format) {
    case AnnotationFormat::kIcdar15Quad:
      break;
    case AnnotationFormat::kPolyCsv:
      rule.gt_prefix = "";
      break;
    case AnnotationFormat::kTd500RotRect:
      rule.gt_prefix = "";
      rule.gt_suffix = ".gt";
      break;
  }
  return rule;
}

std::vector<TextInstance> parse_annotation_text(std::string_view text, AnnotationFormat format,
                                                bool strict, std::vector<std::string>& warnings,
                                                bool ctw_offsets) {
  std::vector<TextInstance> out;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (trim(strip_bom(line)).empty()) continue;
    try {
      if (format == AnnotationFormat::kPolyCsv && ctw_offsets) {
        out.push_back(parse_ctw1500_offset_line(line, line_no));
      } else {
        out.push_back(parse_line(format, line, line_no));
      }
    } catch (const ParseError& e) {
      if (strict) throw;
      warnings.push_back(e.what());
    }
  }
  return out;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path.string());
  return ss.str();
}

std::map<std::string, ImageSize> read_sidecar(const fs::path& dir) {
  std::map<std::string, ImageSize> sizes;
  const fs::path path = dir / "sizes.json";
  if (!fs::is_regular_file(path)) return sizes;
  try {
    const auto doc = nlohmann::json::parse(read_file(path));
    for (const auto& [id, hw] : doc.items()) {
      sizes[id] = ImageSize{hw.at(0).get<int>(), hw.at(1).get<int>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed " + path.string() + ": " + e.what());
  }
  return sizes;
}

}  // namespace

LoadResult load_dataset(const LoadOptions& options) {
  if (!fs::is_directory(options.gt_dir)) {
    throw IoError("annotation directory not found: " + options.gt_dir.string());
  }
  const PairingRule& rule = options.pairing;

  std::vector<std::pair<std::string, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(options.gt_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() <= rule.gt_prefix.size() + rule.gt_suffix.size()) continue;
    if (!name.starts_with(rule.gt_prefix) || !name.ends_with(rule.gt_suffix)) continue;
    files.emplace_back(name, entry.path());
  }
  std::sort(files.begin(), files.end());

  std::map<std::string, ImageSize> sidecar = read_sidecar(options.gt_dir);
  if (options.image_dir) {
    for (auto& [id, size] : read_sidecar(*options.image_dir)) sidecar[id] = size;
  }

  LoadResult result;
  for (const auto& [name, path] : files) {
    const std::string id =
        name.substr(rule.gt_prefix.size(), name.size() - rule.gt_prefix.size() - rule.gt_suffix.size());

    std::optional<ImageSize> size;
    if (options.image_dir) {
      for (const std::string& ext : rule.image_extensions) {
        const fs::path image = *options.image_dir / (id + ext);
        if (fs::is_regular_file(image)) {
          size = read_image_size(image);
          if (!size) result.warnings.push_back("unreadable image header: " + image.string());
          break;
        }
      }
    }
    if (!size) {
      if (auto it = sidecar.find(id); it != sidecar.end()) size = it->second;
    }
    if (!size && options.require_dimensions) {
      const std::string msg = "no image or size entry paired with " + path.string();
      if (options.strict) throw InputError(msg);
      result.warnings.push_back(msg + ", skipped");
      continue;
    }

    std::vector<std::string> line_warnings;
    std::vector<TextInstance> instances;
    try {
      instances = parse_annotation_text(read_file(path), options.format, options.strict,
                                        line_warnings, options.ctw_offsets);
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ": " + e.what(), 0);
    }
    for (const auto& w : line_warnings) result.warnings.push_back(path.string() + ": " + w);

    AnnotatedImage img;
    img.image_id = id;
    img.height = size ? size->height : 0;
    img.width = size ? size->width : 0;
    img.instances = std::move(instances);
    result.images.push_back(std::move(img));
  }
  return result;
}

}  // namespace fepe
