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
#include <string_view>
#include <vector>

#include "fepe/labelgen.hpp"

namespace fepe {

enum class AnnotationFormat {
  kIcdar15Quad,   // x1,y1,...,x4,y4,transcription
  kPolyCsv,       // x1,y1,...,xN,yN[,transcription]
  kTd500RotRect,  // index difficulty x y w h angle
};

std::optional<AnnotationFormat> parse_format_name(std::string_view name);
std::string_view format_name(AnnotationFormat format);

// The `line_no` argument only labels ParseError messages.
TextInstance parse_icdar15_line(std::string_view line, std::size_t line_no = 0);
TextInstance parse_poly_csv_line(std::string_view line, std::size_t line_no = 0);
TextInstance parse_td500_line(std::string_view line, std::size_t line_no = 0);

// Original CTW1500 layout: xmin,ymin,xmax,ymax followed by 14 point
// offsets relative to (xmin, ymin).
TextInstance parse_ctw1500_offset_line(std::string_view line, std::size_t line_no = 0);

TextInstance parse_line(AnnotationFormat format, std::string_view line, std::size_t line_no = 0);

// Shortest round-trip number formatting, so parse(format(x)) == x.
std::string format_icdar15_line(const TextInstance& inst, std::string_view transcription = "text");
std::string format_poly_csv_line(const TextInstance& inst, std::string_view transcription = "text");

// gt_<id>.txt pairs with <id>.<ext> in the image directory.
struct PairingRule {
  std::string gt_prefix = "gt_";
  std::string gt_suffix = ".txt";
  std::vector<std::string> image_extensions{".jpg", ".jpeg", ".png", ".JPG", ".JPEG", ".PNG", ".bmp"};

  static PairingRule defaults_for(AnnotationFormat format);
};

struct LoadOptions {
  std::filesystem::path gt_dir;
  std::optional<std::filesystem::path> image_dir;
  AnnotationFormat format = AnnotationFormat::kIcdar15Quad;
  PairingRule pairing;
  bool strict = false;
  // Polygon CSV lines use the original CTW1500 offset encoding.
  bool ctw_offsets = false;
  // When false, images without a size source load with height = width = 0
  // (enough for evaluation, which needs only geometry).
  bool require_dimensions = true;
};

struct LoadResult {
  std::vector<AnnotatedImage> images;  // sorted by annotation file name
  std::vector<std::string> warnings;
};

// Image sizes come from the paired image header, else from a sidecar
// `sizes.json` ({"<id>": [height, width]}) in the image or annotation
// directory. Malformed lines and unpaired files are skipped with a warning
// unless `strict` is set, in which case they raise ParseError / InputError.
LoadResult load_dataset(const LoadOptions& options);

std::vector<TextInstance> parse_annotation_text(std::string_view text, AnnotationFormat format,
                                                bool strict, std::vector<std::string>& warnings,
                                                bool ctw_offsets = false);

struct ImageSize {
  int height = 0;
  int width = 0;
};

// Reads dimensions from a PNG, JPEG or BMP header without decoding pixels.
std::optional<ImageSize> read_image_size(const std::filesystem::path& path);

}  // namespace fepe
