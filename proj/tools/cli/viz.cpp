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


#include <array>
#include <cmath>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "fepe/error.hpp"
#include "fepe/io.hpp"

namespace fepe::cli {

namespace fs = std::filesystem;

namespace {

const std::array<std::string, 7> kImageExtensions{".jpg", ".jpeg", ".png", ".bmp", ".JPG", ".JPEG", ".PNG"};

// `images` may name the image itself or a directory holding <id>.<ext>.
fs::path find_image(const fs::path& images, const std::string& id) {
  if (fs::is_regular_file(images)) return images;
  for (const auto& ext : kImageExtensions) {
    const fs::path p = images / (id + ext);
    if (fs::is_regular_file(p)) return p;
  }
  throw IoError("no image for " + id + " in " + images.string());
}

cv::Mat load_image(const fs::path& path) {
  cv::Mat img = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (img.empty()) throw IoError("cannot decode image " + path.string());
  return img;
}

void save(const fs::path& path, const cv::Mat& img) {
  if (!cv::imwrite(path.string(), img)) throw IoError("cannot write " + path.string());
}

cv::Mat mask_of(const BinaryMap& m) {
  cv::Mat out(m.height(), m.width(), CV_8UC1);
  for (int r = 0; r < m.height(); ++r)
    for (int c = 0; c < m.width(); ++c) out.at<std::uint8_t>(r, c) = m(r, c) ? 255 : 0;
  return out;
}

cv::Mat tint(const cv::Mat& base, const BinaryMap& m, const cv::Scalar& color) {
  cv::Mat layer(base.size(), base.type(), color);
  cv::Mat blended;
  cv::addWeighted(base, 0.45, layer, 0.55, 0.0, blended);
  cv::Mat out = base.clone();
  blended.copyTo(out, mask_of(m));
  return out;
}

// Log-scaled heat ramp; background stays black.
cv::Mat heat(const Raster<float>& scale) {
  float top = 0.0f;
  for (float v : scale.data()) top = std::max(top, v);
  cv::Mat gray(scale.height(), scale.width(), CV_8UC1, cv::Scalar(0));
  if (top > 0.0f) {
    const double norm = std::log1p(top);
    for (int r = 0; r < scale.height(); ++r)
      for (int c = 0; c < scale.width(); ++c)
        gray.at<std::uint8_t>(r, c) = static_cast<std::uint8_t>(std::lround(255.0 * std::log1p(scale(r, c)) / norm));
  }
  cv::Mat colored;
  cv::applyColorMap(gray, colored, cv::COLORMAP_JET);
  colored.setTo(cv::Scalar(0, 0, 0), gray == 0);
  return colored;
}

// Left/right on top, up/down below, each scaled by mu^2.
cv::Mat tiles(const Raster<std::uint16_t>& sur, int mu) {
  const int h = sur.height(), w = sur.width();
  const double full = std::max(1, mu * mu);
  cv::Mat grid(2 * h, 2 * w, CV_8UC1, cv::Scalar(0));
  for (int n = 0; n < 4; ++n) {
    const int oy = (n / 2) * h, ox = (n % 2) * w;
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c)
        grid.at<std::uint8_t>(oy + r, ox + c) =
            static_cast<std::uint8_t>(std::lround(255.0 * std::min(1.0, sur(r, c, n) / full)));
  }
  cv::Mat colored;
  cv::applyColorMap(grid, colored, cv::COLORMAP_VIRIDIS);
  return colored;
}

int viz_container(const VizArgs& args, std::ostream& out) {
  const LabelContainer c = read_container(args.input);
  const ContainerMeta& meta = c.meta;
  cv::Mat base(meta.height, meta.width, CV_8UC3, cv::Scalar(0, 0, 0));
  if (args.images) {
    cv::resize(load_image(find_image(*args.images, meta.image_id)), base, base.size(), 0, 0, cv::INTER_AREA);
  }
  const fs::path stem = args.out / meta.image_id;
  int written = 0;
  if (c.text_map) {
    save(stem.string() + "_text.png", tint(base, *c.text_map, cv::Scalar(60, 200, 60)));
    ++written;
  }
  if (c.kernel_map) {
    save(stem.string() + "_kernel.png", tint(base, *c.kernel_map, cv::Scalar(40, 40, 230)));
    ++written;
  }
  if (c.scale_map) {
    save(stem.string() + "_scale.png", heat(*c.scale_map));
    ++written;
  }
  if (c.surrounding) {
    save(stem.string() + "_surrounding.png", tiles(*c.surrounding, meta.mu));
    ++written;
  } else {
    spdlog::warn("{}: no surrounding array, tile skipped", args.input.string());
  }
  out << "viz: " << written << " images\n";
  return kOk;
}

int viz_detections(const VizArgs& args, std::ostream& out) {
  const DetectionSet set = detection_set_from_json(nlohmann::json::parse(read_text_file(args.input)));
  if (!args.images) throw IoError("detections need --images to draw on");
  cv::Mat img = load_image(find_image(*args.images, set.image_id));
  for (const auto& det : set.detections) {
    std::vector<cv::Point> pts;
    for (const auto& p : det.polygon.points()) pts.emplace_back(static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y)));
    cv::polylines(img, pts, true, cv::Scalar(0, 255, 0), 2, cv::LINE_AA);
  }
  save(args.out / (set.image_id + "_detections.png"), img);
  out << "viz: 1 image, " << set.detections.size() << " detections\n";
  return kOk;
}

}  // namespace

int viz(const VizArgs& args, std::ostream& out) {
  if (!fs::exists(args.input)) throw UsageError("input not found: " + args.input.string());
  fs::create_directories(args.out);
  if (fs::is_directory(args.input)) return viz_container(args, out);
  try {
    return viz_detections(args, out);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(args.input.string() + ": " + e.what());
  }
}

}  // namespace fepe::cli
