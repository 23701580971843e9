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
#include <cstdint>
#include <fstream>

#include "fepe/ingest.hpp"

namespace fepe {

namespace {

std::uint32_t be16(const unsigned char* p) { return (p[0] << 8) | p[1]; }
std::uint32_t be32(const unsigned char* p) {
  return (std::uint32_t{p[0]} << 24) | (p[1] << 16) | (p[2] << 8) | p[3];
}
std::int32_t le32(const unsigned char* p) {
  return static_cast<std::int32_t>(std::uint32_t{p[0]} | (p[1] << 8) | (p[2] << 16) |
                                   (std::uint32_t{p[3]} << 24));
}

bool is_sof(unsigned char marker) {
  return marker >= 0xC0 && marker <= 0xCF && marker != 0xC4 && marker != 0xC8 && marker != 0xCC;
}

std::optional<ImageSize> jpeg_size(std::ifstream& in) {
  unsigned char buf[8];
  in.seekg(2);
  while (in.read(reinterpret_cast<char*>(buf), 2)) {
    if (buf[0] != 0xFF) return std::nullopt;
    unsigned char marker = buf[1];
    while (marker == 0xFF) {
      if (!in.read(reinterpret_cast<char*>(&marker), 1)) return std::nullopt;
    }
    if (marker == 0xD8 || (marker >= 0xD0 && marker <= 0xD7) || marker == 0x01) continue;
    if (!in.read(reinterpret_cast<char*>(buf), 2)) return std::nullopt;
    const std::uint32_t length = be16(buf);
    if (length < 2) return std::nullopt;
    if (is_sof(marker)) {
      if (!in.read(reinterpret_cast<char*>(buf), 5)) return std::nullopt;
      const int height = static_cast<int>(be16(buf + 1));
      const int width = static_cast<int>(be16(buf + 3));
      if (height <= 0 || width <= 0) return std::nullopt;
      return ImageSize{height, width};
    }
    in.seekg(length - 2, std::ios::cur);
  }
  return std::nullopt;
}

}  // namespace

std::optional<ImageSize> read_image_size(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::array<unsigned char, 26> head{};
  in.read(reinterpret_cast<char*>(head.data()), head.size());
  const auto got = in.gcount();
  in.clear();

  static constexpr unsigned char kPng[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (got >= 24 && std::equal(kPng, kPng + 8, head.begin())) {
    const auto width = be32(head.data() + 16);
    const auto height = be32(head.data() + 20);
    if (width == 0 || height == 0 || width > INT32_MAX || height > INT32_MAX) return std::nullopt;
    return ImageSize{static_cast<int>(height), static_cast<int>(width)};
  }
  if (got >= 2 && head[0] == 0xFF && head[1] == 0xD8) return jpeg_size(in);
  if (got >= 26 && head[0] == 'B' && head[1] == 'M') {
    const int width = le32(head.data() + 18);
    const int height = le32(head.data() + 22);
    if (width <= 0 || height == 0 || height == INT32_MIN) return std::nullopt;
    return ImageSize{height < 0 ? -height : height, width};
  }
  return std::nullopt;
}

}  // namespace fepe
