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


#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <vector>

#include <spdlog/spdlog.h>

#include "fepe/error.hpp"
#include "fepe/io.hpp"
#include "fepe/parallel.hpp"

namespace fepe::cli {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void require_dir(const fs::path& dir, const char* what) {
  if (!fs::is_directory(dir)) throw UsageError(std::string(what) + " not found: " + dir.string());
}

// Container directories under `root` (or `root` itself), sorted.
std::vector<fs::path> container_dirs(const fs::path& root) {
  if (fs::exists(root / "meta.json")) return {root};
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "meta.json")) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

}  // namespace

int gen_labels(const GenLabelsArgs& args, std::ostream& out) {
  require_dir(args.gts, "annotation directory");
  if (args.images) require_dir(*args.images, "image directory");
  const auto start = Clock::now();

  LoadOptions load;
  load.gt_dir = args.gts;
  load.image_dir = args.images;
  load.format = args.format;
  load.pairing = PairingRule::defaults_for(args.format);
  load.strict = args.strict;
  const LoadResult data = load_dataset(load);
  for (const auto& w : data.warnings) spdlog::warn("{}", w);

  fs::create_directories(args.out);
  std::size_t instances = 0;
  for (const auto& img : data.images) instances += img.instances.size();

  parallel_for(data.images.size(), args.workers, [&](std::size_t i) {
    const AnnotatedImage& img = data.images[i];
    const LabelSet labels = gen_labelset(img, args.labels);
    ContainerMeta meta{img.image_id, labels.text_map.height(), labels.text_map.width(),
                       args.labels.mu, args.labels.delta, args.labels.a_min, {}, {}};
    if (args.labels.target_size) {
      meta.source_height = img.height;
      meta.source_width = img.width;
    }
    write_label_container(args.out / img.image_id, labels, meta);
    spdlog::debug("{}: {} instances, {} kernels", img.image_id, img.instances.size(),
                  labels.kernel_polygons.size());
  });

  out << "gen-labels: " << data.images.size() << " containers, " << instances << " instances, "
      << data.warnings.size() << " warnings, " << static_cast<long>(elapsed_ms(start)) << " ms\n";
  return kOk;
}

int reconstruct(const ReconstructArgs& args, std::ostream& out) {
  require_dir(args.input, "container directory");
  const auto start = Clock::now();
  const std::vector<fs::path> dirs = container_dirs(args.input);
  fs::create_directories(args.out);

  std::mutex mutex;
  std::vector<std::string> failures;
  std::size_t detections = 0;
  parallel_for(dirs.size(), args.workers, [&](std::size_t i) {
    try {
      const LabelContainer container = read_container(dirs[i]);
      const ContainerMeta& meta = container.meta;
      DetectionSet set = fepe::reconstruct(container_scores(container), args.postproc, meta.image_id);
      if (meta.source_height && meta.source_width) {
        set = rescale(set, static_cast<double>(*meta.source_width) / meta.width,
                      static_cast<double>(*meta.source_height) / meta.height);
      }
      write_text_file(args.out / (meta.image_id + ".json"), to_json(set).dump(2) + "\n");
      std::lock_guard lock(mutex);
      detections += set.detections.size();
    } catch (const Error& e) {
      std::lock_guard lock(mutex);
      failures.push_back(e.what());
    }
  });

  std::sort(failures.begin(), failures.end());
  for (const auto& f : failures) spdlog::error("{}", f);
  out << "reconstruct: " << dirs.size() - failures.size() << " maps, " << detections << " detections, "
      << failures.size() << " failures, " << static_cast<long>(elapsed_ms(start)) << " ms\n";
  return failures.empty() ? kOk : kDataFailure;
}

int evaluate(const EvaluateArgs& args, std::ostream& out) {
  require_dir(args.dets, "detection directory");
  require_dir(args.gts, "annotation directory");

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(args.dets)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<DetectionSet> dets;
  for (const auto& file : files) {
    try {
      dets.push_back(detection_set_from_json(nlohmann::json::parse(read_text_file(file))));
    } catch (const nlohmann::json::exception& e) {
      throw IoError(file.string() + ": " + e.what());
    } catch (const IoError& e) {
      throw IoError(file.string() + ": " + e.what());
    }
  }

  LoadOptions load;
  load.gt_dir = args.gts;
  load.format = args.format;
  load.pairing = PairingRule::defaults_for(args.format);
  load.strict = args.strict;
  load.require_dimensions = false;
  const LoadResult data = load_dataset(load);
  for (const auto& w : data.warnings) spdlog::warn("{}", w);

  const EvalReport report = fepe::evaluate(dets, data.images, args.eval);
  out << to_json(report).dump(2) << "\n";
  return kOk;
}

int bench(const BenchOptions& options, std::ostream& out) {
  out << to_json(run_bench(options)).dump(2) << "\n";
  return kOk;
}

}  // namespace fepe::cli
