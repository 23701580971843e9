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


#include "app.hpp"

#include <cstdlib>
#include <string_view>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "fepe/error.hpp"
#include "fepe/parallel.hpp"

namespace fepe::cli {

namespace {

void setup_logging() {
  static const auto logger = [] {
    auto l = spdlog::stderr_logger_mt("fepe");
    l->set_pattern("%l: %v");
    spdlog::set_default_logger(l);
    return l;
  }();
  const char* env = std::getenv("FEPE_LOG");
  const std::string_view level = env ? env : "warn";
  if (level == "error") {
    logger->set_level(spdlog::level::err);
  } else if (level == "warn") {
    logger->set_level(spdlog::level::warn);
  } else if (level == "info") {
    logger->set_level(spdlog::level::info);
  } else if (level == "debug") {
    logger->set_level(spdlog::level::debug);
  } else {
    logger->set_level(spdlog::level::warn);
    spdlog::warn("unknown FEPE_LOG level '{}', using warn", level);
  }
}

AnnotationFormat format_from(const std::string& name) {
  const auto f = parse_format_name(name);
  if (!f) throw UsageError("unknown annotation format: " + name);
  return *f;
}

TargetSize size_from(const std::string& text) {
  const auto x = text.find_first_of("xX");
  TargetSize size;
  try {
    std::size_t used_h = 0, used_w = 0;
    if (x == std::string::npos) throw std::invalid_argument(text);
    size.height = std::stoi(text.substr(0, x), &used_h);
    size.width = std::stoi(text.substr(x + 1), &used_w);
    if (used_h != x || used_w != text.size() - x - 1) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw UsageError("--size expects HxW, got '" + text + "'");
  }
  if (size.height <= 0 || size.width <= 0) throw UsageError("--size must be positive");
  return size;
}

template <typename Config>
void validate(const Config& cfg) {
  try {
    cfg.validate();
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Text detector label generation, reconstruction and evaluation", "fepe"};
  app.require_subcommand(1);
  const std::vector<std::string> formats{"icdar15", "polycsv", "td500"};

  // gen-labels
  GenLabelsArgs gen;
  std::string gen_format = "icdar15", gen_size;
  std::string gts, images, out_dir;
  int workers = static_cast<int>(default_workers());
  auto* g = app.add_subcommand("gen-labels", "Write label containers for an annotated dataset");
  g->add_option("--gts", gts, "Annotation directory")->required();
  g->add_option("--images", images, "Image directory (sizes come from headers)");
  g->add_option("--out", out_dir, "Output directory")->required();
  g->add_option("--ann-format", gen_format, "Annotation format")->check(CLI::IsMember(formats));
  g->add_option("--size", gen_size, "Label resolution HxW");
  g->add_option("--delta", gen.labels.delta, "Shrink ratio");
  g->add_option("--min-area", gen.labels.a_min, "Minimum kernel area (px^2)");
  g->add_option("--mu", gen.labels.mu, "Perception window side (odd)");
  g->add_option("--workers", workers, "Worker threads")->check(CLI::Range(1, 1 << 20));
  g->add_flag("--strict", gen.strict, "Fail on malformed or unpaired files");

  // reconstruct
  ReconstructArgs rec;
  std::string rec_in;
  auto* r = app.add_subcommand("reconstruct", "Turn kernel score maps into text polygons");
  r->add_option("input", rec_in, "Directory of score or label containers")->required();
  r->add_option("--out", out_dir, "Output directory")->required();
  r->add_option("--bin-thresh", rec.postproc.bin_thresh, "Binarization threshold");
  r->add_option("--expand-ratio", rec.postproc.expand_ratio, "Expansion ratio r'");
  r->add_option("--min-area", rec.postproc.min_kernel_area, "Minimum kernel area (px^2)");
  r->add_option("--score-thresh", rec.postproc.score_thresh, "Minimum mean kernel score");
  r->add_option("--workers", workers, "Worker threads")->check(CLI::Range(1, 1 << 20));

  // evaluate
  EvaluateArgs ev;
  std::string ev_dets, ev_format = "icdar15", ignore_rule = "iou";
  auto* e = app.add_subcommand("evaluate", "Precision, recall and F-measure of detections");
  e->add_option("dets", ev_dets, "Directory of detection JSON files")->required();
  e->add_option("--gts", gts, "Annotation directory")->required();
  e->add_option("--ann-format", ev_format, "Annotation format")->check(CLI::IsMember(formats));
  e->add_option("--iou", ev.eval.iou_thresh, "IoU threshold");
  e->add_option("--ignore-rule", ignore_rule, "Overlap test against ignore regions")
      ->check(CLI::IsMember({"iou", "area"}));
  e->add_flag("--strict", ev.strict, "Fail on malformed annotation files");

  // gradcheck
  GradcheckArgs gc;
  auto* c = app.add_subcommand("gradcheck", "Compare analytic loss gradients with finite differences");
  c->add_option("--loss", gc.loss, "Loss to check")->check(CLI::IsMember({"bce", "dice", "ratio", "all"}));
  c->add_option("--trials", gc.trials, "Random points per loss")->check(CLI::Range(1, 1 << 20));
  c->add_option("--seed", gc.seed, "Random seed");

  // viz
  VizArgs vz;
  std::string vz_in;
  auto* v = app.add_subcommand("viz", "Render label containers or detections as PNG");
  v->add_option("input", vz_in, "Container directory or detections JSON")->required();
  v->add_option("--images", images, "Image file or directory");
  v->add_option("--out", out_dir, "Output directory")->required();

  // bench
  BenchOptions bo;
  int bench_workers = 0;
  auto* b = app.add_subcommand("bench", "Time naive and integral-image surrounding maps");
  b->add_option("--sizes", bo.sizes, "Square map sizes")->delimiter(',');
  b->add_option("--mus", bo.mus, "Window sides")->delimiter(',');
  b->add_option("--repetitions", bo.repetitions, "Timed runs per case (>= 3)");
  b->add_option("--seed", bo.seed, "Random seed");
  b->add_option("--workers", bench_workers, "Also time a parallel batch on N threads");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  }

  setup_logging();
  try {
    if (g->parsed()) {
      gen.gts = gts;
      if (!images.empty()) gen.images = images;
      gen.out = out_dir;
      gen.format = format_from(gen_format);
      if (!gen_size.empty()) gen.labels.target_size = size_from(gen_size);
      gen.workers = static_cast<unsigned>(workers);
      validate(gen.labels);
      return gen_labels(gen, out);
    }
    if (r->parsed()) {
      rec.input = rec_in;
      rec.out = out_dir;
      rec.workers = static_cast<unsigned>(workers);
      validate(rec.postproc);
      return reconstruct(rec, out);
    }
    if (e->parsed()) {
      ev.dets = ev_dets;
      ev.gts = gts;
      ev.format = format_from(ev_format);
      ev.eval.ignore_rule = ignore_rule == "area" ? IgnoreRule::kDetectionArea : IgnoreRule::kIou;
      validate(ev.eval);
      return evaluate(ev, out);
    }
    if (c->parsed()) return gradcheck(gc, out);
    if (v->parsed()) {
      vz.input = vz_in;
      if (!images.empty()) vz.images = images;
      vz.out = out_dir;
      return viz(vz, out);
    }
    if (b->parsed()) {
      if (bo.repetitions < 3) throw UsageError("--repetitions must be at least 3");
      bo.parallel_workers = static_cast<unsigned>(std::max(0, bench_workers));
      return bench(bo, out);
    }
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kDataFailure;
  }
  return kUsage;
}

}  // namespace fepe::cli
