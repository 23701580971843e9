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
#include <ostream>
#include <string>

#include "fepe/error.hpp"
#include "fepe/evalkit.hpp"
#include "fepe/ingest.hpp"
#include "fepe/labelgen.hpp"
#include "fepe/perf.hpp"
#include "fepe/postproc.hpp"

namespace fepe::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kDataFailure = 1;
inline constexpr int kUsage = 2;

// Thrown for bad flags or paths; maps to kUsage.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct GenLabelsArgs {
  std::filesystem::path gts;
  std::optional<std::filesystem::path> images;
  std::filesystem::path out;
  AnnotationFormat format = AnnotationFormat::kIcdar15Quad;
  LabelGenConfig labels;
  unsigned workers = 1;
  bool strict = false;
};

struct ReconstructArgs {
  std::filesystem::path input;  // directory of containers
  std::filesystem::path out;
  PostprocConfig postproc;
  unsigned workers = 1;
};

struct EvaluateArgs {
  std::filesystem::path dets;  // directory of <id>.json detection sets
  std::filesystem::path gts;
  AnnotationFormat format = AnnotationFormat::kIcdar15Quad;
  EvalConfig eval;
  bool strict = false;
};

struct GradcheckArgs {
  std::string loss = "all";
  int trials = 1000;
  std::uint64_t seed = 42;
};

struct VizArgs {
  std::filesystem::path input;  // container directory or detections JSON
  std::optional<std::filesystem::path> images;
  std::filesystem::path out;
};

int gen_labels(const GenLabelsArgs& args, std::ostream& out);
int reconstruct(const ReconstructArgs& args, std::ostream& out);
int evaluate(const EvaluateArgs& args, std::ostream& out);
int gradcheck(const GradcheckArgs& args, std::ostream& out);
int viz(const VizArgs& args, std::ostream& out);
int bench(const BenchOptions& options, std::ostream& out);

}  // namespace fepe::cli
