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


#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "commands.hpp"
#include "fepe/losses.hpp"

namespace fepe::cli {

namespace {

constexpr double kStep = 1e-4;
constexpr double kTolerance = 1e-4;

struct Trial {
  FloatRaster pred;
  std::size_t index = 0;
  std::function<LossOutput(const FloatRaster&)> loss;
};

using Sampler = std::function<Trial(std::mt19937_64&)>;

BinaryMap random_mask(int h, int w, int ch, double p, std::mt19937_64& rng) {
  BinaryMap m(h, w, ch);
  std::bernoulli_distribution on(p);
  for (auto& v : m.data()) v = on(rng) ? 1 : 0;
  return m;
}

// Probabilities kept away from the clamp so the loss is smooth around them.
Trial probability_trial(std::mt19937_64& rng, bool dice) {
  std::uniform_int_distribution<int> side(2, 6);
  std::uniform_real_distribution<double> prob(0.05, 0.95);
  const int h = side(rng), w = side(rng);
  Trial t{FloatRaster(h, w), 0, {}};
  for (auto& v : t.pred.data()) v = prob(rng);
  t.index = rng() % t.pred.size();
  BinaryMap gt = random_mask(h, w, 1, 0.4, rng);
  BinaryMap valid = random_mask(h, w, 1, 0.9, rng);
  if (dice) {
    t.loss = [gt, valid](const FloatRaster& x) { return dice_loss(x, gt, valid); };
  } else {
    t.loss = [gt, valid](const FloatRaster& x) { return bce_ohem(x, gt, valid); };
  }
  return t;
}

// Positive regressions with x kept clear of y, where |ln x - ln y| kinks.
Trial ratio_trial(std::mt19937_64& rng, int channels) {
  std::uniform_int_distribution<int> side(2, 6);
  std::uniform_real_distribution<double> value(0.1, 10.0);
  const int h = side(rng), w = side(rng);
  FloatRaster gt(h, w, channels);
  Trial t{FloatRaster(h, w, channels), 0, {}};
  for (std::size_t i = 0; i < gt.size(); ++i) {
    gt[i] = rng() % 4 == 0 ? 0.0 : value(rng);
    do {
      t.pred[i] = value(rng);
    } while (std::abs(std::log(t.pred[i]) - std::log(std::max(gt[i], kLossEpsilon))) < 1e-2);
  }
  t.index = rng() % t.pred.size();
  const BinaryMap mask = positive_mask(gt);
  t.loss = [gt, mask](const FloatRaster& x) { return ratio_loss(x, gt, mask); };
  return t;
}

double max_relative_error(const Sampler& sample, int trials, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    Trial t = sample(rng);
    const double analytic = t.loss(t.pred).gradient[t.index];
    const double base = t.pred[t.index];
    t.pred[t.index] = base + kStep;
    const double up = t.loss(t.pred).value;
    t.pred[t.index] = base - kStep;
    const double down = t.loss(t.pred).value;
    const double numeric = (up - down) / (2.0 * kStep);
    const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-12});
    worst = std::max(worst, std::abs(analytic - numeric) / scale);
  }
  return worst;
}

}  // namespace

int gradcheck(const GradcheckArgs& args, std::ostream& out) {
  if (args.trials <= 0) throw UsageError("--trials must be positive");
  std::vector<std::pair<std::string, Sampler>> rows;
  const bool all = args.loss == "all";
  if (all || args.loss == "bce") rows.emplace_back("bce", [](auto& rng) { return probability_trial(rng, false); });
  if (all || args.loss == "dice") rows.emplace_back("dice", [](auto& rng) { return probability_trial(rng, true); });
  if (all || args.loss == "ratio") {
    rows.emplace_back("ratio-scale", [](auto& rng) { return ratio_trial(rng, 1); });
    rows.emplace_back("ratio-surrounding", [](auto& rng) { return ratio_trial(rng, 4); });
  }
  if (rows.empty()) throw UsageError("unknown loss: " + args.loss);

  bool ok = true;
  char line[128];
  std::snprintf(line, sizeof line, "%-18s %12s %8s  %s\n", "loss", "max_rel_err", "trials", "status");
  out << line;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::mt19937_64 rng(args.seed + r);
    const double err = max_relative_error(rows[r].second, args.trials, rng);
    const bool pass = err < kTolerance;
    ok = ok && pass;
    std::snprintf(line, sizeof line, "%-18s %12.3e %8d  %s\n", rows[r].first.c_str(), err, args.trials,
                  pass ? "ok" : "FAIL");
    out << line;
  }
  return ok ? kOk : kDataFailure;
}

}  // namespace fepe::cli
