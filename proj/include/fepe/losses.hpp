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

#include <array>

#include "fepe/raster.hpp"

namespace fepe {

using FloatRaster = Raster<double>;

struct LossOutput {
  double value = 0.0;
  FloatRaster gradient;  // d value / d prediction, same shape as the prediction
};

struct LossWeights {
  double kernel = 6.0;
  double text = 3.0;
  double surrounding = 1.0;
  double scale = 0.5;
};

struct TotalLoss {
  double value = 0.0;
  // Weighted terms in kernel, text, surrounding, scale order.
  std::array<double, 4> terms{};
};

inline constexpr double kLossEpsilon = 1e-6;

// Binary cross-entropy with online hard negative mining. All valid
// positives are kept together with the floor(neg_ratio * #pos) valid
// negatives of highest loss (ties resolved by lower index). Predictions are
// clamped to [eps, 1 - eps]. With no valid positive the mean over every
// valid pixel is returned.
LossOutput bce_ohem(const FloatRaster& pred, const BinaryMap& gt, const BinaryMap& valid,
                    double neg_ratio = 3.0);

// 1 - 2 * sum(y * x) / (sum(y) + sum(x) + eps) over valid pixels.
LossOutput dice_loss(const FloatRaster& pred, const BinaryMap& gt, const BinaryMap& valid,
                     double eps = kLossEpsilon);

// Mean of |ln(max(x, eps)) - ln(max(y, eps))| over the supervised elements, which
// equals log(max / min) on positive inputs. Zero when nothing is supervised.
LossOutput ratio_loss(const FloatRaster& pred, const FloatRaster& gt, const BinaryMap& supervise,
                      double eps = kLossEpsilon);

// Elements with a positive target: the supervised set for scale and
// surrounding regression.
BinaryMap positive_mask(const FloatRaster& gt);

TotalLoss total_loss(double kernel, double text, double surrounding, double scale,
                     const LossWeights& weights = {});
TotalLoss total_loss(const LossOutput& kernel, const LossOutput& text,
                     const LossOutput& surrounding, const LossOutput& scale,
                     const LossWeights& weights = {});

}  // namespace fepe
