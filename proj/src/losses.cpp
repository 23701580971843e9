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

#include "fepe/losses.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace fepe {

namespace {

constexpr double kClamp = 1e-6;

using Decimal = boost::multiprecision::cpp_dec_float_100;

// Exact decimal value of the shortest representation that round-trips x.
Decimal to_decimal(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return Decimal(std::string(buf, res.ptr));
}

double to_double(const Decimal& d) {
  const std::string text = d.str(0, std::ios_base::scientific);
  double out = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

double bce_term(double x, double y) { return -(y * std::log(x) + (1.0 - y) * std::log(1.0 - x)); }

}  // namespace

LossOutput bce_ohem(const FloatRaster& pred, const BinaryMap& gt, const BinaryMap& valid,
                    double neg_ratio) {
  require_same_shape(pred, gt, "bce_ohem");
  require_same_shape(pred, valid, "bce_ohem");
  if (!(neg_ratio >= 0.0)) throw DomainError("bce_ohem: negative mining ratio must be >= 0");

  const std::size_t n = pred.size();
  std::vector<double> clamped(n), loss(n);
  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(pred[i])) throw DomainError("bce_ohem: non-finite prediction");
    clamped[i] = std::clamp(pred[i], kClamp, 1.0 - kClamp);
    loss[i] = bce_term(clamped[i], gt[i]);
    if (!valid[i]) continue;
    (gt[i] ? positives : negatives).push_back(i);
  }

  std::vector<std::size_t> selected;
  if (positives.empty()) {
    selected = std::move(negatives);
  } else {
    const auto wanted = static_cast<std::size_t>(neg_ratio * static_cast<double>(positives.size()));
    const std::size_t keep = std::min(wanted, negatives.size());
    auto harder = [&](std::size_t a, std::size_t b) {
      return loss[a] != loss[b] ? loss[a] > loss[b] : a < b;
    };
    std::partial_sort(negatives.begin(), negatives.begin() + keep, negatives.end(), harder);
    negatives.resize(keep);
    selected = std::move(positives);
    selected.insert(selected.end(), negatives.begin(), negatives.end());
    std::sort(selected.begin(), selected.end());
  }

  LossOutput out{0.0, FloatRaster(pred.height(), pred.width(), pred.channels())};
  if (selected.empty()) return out;
  const double inv = 1.0 / static_cast<double>(selected.size());
  double sum = 0.0;
  for (std::size_t i : selected) {
    sum += loss[i];
    const double x = clamped[i];
    const double y = gt[i];
    // Clamped predictions carry no gradient.
    if (pred[i] > kClamp && pred[i] < 1.0 - kClamp) {
      out.gradient[i] = (-y / x + (1.0 - y) / (1.0 - x)) * inv;
    }
  }
  out.value = sum * inv;
  return out;
}

LossOutput dice_loss(const FloatRaster& pred, const BinaryMap& gt, const BinaryMap& valid,
                     double eps) {
  require_same_shape(pred, gt, "dice_loss");
  require_same_shape(pred, valid, "dice_loss");
  double inter = 0.0, sum_y = 0.0, sum_x = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!std::isfinite(pred[i])) throw DomainError("dice_loss: non-finite prediction");
    if (!valid[i]) continue;
    inter += gt[i] * pred[i];
    sum_y += gt[i];
    sum_x += pred[i];
  }
  const double denom = sum_y + sum_x + eps;
  LossOutput out{1.0 - 2.0 * inter / denom, FloatRaster(pred.height(), pred.width(), pred.channels())};
  const double denom_sq = denom * denom;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!valid[i]) continue;
    out.gradient[i] = -(2.0 * gt[i] * denom - 2.0 * inter) / denom_sq;
  }
  return out;
}

LossOutput ratio_loss(const FloatRaster& pred, const FloatRaster& gt, const BinaryMap& supervise,
                      double eps) {
  require_same_shape(pred, gt, "ratio_loss");
  require_same_shape(pred, supervise, "ratio_loss");
  LossOutput out{0.0, FloatRaster(pred.height(), pred.width(), pred.channels())};
  std::size_t count = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!(pred[i] >= 0.0) || !std::isfinite(pred[i])) {
      throw DomainError("ratio_loss: prediction must be finite and non-negative");
    }
    if (!(gt[i] >= 0.0) || !std::isfinite(gt[i])) {
      throw DomainError("ratio_loss: target must be finite and non-negative");
    }
    count += supervise[i] ? 1 : 0;
  }
  if (count == 0) return out;

  const double inv = 1.0 / static_cast<double>(count);
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!supervise[i]) continue;
    const double x = std::max(pred[i], eps);
    const double diff = std::log(x) - std::log(std::max(gt[i], eps));
    sum += std::abs(diff);
    const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
    if (pred[i] > eps) out.gradient[i] = sign / x * inv;
  }
  out.value = sum * inv;
  return out;
}

BinaryMap positive_mask(const FloatRaster& gt) {
  BinaryMap out(gt.height(), gt.width(), gt.channels());
  for (std::size_t i = 0; i < gt.size(); ++i) out[i] = gt[i] > 0.0 ? 1 : 0;
  return out;
}

TotalLoss total_loss(double kernel, double text, double surrounding, double scale,
                     const LossWeights& weights) {
  const std::array<double, 4> values{kernel, text, surrounding, scale};
  const std::array<double, 4> lambdas{weights.kernel, weights.text, weights.surrounding,
                                      weights.scale};
  TotalLoss out;
  // Decimal accumulation: the weighted sum of decimal inputs is formed
  // exactly and rounded once, so 6 * 0.1 + 3 * 0.2 + ... reads as written.
  Decimal acc = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(lambdas[i])) {
      throw DomainError("total_loss: non-finite loss term or weight");
    }
    if (lambdas[i] < 0.0) throw DomainError("total_loss: loss weights must be non-negative");
    const Decimal term = to_decimal(lambdas[i]) * to_decimal(values[i]);
    out.terms[i] = to_double(term);
    acc += term;
  }
  out.value = to_double(acc);
  return out;
}

TotalLoss total_loss(const LossOutput& kernel, const LossOutput& text,
                     const LossOutput& surrounding, const LossOutput& scale,
                     const LossWeights& weights) {
  return total_loss(kernel.value, text.value, surrounding.value, scale.value, weights);
}

}  // namespace fepe
