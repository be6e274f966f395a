// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include "eigv/objective/objective.hpp"

#include <cmath>
#include <string>

#include "eigv/numkit/ops.hpp"

namespace eigv::objective {

namespace ops = numkit::ops;
using numkit::Tensor;

namespace {

template <class T>
Var<T> l2_normalize_rows(Var<T> x) {
  const Var<T> norm_sq = ops::rowwise_dot(x, x);
  Tensor<T> eps(norm_sq.shape());
  for (auto& v : eps.values()) v = static_cast<T>(1e-12);
  const Var<T> inv = ops::exp(
      ops::scale(ops::log_floor(ops::add(norm_sq, x.tape().constant(std::move(eps))), 1e-30), -0.5));
  return ops::scale_rows(x, inv);
}

}  // namespace

template <class T>
Var<T> info_nce(Var<T> anchor, Var<T> positive, std::span<const Var<T>> negatives,
                const InfoNceOptions& options) {
  if (negatives.empty()) throw Error(Errc::kEmptyInput, "info_nce needs at least one negative");
  if (!(options.temperature > 0.0)) {
    throw Error(Errc::kInvalidArgument, "info_nce temperature must be positive");
  }
  auto prep = [&](Var<T> x) { return options.normalize ? l2_normalize_rows(x) : x; };
  const Var<T> a = prep(anchor);
  std::vector<Var<T>> scores;
  scores.reserve(negatives.size() + 1);
  scores.push_back(ops::rowwise_dot(a, prep(positive)));
  for (const auto& n : negatives) scores.push_back(ops::rowwise_dot(a, prep(n)));
  const Var<T> logits =
      ops::scale(ops::concat_cols(std::span<const Var<T>>(scores)), 1.0 / options.temperature);
  // Column 0 holds the positive score.
  return ops::scale(ops::mean(ops::slice_cols(ops::row_log_softmax(logits), 0, 1)), -1.0);
}

template <class T>
Var<T> soft_cross_entropy(Var<T> logits, Var<T> target) {
  const auto& tv = target.value();
  if (logits.shape() != target.shape()) {
    throw Error(Errc::kShapeMismatch, "soft_cross_entropy: logits " +
                                          numkit::shape_string(logits.shape()) + " vs target " +
                                          numkit::shape_string(target.shape()));
  }
  for (std::size_t r = 0; r < tv.rows(); ++r) {
    double total = 0.0;
    for (T v : tv.row(r)) {
      if (v < T{0}) throw Error(Errc::kInvalidArgument, "target has a negative entry");
      total += static_cast<double>(v);
    }
    if (std::abs(total - 1.0) > 1e-4) {
      throw Error(Errc::kInvalidArgument,
                  "target row " + std::to_string(r) + " sums to " + std::to_string(total));
    }
  }
  const double rows = static_cast<double>(tv.rows());
  return ops::scale(ops::sum(ops::mul(target, ops::row_log_softmax(logits))), -1.0 / rows);
}

template <class T>
LossBreakdown<T> eigv_loss(Var<T> erm, Var<T> cl, double beta) {
  if (!(beta >= 0.0)) {
    throw Error(Errc::kInvalidArgument, "beta must be non-negative, got " + std::to_string(beta));
  }
  return LossBreakdown<T>{erm, cl, ops::add(erm, ops::scale(cl, beta)), beta};
}

template Var<float> info_nce(Var<float>, Var<float>, std::span<const Var<float>>,
                             const InfoNceOptions&);
template Var<double> info_nce(Var<double>, Var<double>, std::span<const Var<double>>,
                              const InfoNceOptions&);
template Var<float> soft_cross_entropy(Var<float>, Var<float>);
template Var<double> soft_cross_entropy(Var<double>, Var<double>);
template LossBreakdown<float> eigv_loss(Var<float>, Var<float>, double);
template LossBreakdown<double> eigv_loss(Var<double>, Var<double>, double);

}  // namespace eigv::objective
