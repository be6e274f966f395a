// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include "eigv/backbone/backbone.hpp"

#include <array>
#include <string>

#include "eigv/numkit/init.hpp"
#include "eigv/numkit/ops.hpp"

namespace eigv::backbone {

namespace ops = numkit::ops;
using numkit::Tensor;

namespace {

template <class T>
void check_inputs(const ModelDims& dims, const Var<T>& video, const Var<T>& question,
                  std::size_t clips) {
  const bool ok = video.value().rank() == 2 && question.value().rank() == 2 && clips > 0 &&
                  video.cols() == dims.hidden && question.cols() == dims.hidden &&
                  video.rows() == question.rows() * clips;
  if (!ok) {
    throw Error(Errc::kShapeMismatch, "backbone: video " + numkit::shape_string(video.shape()) +
                                          ", question " +
                                          numkit::shape_string(question.shape()) + ", clips " +
                                          std::to_string(clips));
  }
}

std::vector<std::size_t> repeat_rows(std::size_t batch, std::size_t clips) {
  std::vector<std::size_t> rows(batch * clips);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i / clips;
  return rows;
}

}  // namespace

template <class T>
void AttentionBackbone<T>::init(ParameterSet<T>& params, RngStream& rng) const {
  auto r = rng.derive("backbone");
  const std::size_t d = dims_.hidden;
  params.add("backbone.attention", numkit::uniform_fan_in<T>(d, d, r));
  params.add("backbone.fuse.weight", numkit::uniform_fan_in<T>(2 * d, d, r));
  params.add("backbone.fuse.bias", Tensor<T>({1, d}));
  params.add("backbone.out.weight", numkit::uniform_fan_in<T>(d, dims_.n_answers, r));
  params.add("backbone.out.bias", Tensor<T>({1, dims_.n_answers}));
}

template <class T>
Var<T> AttentionBackbone<T>::attention(const Binding<T>& params, Var<T> video,
                                       Var<T> question, std::size_t clips) const {
  check_inputs(dims_, video, question, clips);
  const std::size_t batch = question.rows();
  const auto rows = repeat_rows(batch, clips);
  // score_k = v_k . (W_a q)
  const Var<T> probe = ops::matmul(question, params["backbone.attention"]);
  const Var<T> scores =
      ops::rowwise_dot(video, ops::gather_rows(probe, std::span<const std::size_t>(rows)));
  return ops::row_softmax(ops::reshape(scores, batch, clips));
}

template <class T>
AnswerOutput<T> AttentionBackbone<T>::answer(const Binding<T>& params, Var<T> video,
                                             Var<T> question, std::size_t clips) const {
  const Var<T> weights = attention(params, video, question, clips);
  const std::size_t batch = question.rows();
  const Var<T> pooled = ops::sum_row_groups(
      ops::scale_rows(video, ops::reshape(weights, batch * clips, 1)), clips);
  const std::array<Var<T>, 2> joint{pooled, question};
  const Var<T> fused = ops::tanh(ops::add_row(
      ops::matmul(ops::concat_cols(std::span<const Var<T>>(joint)), params["backbone.fuse.weight"]),
      params["backbone.fuse.bias"]));
  const Var<T> logits =
      ops::add_row(ops::matmul(fused, params["backbone.out.weight"]), params["backbone.out.bias"]);
  return AnswerOutput<T>{layer_ == RepresentationLayer::kFused ? fused : logits, logits};
}

template class AttentionBackbone<float>;
template class AttentionBackbone<double>;

}  // namespace eigv::backbone
