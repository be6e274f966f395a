// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include "eigv/encoders/encoders.hpp"

#include <array>
#include <string>

#include "eigv/numkit/init.hpp"
#include "eigv/numkit/ops.hpp"

namespace eigv::encoders {

namespace ops = numkit::ops;
using numkit::Tensor;

template <class T>
void VideoEncoder<T>::init(ParameterSet<T>& params, RngStream& rng) const {
  auto r = rng.derive("video");
  params.add("video.weight", numkit::uniform_fan_in<T>(dims_.d_in, dims_.hidden, r));
  params.add("video.bias", Tensor<T>({1, dims_.hidden}));
}

template <class T>
Var<T> VideoEncoder<T>::encode(const Binding<T>& params, Var<T> raw) const {
  if (raw.value().rank() != 2 || raw.cols() != dims_.d_in) {
    throw Error(Errc::kShapeMismatch, "encode_video: raw clips " +
                                          numkit::shape_string(raw.shape()) +
                                          ", expected rows x " + std::to_string(dims_.d_in));
  }
  return ops::add_row(ops::matmul(raw, params["video.weight"]), params["video.bias"]);
}

template <class T>
void QuestionEncoder<T>::init(ParameterSet<T>& params, RngStream& rng) const {
  auto r = rng.derive("question");
  const std::size_t d = dims_.hidden;
  params.add("question.w_input", numkit::uniform_fan_in<T>(dims_.d_q, 4 * d, r));
  params.add("question.w_hidden", numkit::uniform_fan_in<T>(d, 4 * d, r));
  // Gate order: input, forget, cell, output. Forget bias starts at one.
  Tensor<T> bias({1, 4 * d});
  for (std::size_t j = d; j < 2 * d; ++j) bias[j] = T{1};
  params.add("question.bias", std::move(bias));
}

template <class T>
Var<T> QuestionEncoder<T>::encode(const Binding<T>& params, Var<T> tokens,
                                  std::size_t length) const {
  if (length == 0) throw Error(Errc::kEmptyInput, "encode_question: empty token sequence");
  if (tokens.value().rank() != 2 || tokens.cols() != dims_.d_q ||
      tokens.rows() % length != 0 || tokens.rows() == 0) {
    throw Error(Errc::kShapeMismatch, "encode_question: tokens " +
                                          numkit::shape_string(tokens.shape()) +
                                          " for length " + std::to_string(length) +
                                          " and width " + std::to_string(dims_.d_q));
  }
  const std::size_t batch = tokens.rows() / length;
  const std::size_t d = dims_.hidden;
  auto& tape = tokens.tape();
  const Var<T> w_in = params["question.w_input"];
  const Var<T> w_h = params["question.w_hidden"];
  const Var<T> bias = params["question.bias"];

  Var<T> h = tape.constant(Tensor<T>({batch, d}));
  Var<T> c = tape.constant(Tensor<T>({batch, d}));
  std::vector<std::size_t> step_rows(batch);
  for (std::size_t t = 0; t < length; ++t) {
    for (std::size_t b = 0; b < batch; ++b) step_rows[b] = b * length + t;
    const Var<T> x = ops::gather_rows(tokens, std::span<const std::size_t>(step_rows));
    const Var<T> gates =
        ops::add_row(ops::add(ops::matmul(x, w_in), ops::matmul(h, w_h)), bias);
    const Var<T> i = ops::sigmoid(ops::slice_cols(gates, 0, d));
    const Var<T> f = ops::sigmoid(ops::slice_cols(gates, d, d));
    const Var<T> g = ops::tanh(ops::slice_cols(gates, 2 * d, d));
    const Var<T> o = ops::sigmoid(ops::slice_cols(gates, 3 * d, d));
    c = ops::add(ops::mul(f, c), ops::mul(i, g));
    h = ops::mul(o, ops::tanh(c));
  }
  return h;
}

template class VideoEncoder<float>;
template class VideoEncoder<double>;
template class QuestionEncoder<float>;
template class QuestionEncoder<double>;

}  // namespace eigv::encoders
