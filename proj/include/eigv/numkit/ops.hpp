// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eigv/numkit/tape.hpp"

// Differentiable operations over rank-2 tensors. Every function records one
// node on the tape of its first argument; all operands must share that tape.
namespace eigv::numkit::ops {

template <class T> Var<T> add(Var<T> a, Var<T> b);
template <class T> Var<T> sub(Var<T> a, Var<T> b);
template <class T> Var<T> mul(Var<T> a, Var<T> b);
template <class T> Var<T> scale(Var<T> a, double factor);

// a (R x C) + bias (1 x C), bias broadcast over rows.
template <class T> Var<T> add_row(Var<T> a, Var<T> bias);

// (R x K) * (K x C)
template <class T> Var<T> matmul(Var<T> a, Var<T> b);

template <class T> Var<T> tanh(Var<T> a);
template <class T> Var<T> sigmoid(Var<T> a);
template <class T> Var<T> exp(Var<T> a);
// log(max(a, floor)); the clamped region has zero gradient.
template <class T> Var<T> log_floor(Var<T> a, double floor);

// Row-wise softmax stabilized by row-max subtraction.
template <class T> Var<T> row_softmax(Var<T> a);
template <class T> Var<T> row_log_softmax(Var<T> a);

template <class T> Var<T> slice_cols(Var<T> a, std::size_t begin, std::size_t count);
template <class T> Var<T> concat_cols(std::span<const Var<T>> parts);
template <class T> Var<T> concat_rows(std::span<const Var<T>> parts);
template <class T> Var<T> gather_rows(Var<T> a, std::span<const std::size_t> rows);
template <class T> Var<T> reshape(Var<T> a, std::size_t rows, std::size_t cols);

// Per-row inner product: (R x C), (R x C) -> R x 1.
template <class T> Var<T> rowwise_dot(Var<T> a, Var<T> b);
// Row r of a multiplied by w[r]: (R x C), (R x 1) -> R x C.
template <class T> Var<T> scale_rows(Var<T> a, Var<T> w);
// Sums consecutive groups of `group` rows: (G*group x C) -> G x C.
template <class T> Var<T> sum_row_groups(Var<T> a, std::size_t group);

template <class T> Var<T> sum(Var<T> a);
template <class T> Var<T> mean(Var<T> a);

// Value copy with no gradient path.
template <class T> Var<T> detach(Var<T> a);

}  // namespace eigv::numkit::ops

namespace eigv::numkit {

// Forward-only dense product used outside the tape (inference helpers).
template <class T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b);

}  // namespace eigv::numkit
