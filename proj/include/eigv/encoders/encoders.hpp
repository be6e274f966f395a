// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "eigv/dims.hpp"
#include "eigv/numkit/parameters.hpp"
#include "eigv/numkit/rng.hpp"

namespace eigv::encoders {

using numkit::Binding;
using numkit::ParameterSet;
using numkit::RngStream;
using numkit::Var;

// Per-clip affine projection of raw clip features into the shared space.
// Input rows are clips of one or more videos stacked sample-major
// ((B*K) x d_in); the output keeps that layout ((B*K) x d).
template <class T>
class VideoEncoder {
 public:
  explicit VideoEncoder(const ModelDims& dims) : dims_(dims) {}

  void init(ParameterSet<T>& params, RngStream& rng) const;
  Var<T> encode(const Binding<T>& params, Var<T> raw) const;

 private:
  ModelDims dims_;
};

// Gated recurrent (LSTM) scan over question tokens from a zero state. The
// holistic question representation is the last hidden state.
// Tokens are stacked sample-major ((B*L) x d_q); the result is B x d.
template <class T>
class QuestionEncoder {
 public:
  explicit QuestionEncoder(const ModelDims& dims) : dims_(dims) {}

  void init(ParameterSet<T>& params, RngStream& rng) const;
  Var<T> encode(const Binding<T>& params, Var<T> tokens, std::size_t length) const;

 private:
  ModelDims dims_;
};

}  // namespace eigv::encoders
