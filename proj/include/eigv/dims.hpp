// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "json.hpp"

namespace eigv {

// Extents shared by every learned module of one model instance.
struct ModelDims {
  std::size_t clips = 16;   // K
  std::size_t d_in = 32;    // raw clip feature width
  std::size_t d_q = 16;     // question token width
  std::size_t hidden = 64;  // d
  std::size_t n_answers = 8;

  bool operator==(const ModelDims&) const = default;
};

inline void to_json(nlohmann::json& j, const ModelDims& m) {
  j = nlohmann::json{{"clips", m.clips},
                     {"d_in", m.d_in},
                     {"d_q", m.d_q},
                     {"hidden", m.hidden},
                     {"n_answers", m.n_answers}};
}

inline void from_json(const nlohmann::json& j, ModelDims& m) {
  j.at("clips").get_to(m.clips);
  j.at("d_in").get_to(m.d_in);
  j.at("d_q").get_to(m.d_q);
  j.at("hidden").get_to(m.hidden);
  j.at("n_answers").get_to(m.n_answers);
}

}  // namespace eigv
