// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include "eigv/grounding/grounding.hpp"

#include <array>
#include <string>

#include "eigv/numkit/init.hpp"
#include "eigv/numkit/ops.hpp"
#include "eigv/numkit/samplers.hpp"

namespace eigv::grounding {

namespace ops = numkit::ops;
using numkit::Tensor;

template <class T>
std::vector<bool> GroundingMask<T>::causal_clips() const {
  const auto& v = indicator.value();
  std::vector<bool> out(v.rows());
  for (std::size_t r = 0; r < v.rows(); ++r) out[r] = v[2 * r] >= v[2 * r + 1];
  return out;
}

template <class T>
void GroundingIndicator<T>::init(ParameterSet<T>& params, RngStream& rng) const {
  auto r = rng.derive("grounding");
  const std::size_t d = dims_.hidden;
  for (int i = 1; i <= 4; ++i) {
    const std::string prefix = "grounding.fc" + std::to_string(i);
    params.add(prefix + ".weight", numkit::uniform_fan_in<T>(d, d, r));
    params.add(prefix + ".bias", Tensor<T>({1, d}));
  }
}

template <class T>
GroundingScores<T> GroundingIndicator<T>::attention_scores(const Binding<T>& params,
                                                           Var<T> video, Var<T> question,
                                                           std::size_t clips) const {
  const bool ok = video.value().rank() == 2 && question.value().rank() == 2 && clips > 0 &&
                  video.cols() == dims_.hidden && question.cols() == dims_.hidden &&
                  video.rows() == question.rows() * clips;
  if (!ok) {
    throw Error(Errc::kShapeMismatch, "grounding: video " + numkit::shape_string(video.shape()) +
                                          ", question " +
                                          numkit::shape_string(question.shape()));
  }
  const std::size_t batch = question.rows();
  std::vector<std::size_t> rows(batch * clips);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i / clips;

  auto fc = [&](Var<T> x, int i) {
    const std::string prefix = "grounding.fc" + std::to_string(i);
    return ops::add_row(ops::matmul(x, params[prefix + ".weight"]), params[prefix + ".bias"]);
  };
  auto branch = [&](int video_fc, int question_fc) {
    const Var<T> keys = fc(video, video_fc);
    const Var<T> probe =
        ops::gather_rows(fc(question, question_fc), std::span<const std::size_t>(rows));
    return ops::row_softmax(ops::reshape(ops::rowwise_dot(keys, probe), batch, clips));
  };
  return GroundingScores<T>{branch(1, 2), branch(3, 4)};
}

template <class T>
ScenePartition<T> apply_mask(Var<T> video, GroundingMask<T> mask, GroundingScores<T> scores) {
  const Var<T> causal_col = ops::slice_cols(mask.indicator, 0, 1);
  const Var<T> env_col = ops::slice_cols(mask.indicator, 1, 1);
  return ScenePartition<T>{ops::scale_rows(video, causal_col), ops::scale_rows(video, env_col),
                           std::move(mask), std::move(scores)};
}

template <class T>
ScenePartition<T> GroundingIndicator<T>::ground(const Binding<T>& params, Var<T> video,
                                                Var<T> question, std::size_t clips,
                                                GroundingMode mode, RngStream* rng,
                                                double temperature) const {
  GroundingScores<T> scores = attention_scores(params, video, question, clips);
  const std::size_t rows = video.rows();
  auto& tape = video.tape();

  GroundingMask<T> mask;
  mask.mode = mode;
  switch (mode) {
    case GroundingMode::kHardDeterministic: {
      const auto& pc = scores.causal.value();
      const auto& pe = scores.environment.value();
      Tensor<T> indicator({rows, 2});
      for (std::size_t r = 0; r < rows; ++r) {
        const T lc = std::max(pc[r], static_cast<T>(kLogFloor));
        const T le = std::max(pe[r], static_cast<T>(kLogFloor));
        indicator[2 * r] = lc >= le ? T{1} : T{0};
        indicator[2 * r + 1] = T{1} - indicator[2 * r];
      }
      mask.indicator = tape.constant(std::move(indicator));
      break;
    }
    case GroundingMode::kHardStochastic:
    case GroundingMode::kSoft: {
      if (rng == nullptr) {
        throw Error(Errc::kInvalidArgument, "stochastic grounding needs a random stream");
      }
      const std::array<Var<T>, 2> columns{ops::reshape(scores.causal, rows, 1),
                                          ops::reshape(scores.environment, rows, 1)};
      const Var<T> logits =
          ops::log_floor(ops::concat_cols(std::span<const Var<T>>(columns)), kLogFloor);
      mask.indicator = numkit::gumbel_softmax_rows(
          logits, temperature,
          mode == GroundingMode::kSoft ? numkit::SelectionMode::kSoft
                                       : numkit::SelectionMode::kHard,
          *rng);
      break;
    }
    default:
      throw Error(Errc::kInvalidArgument, "invalid grounding mode");
  }
  return apply_mask(video, std::move(mask), std::move(scores));
}

template struct GroundingMask<float>;
template struct GroundingMask<double>;
template class GroundingIndicator<float>;
template class GroundingIndicator<double>;
template ScenePartition<float> apply_mask(Var<float>, GroundingMask<float>, GroundingScores<float>);
template ScenePartition<double> apply_mask(Var<double>, GroundingMask<double>,
                                           GroundingScores<double>);

}  // namespace eigv::grounding
