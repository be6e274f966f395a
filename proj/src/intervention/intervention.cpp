// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include "eigv/intervention/intervention.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "eigv/numkit/ops.hpp"
#include "eigv/numkit/samplers.hpp"

namespace eigv::intervention {

namespace ops = numkit::ops;

namespace {

void check_ratio(double lambda, const char* name) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(Errc::kInvalidArgument,
                std::string(name) + " must lie in [0, 1], got " + std::to_string(lambda));
  }
}

std::vector<std::size_t> sample_rows(std::span<const std::size_t> sample_index,
                                     std::size_t rows_per_sample) {
  std::vector<std::size_t> rows;
  rows.reserve(sample_index.size() * rows_per_sample);
  for (std::size_t s : sample_index)
    for (std::size_t r = 0; r < rows_per_sample; ++r) rows.push_back(s * rows_per_sample + r);
  return rows;
}

template <class T>
void check_clip_layout(const Var<T>& video, const std::vector<bool>& causal, std::size_t clips,
                       std::size_t filters, const char* op) {
  if (clips == 0 || video.rows() % clips != 0 || causal.size() != video.rows() ||
      filters != video.rows() / clips) {
    throw Error(Errc::kShapeMismatch,
                std::string(op) + ": video " + numkit::shape_string(video.shape()) + ", " +
                    std::to_string(causal.size()) + " mask rows, " + std::to_string(filters) +
                    " filters, clips " + std::to_string(clips));
  }
}

// Replaces the rows where `replace[r]` holds with distinct bank entries;
// other rows pass through unchanged.
template <class T>
Var<T> substitute_rows(Var<T> video, const std::vector<bool>& replace,
                       std::span<const BankFilter> filters, const MemoryBank<T>& bank,
                       RngStream& rng, std::size_t clips) {
  const std::size_t rows = video.rows(), cols = video.cols();
  Tensor<T> keep({rows, 1});
  Tensor<T> fill({rows, cols});
  for (std::size_t b = 0; b < rows / clips; ++b) {
    std::size_t needed = 0;
    for (std::size_t k = 0; k < clips; ++k) needed += replace[b * clips + k] ? 1 : 0;
    const auto picks = bank.sample(filters[b], needed, rng);
    std::size_t next = 0;
    for (std::size_t k = 0; k < clips; ++k) {
      const std::size_t r = b * clips + k;
      if (!replace[r]) {
        keep[r] = T{1};
        continue;
      }
      const auto& feature = bank.at(picks[next++]).feature;
      if (feature.size() != cols) {
        throw Error(Errc::kShapeMismatch, "bank clip width " + std::to_string(feature.size()) +
                                              " vs video width " + std::to_string(cols));
      }
      std::copy(feature.begin(), feature.end(), fill.row(r).begin());
    }
  }
  auto& tape = video.tape();
  return ops::add(ops::scale_rows(video, tape.constant(std::move(keep))),
                  tape.constant(std::move(fill)));
}

}  // namespace

std::vector<InterventionDraw> draw_interventions(std::size_t batch, double alpha,
                                                 RngStream& rng) {
  if (batch < 2) {
    throw Error(Errc::kInvalidArgument, "intervention pairing needs at least 2 samples");
  }
  std::vector<std::size_t> order(batch);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = batch; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  std::vector<InterventionDraw> draws(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    draws[order[i]].partner = order[(i + 1) % batch];
  }
  for (auto& d : draws) {
    d.alpha = alpha;
    d.lambda0 = numkit::sample_beta_symmetric(alpha, rng);
    d.lambda1 = numkit::sample_uniform01(rng);
  }
  return draws;
}

template <class T>
CausalFactors<T> gather_partners(const CausalFactors<T>& factors,
                                 std::span<const std::size_t> partner, std::size_t clips) {
  const auto clip_rows = sample_rows(partner, clips);
  return CausalFactors<T>{
      ops::gather_rows(factors.causal, std::span<const std::size_t>(clip_rows)),
      ops::gather_rows(factors.question, partner), ops::gather_rows(factors.label, partner)};
}

template <class T>
Var<T> mix_samples(Var<T> a, Var<T> b, std::span<const double> weights,
                   std::size_t rows_per_sample) {
  if (a.shape() != b.shape() || a.rows() != weights.size() * rows_per_sample) {
    throw Error(Errc::kShapeMismatch, "mix: " + numkit::shape_string(a.shape()) + " vs " +
                                          numkit::shape_string(b.shape()) + " with " +
                                          std::to_string(weights.size()) + " weights");
  }
  Tensor<T> wa({a.rows(), 1});
  Tensor<T> wb({a.rows(), 1});
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double w = weights[r / rows_per_sample];
    wa[r] = static_cast<T>(w);
    wb[r] = static_cast<T>(1.0 - w);
  }
  auto& tape = a.tape();
  return ops::add(ops::scale_rows(a, tape.constant(std::move(wa))),
                  ops::scale_rows(b, tape.constant(std::move(wb))));
}

template <class T>
CausalFactors<T> e_intervene(const CausalFactors<T>& anchor, const CausalFactors<T>& partner,
                             std::span<const double> lambda0, std::size_t clips) {
  for (double l : lambda0) check_ratio(l, "lambda0");
  return CausalFactors<T>{mix_samples(anchor.causal, partner.causal, lambda0, clips),
                          mix_samples(anchor.question, partner.question, lambda0, 1),
                          mix_samples(anchor.label, partner.label, lambda0, 1)};
}

template <class T>
Var<T> i_intervene(Var<T> environment, Var<T> partner_environment,
                   std::span<const double> lambda1, std::size_t clips) {
  for (double l : lambda1) check_ratio(l, "lambda1");
  return mix_samples(environment, partner_environment, lambda1, clips);
}

template <class T>
Var<T> compose_video(Var<T> causal, Var<T> environment) {
  return ops::add(causal, environment);
}

template <class T>
MemoryBank<T>::MemoryBank(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw Error(Errc::kInvalidArgument, "memory bank capacity must be positive");
}

template <class T>
void MemoryBank<T>::push(std::span<const BankClip<T>> clips) {
  for (const auto& c : clips) {
    if (c.assignment != ClipAssignment::kEnvironment) {
      throw Error(Errc::kContractViolation,
                  "memory bank accepts environment-grounded clips only (source " +
                      std::to_string(c.source_id) + ")");
    }
  }
  for (const auto& c : clips) {
    entries_.push_back(c);
    if (entries_.size() > capacity_) entries_.pop_front();
  }
}

template <class T>
bool MemoryBank<T>::eligible(const BankClip<T>& entry, const BankFilter& filter) const {
  if (std::find(filter.excluded_sources.begin(), filter.excluded_sources.end(),
                entry.source_id) != filter.excluded_sources.end()) {
    return false;
  }
  if (filter.anchor_concept && entry.concept_tag) {
    return *entry.concept_tag != *filter.anchor_concept;
  }
  if (filter.anchor_label) return entry.source_label != *filter.anchor_label;
  return true;
}

template <class T>
std::size_t MemoryBank<T>::count_eligible(const BankFilter& filter) const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [&](const auto& e) { return eligible(e, filter); }));
}

template <class T>
std::vector<std::size_t> MemoryBank<T>::sample(const BankFilter& filter, std::size_t count,
                                               RngStream& rng) const {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (eligible(entries_[i], filter)) pool.push_back(i);
  }
  if (pool.size() < count) {
    throw Error(Errc::kInsufficientBank, "need " + std::to_string(count) +
                                             " eligible clips, bank has " +
                                             std::to_string(pool.size()));
  }
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  }
  pool.resize(count);
  return pool;
}

template <class T>
Var<T> make_positive(Var<T> video, const std::vector<bool>& causal,
                     std::span<const BankFilter> filters, const MemoryBank<T>& bank,
                     RngStream& rng, std::size_t clips) {
  check_clip_layout(video, causal, clips, filters.size(), "make_positive");
  std::vector<bool> environment(causal.size());
  for (std::size_t r = 0; r < causal.size(); ++r) environment[r] = !causal[r];
  return substitute_rows(video, environment, filters, bank, rng, clips);
}

template <class T>
std::vector<Negative<T>> make_negatives(Var<T> video, Var<T> question,
                                        const std::vector<bool>& causal,
                                        std::span<const BankFilter> filters,
                                        const MemoryBank<T>& bank, const QuestionPool<T>& pool,
                                        std::span<const int> anchor_labels,
                                        std::size_t n_visual, std::size_t n_question,
                                        RngStream& rng, std::size_t clips) {
  check_clip_layout(video, causal, clips, filters.size(), "make_negatives");
  const std::size_t batch = video.rows() / clips;
  if (question.rows() != batch || anchor_labels.size() != batch) {
    throw Error(Errc::kShapeMismatch, "make_negatives: batch of " + std::to_string(batch) +
                                          " videos, " + std::to_string(question.rows()) +
                                          " questions, " +
                                          std::to_string(anchor_labels.size()) + " labels");
  }

  std::vector<Negative<T>> out;
  // Visual negatives only honour the source exclusion: any other bank clip
  // is a valid substitute for the causal scene.
  std::vector<BankFilter> visual_filters(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    visual_filters[b].excluded_sources = filters[b].excluded_sources;
  }
  for (std::size_t n = 0; n < n_visual; ++n) {
    out.push_back(Negative<T>{substitute_rows(video, causal, std::span<const BankFilter>(visual_filters),
                                              bank, rng, clips),
                              question, NegativeKind::kCausalDisrupted});
  }

  if (n_question > 0) {
    std::vector<std::vector<std::size_t>> eligible(batch);
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t p = 0; p < pool.labels.size(); ++p) {
        if (pool.labels[p] != anchor_labels[b]) eligible[b].push_back(p);
      }
      if (eligible[b].empty()) {
        throw Error(Errc::kEmptyInput, "no pool question with a label other than " +
                                           std::to_string(anchor_labels[b]));
      }
    }
    for (std::size_t n = 0; n < n_question; ++n) {
      std::vector<std::size_t> picks(batch);
      for (std::size_t b = 0; b < batch; ++b) {
        picks[b] = eligible[b][rng.below(eligible[b].size())];
      }
      out.push_back(Negative<T>{video,
                                ops::gather_rows(pool.questions, std::span<const std::size_t>(picks)),
                                NegativeKind::kQuestionSwapped});
    }
  }
  return out;
}

#define EIGV_INSTANTIATE_INTERVENTION(T)                                                    \
  template CausalFactors<T> gather_partners(const CausalFactors<T>&,                        \
                                            std::span<const std::size_t>, std::size_t);     \
  template Var<T> mix_samples(Var<T>, Var<T>, std::span<const double>, std::size_t);        \
  template CausalFactors<T> e_intervene(const CausalFactors<T>&, const CausalFactors<T>&,   \
                                        std::span<const double>, std::size_t);              \
  template Var<T> i_intervene(Var<T>, Var<T>, std::span<const double>, std::size_t);        \
  template Var<T> compose_video(Var<T>, Var<T>);                                            \
  template class MemoryBank<T>;                                                             \
  template Var<T> make_positive(Var<T>, const std::vector<bool>&,                           \
                                std::span<const BankFilter>, const MemoryBank<T>&,          \
                                RngStream&, std::size_t);                                   \
  template std::vector<Negative<T>> make_negatives(                                         \
      Var<T>, Var<T>, const std::vector<bool>&, std::span<const BankFilter>,                \
      const MemoryBank<T>&, const QuestionPool<T>&, std::span<const int>, std::size_t,      \
      std::size_t, RngStream&, std::size_t);

EIGV_INSTANTIATE_INTERVENTION(float)
EIGV_INSTANTIATE_INTERVENTION(double)
#undef EIGV_INSTANTIATE_INTERVENTION

}  // namespace eigv::intervention
