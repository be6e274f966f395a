// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "eigv/numkit/rng.hpp"
#include "eigv/numkit/tape.hpp"

namespace eigv::intervention {

using numkit::RngStream;
using numkit::Tensor;
using numkit::Var;

// ---------------------------------------------------------------------------
// Intervener
// ---------------------------------------------------------------------------

// One sample's mixing draw: lambda0 drives the equivariant mix of the causal
// factors, lambda1 the invariant mix of the environment.
struct InterventionDraw {
  double lambda0 = 1.0;
  double lambda1 = 1.0;
  std::size_t partner = 0;
  double alpha = 1.0;
};

// Per-sample draws for a batch. Partners come from a seeded shuffle in
// which every sample pairs with its successor in the shuffled order, so
// no sample pairs with itself when batch >= 2.
std::vector<InterventionDraw> draw_interventions(std::size_t batch, double alpha,
                                                 RngStream& rng);

// Causal factors of a batch: causal scene ((B*K) x d), question (B x d) and
// label distribution (B x n_answers).
template <class T>
struct CausalFactors {
  Var<T> causal;
  Var<T> question;
  Var<T> label;
};

// Rows of `factors` reordered so that sample b holds sample partner[b].
template <class T>
CausalFactors<T> gather_partners(const CausalFactors<T>& factors,
                                 std::span<const std::size_t> partner, std::size_t clips);

// Row-block convex mix: sample b becomes w[b] * a_b + (1 - w[b]) * b_b, where
// each sample spans `rows_per_sample` consecutive rows.
template <class T>
Var<T> mix_samples(Var<T> a, Var<T> b, std::span<const double> weights,
                   std::size_t rows_per_sample);

// c* = l0 c + (1-l0) c', q* = l0 q + (1-l0) q', y* = l0 y + (1-l0) y'.
template <class T>
CausalFactors<T> e_intervene(const CausalFactors<T>& anchor, const CausalFactors<T>& partner,
                             std::span<const double> lambda0, std::size_t clips);

// e* = l1 e + (1-l1) e'.
template <class T>
Var<T> i_intervene(Var<T> environment, Var<T> partner_environment,
                   std::span<const double> lambda1, std::size_t clips);

// v* = c* + e*.
template <class T>
Var<T> compose_video(Var<T> causal, Var<T> environment);

// ---------------------------------------------------------------------------
// Memory bank
// ---------------------------------------------------------------------------

enum class ClipAssignment { kCausal, kEnvironment };

template <class T>
struct BankClip {
  std::vector<T> feature;
  ClipAssignment assignment = ClipAssignment::kEnvironment;
  std::optional<int> concept_tag;  // generator concept when known
  int source_label = -1;           // answer label of the source video
  std::size_t source_id = 0;       // index of the source video
};

// Which bank entries may substitute into an anchor. With a concept tag on
// both sides the tags must differ; otherwise entries from videos sharing the
// anchor's answer label are excluded. Entries from the listed source videos
// are always excluded.
struct BankFilter {
  std::optional<int> anchor_concept;
  std::optional<int> anchor_label;
  std::vector<std::size_t> excluded_sources;
};

// Bounded FIFO of environment-grounded clip features.
template <class T>
class MemoryBank {
 public:
  explicit MemoryBank(std::size_t capacity);

  // Appends in order and evicts the oldest entries beyond capacity. Throws
  // on a clip that was not grounded as environment.
  void push(std::span<const BankClip<T>> clips);

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  const BankClip<T>& at(std::size_t i) const { return entries_.at(i); }

  bool eligible(const BankClip<T>& entry, const BankFilter& filter) const;
  std::size_t count_eligible(const BankFilter& filter) const;

  // `count` distinct eligible entries drawn uniformly without replacement.
  std::vector<std::size_t> sample(const BankFilter& filter, std::size_t count,
                                  RngStream& rng) const;

 private:
  std::size_t capacity_;
  std::deque<BankClip<T>> entries_;
};

// ---------------------------------------------------------------------------
// Disruptor
// ---------------------------------------------------------------------------

enum class NegativeKind { kCausalDisrupted, kQuestionSwapped };

template <class T>
struct Negative {
  Var<T> video;     // (B*K) x d
  Var<T> question;  // B x d
  NegativeKind kind;
};

// Candidate questions for linguistic negatives with their answer labels.
template <class T>
struct QuestionPool {
  Var<T> questions;  // P x d
  std::vector<int> labels;
};

template <class T>
struct ContrastiveSet {
  Var<T> anchor_video;
  Var<T> anchor_question;
  Var<T> positive_video;  // paired with anchor_question
  std::vector<Negative<T>> negatives;
};

// v+: causal clips (per `causal`, one flag per row of `video`) copied from
// v*, environment clips replaced by filtered bank samples. One filter per
// sample.
template <class T>
Var<T> make_positive(Var<T> video, const std::vector<bool>& causal,
                     std::span<const BankFilter> filters, const MemoryBank<T>& bank,
                     RngStream& rng, std::size_t clips);

// n_visual negatives (v-, q*) with causal clips replaced from the bank, then
// n_question negatives (v*, q_r) with q_r drawn from pool entries whose label
// differs from the sample's anchor label.
template <class T>
std::vector<Negative<T>> make_negatives(Var<T> video, Var<T> question,
                                        const std::vector<bool>& causal,
                                        std::span<const BankFilter> filters,
                                        const MemoryBank<T>& bank, const QuestionPool<T>& pool,
                                        std::span<const int> anchor_labels,
                                        std::size_t n_visual, std::size_t n_question,
                                        RngStream& rng, std::size_t clips);

}  // namespace eigv::intervention
