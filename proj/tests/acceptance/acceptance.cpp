// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion on stdout and
// progress on stderr; exits non-zero when any criterion fails.
//
//   eigv_acceptance            run every criterion
//   eigv_acceptance 1 2 5      run a subset

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eigv/backbone/backbone.hpp"
#include "eigv/datagen/corpus.hpp"
#include "eigv/encoders/encoders.hpp"
#include "eigv/grounding/grounding.hpp"
#include "eigv/intervention/intervention.hpp"
#include "eigv/numkit/samplers.hpp"
#include "eigv/objective/objective.hpp"
#include "eigv/trainkit/trainkit.hpp"
#include "gradcheck.hpp"

namespace {

using namespace eigv;
using eigv::testing::module_gradcheck;
using eigv::testing::project;
using eigv::testing::random_tensor;
using numkit::Binding;
using numkit::ParameterSet;
using numkit::RngStream;
using numkit::Tape;
using numkit::Tensor;
using numkit::Var;
namespace ops = numkit::ops;

// Shared training setup for the reproduction criteria; every mode gets the
// same values. The learning rate suits the 64-wide desk model; the
// contrastive weight was chosen on a corpus with a different data seed.
constexpr double kLearningRate = 2e-3;
constexpr double kBeta = 1.5;
constexpr std::uint64_t kSeeds[] = {0, 1, 2};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// 1. Gradient integrity
// ---------------------------------------------------------------------------

constexpr ModelDims kSmall{.clips = 4, .d_in = 5, .d_q = 3, .hidden = 4, .n_answers = 3};

template <class Module>
ParameterSet<double> init_params(const Module& m, std::uint64_t seed) {
  ParameterSet<double> p;
  RngStream rng(seed, "init");
  m.init(p, rng);
  return p;
}

Outcome gradient_integrity() {
  const auto t0 = std::chrono::steady_clock::now();
  const encoders::VideoEncoder<double> video(kSmall);
  const encoders::QuestionEncoder<double> question(kSmall);
  const grounding::GroundingIndicator<double> grounder({.clips = 4, .d_in = 4, .d_q = 4,
                                                       .hidden = 4, .n_answers = 3});
  const backbone::AttentionBackbone<double> answerer(
      {.clips = 3, .d_in = 4, .d_q = 4, .hidden = 4, .n_answers = 3});
  const ParameterSet<double> none;

  using Check = std::function<double(std::uint64_t)>;
  const std::vector<std::pair<std::string, Check>> checks = {
      {"video-encoder",
       [&](std::uint64_t i) {
         RngStream rng(i, "video-grad");
         return module_gradcheck(
             [&](Tape<double>&, const Binding<double>& b, auto x) {
               RngStream proj(i, "projection");
               return project(video.encode(b, x[0]), proj);
             },
             init_params(video, i), {random_tensor({8, 5}, rng)});
       }},
      {"lstm-encoder",
       [&](std::uint64_t i) {
         RngStream rng(i, "lstm-grad");
         return module_gradcheck(
             [&](Tape<double>&, const Binding<double>& b, auto x) {
               RngStream proj(i, "projection");
               return project(question.encode(b, x[0], 3), proj);
             },
             init_params(question, i), {random_tensor({6, 3}, rng)});
       }},
      {"grounding-attention",
       [&](std::uint64_t i) {
         RngStream rng(i, "attention-grad");
         return module_gradcheck(
             [&](Tape<double>&, const Binding<double>& b, auto x) {
               RngStream proj(i, "projection");
               const auto s = grounder.attention_scores(b, x[0], x[1], 4);
               return ops::add(project(s.causal, proj), project(s.environment, proj));
             },
             init_params(grounder, i), {random_tensor({8, 4}, rng), random_tensor({2, 4}, rng)});
       }},
      {"gumbel-soft-grounding",
       [&](std::uint64_t i) {
         RngStream rng(i, "soft-grad");
         return module_gradcheck(
             [&](Tape<double>&, const Binding<double>& b, auto x) {
               RngStream noise(i, "gumbel");
               RngStream proj(i, "projection");
               const auto part =
                   grounder.ground(b, x[0], x[1], 4, grounding::GroundingMode::kSoft, &noise, 0.7);
               return ops::add(project(part.causal, proj), project(part.environment, proj));
             },
             init_params(grounder, i), {random_tensor({8, 4}, rng), random_tensor({2, 4}, rng)});
       }},
      {"gumbel-softmax",
       [&](std::uint64_t i) {
         RngStream rng(i, "gumbel-grad");
         return module_gradcheck(
             [&](Tape<double>&, const Binding<double>&, auto x) {
               RngStream noise(i, "gumbel");
               RngStream proj(i, "projection");
               return project(numkit::gumbel_softmax_rows(x[0], 0.5, numkit::SelectionMode::kSoft,
                                                          noise),
                              proj);
             },
             none, {random_tensor({5, 2}, rng)});
       }},
      {"backbone",
       [&](std::uint64_t i) {
         RngStream rng(i, "backbone-grad");
         return module_gradcheck(
             [&](Tape<double>&, const Binding<double>& b, auto x) {
               RngStream proj(i, "projection");
               const auto out = answerer.answer(b, x[0], x[1], 3);
               return ops::add(project(out.logits, proj), project(out.representation, proj));
             },
             init_params(answerer, i), {random_tensor({6, 4}, rng), random_tensor({2, 4}, rng)});
       }},
      {"info-nce",
       [&](std::uint64_t i) {
         RngStream rng(i, "nce-grad");
         std::vector<Tensor<double>> in;
         for (int k = 0; k < 7; ++k) in.push_back(random_tensor({3, 4}, rng));
         double worst = 0;
         for (bool normalize : {false, true}) {
           worst = std::max(
               worst, module_gradcheck(
                          [&](Tape<double>&, const Binding<double>&, auto x) {
                            return objective::info_nce(
                                x[0], x[1], x.subspan(2),
                                {.temperature = 0.7, .normalize = normalize});
                          },
                          none, in));
         }
         return worst;
       }},
      {"soft-cross-entropy",
       [&](std::uint64_t i) {
         RngStream rng(i, "xent-grad");
         Tensor<double> target({3, 4});
         for (std::size_t b = 0; b < 3; ++b) {
           const double l = rng.uniform01();
           target(b, rng.below(4)) += l;
           target(b, rng.below(4)) += 1 - l;
         }
         return module_gradcheck(
             [&](Tape<double>& tape, const Binding<double>&, auto x) {
               return objective::soft_cross_entropy(x[0], tape.constant(target));
             },
             none, {random_tensor({3, 4}, rng, 2.0)});
       }},
  };

  double worst = 0;
  std::string worst_name;
  for (const auto& [name, check] : checks) {
    for (std::uint64_t i = 0; i < 20; ++i) {
      const double err = check(i);
      if (!(err <= worst)) {
        worst = err;
        worst_name = name;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  return {worst < 1e-4 && elapsed < 120.0,
          fmt("max rel err %.2e (%s), %zu ops x 20 instances, %.1fs (< 1e-4, < 120s)", worst,
              worst_name.c_str(), checks.size(), elapsed)};
}

// ---------------------------------------------------------------------------
// 2. Scene-split exactness
// ---------------------------------------------------------------------------

Outcome scene_split() {
  const ModelDims dims{.clips = 16, .d_in = 16, .d_q = 16, .hidden = 16, .n_answers = 8};
  const grounding::GroundingIndicator<float> g(dims);
  ParameterSet<float> params;
  RngStream init(3, "init");
  g.init(params, init);
  RngStream rng(11, "split");
  std::size_t violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Tensor<float> v({16, 16}), q({1, 16});
    for (auto& x : v.values()) x = static_cast<float>(rng.normal());
    for (auto& x : q.values()) x = static_cast<float>(rng.normal());
    Tape<float> tape;
    const Binding<float> bound(tape, params, false);
    auto noise = rng.derive("gumbel/" + std::to_string(trial));
    const auto mode = trial % 2 ? grounding::GroundingMode::kHardStochastic
                                : grounding::GroundingMode::kHardDeterministic;
    const auto part = g.ground(bound, tape.constant(v), tape.constant(q), 16, mode, &noise);
    const auto c = part.causal.value();
    const auto e = part.environment.value();
    const auto causal = part.mask.causal_clips();
    bool ok = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const float sum = c[i] + e[i];
      ok &= std::memcmp(&sum, &v[i], sizeof(float)) == 0;
      // Disjoint support: the clip lives entirely in its assigned scene.
      const float other = causal[i / 16] ? e[i] : c[i];
      ok &= other == 0.0f;
    }
    violations += !ok;
  }
  return {violations == 0, fmt("%zu/1000 samples violate c+e=v or disjointness", violations)};
}

// ---------------------------------------------------------------------------
// 3. Sampler laws
// ---------------------------------------------------------------------------

Outcome sampler_laws() {
  RngStream rng(0, "acceptance/means");
  constexpr int kDraws = 100000;
  double beta = 0, uni = 0;
  for (int i = 0; i < kDraws; ++i) {
    beta += numkit::sample_beta_symmetric(1.0, rng);
    uni += numkit::sample_uniform01(rng);
  }
  beta /= kDraws;
  uni /= kDraws;
  bool ok = std::abs(beta - 0.5) <= 0.005 && std::abs(uni - 0.5) <= 0.005;
  std::string detail = fmt("beta mean %.4f, uniform mean %.4f; gumbel", beta, uni);
  for (double p : {0.5, 0.7, 0.9}) {
    RngStream g(8, "acceptance/gumbel");
    constexpr std::size_t kTrials = 10000;
    Tensor<double> logits({kTrials, 2});
    for (std::size_t r = 0; r < kTrials; ++r) {
      logits(r, 0) = std::log(p);
      logits(r, 1) = std::log(1 - p);
    }
    Tape<double> tape;
    const auto hard = numkit::gumbel_softmax_rows(tape.constant(logits), 1.0,
                                                  numkit::SelectionMode::kHard, g)
                          .value();
    double first = 0;
    for (std::size_t r = 0; r < kTrials; ++r) first += hard(r, 0);
    first /= kTrials;
    ok &= std::abs(first - p) <= 0.015;
    detail += fmt(" %.1f->%.4f", p, first);
  }
  return {ok, detail + " (tol 0.005 / 0.015)"};
}

// ---------------------------------------------------------------------------
// 4. Intervention identities
// ---------------------------------------------------------------------------

Outcome intervention_identities() {
  using namespace intervention;
  const ModelDims dims{.clips = 8, .d_in = 8, .d_q = 4, .hidden = 6, .n_answers = 4};
  const grounding::GroundingIndicator<float> g(dims);
  ParameterSet<float> params;
  RngStream init(1, "init");
  g.init(params, init);
  RngStream rng(7, "acceptance/pipeline");
  std::size_t identity_failures = 0, mix_failures = 0;
  constexpr std::size_t kB = 3, kK = 8, kTrials = 100;
  std::vector<std::size_t> rows(kB * kK);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  for (std::size_t trial = 0; trial < kTrials; ++trial) {
    Tape<float> tape;
    const Binding<float> bound(tape, params, false);
    Tensor<float> v({kB * kK, 6}), q({kB, 6}), y({kB, 4});
    for (auto& x : v.values()) x = static_cast<float>(rng.normal());
    for (auto& x : q.values()) x = static_cast<float>(rng.normal());
    for (std::size_t b = 0; b < kB; ++b) y(b, (b + trial) % 4) = 1.0f;
    const auto part = g.ground(bound, tape.constant(v), tape.constant(q), kK,
                               grounding::GroundingMode::kHardStochastic, &rng);
    const CausalFactors<float> anchor{part.causal, tape.constant(q), tape.constant(y)};

    // Degenerate draw: lambda0 = lambda1 = 1 with every sample its own partner.
    const std::size_t self[] = {0, 1, 2};
    const double ones[] = {1.0, 1.0, 1.0};
    const auto own = gather_partners(anchor, self, kK);
    const auto mixed = e_intervene(anchor, own, ones, kK);
    const auto env = i_intervene(
        part.environment, ops::gather_rows(part.environment, std::span<const std::size_t>(rows)),
        ones, kK);
    const auto video = compose_video(mixed.causal, env).value();
    const bool same = std::memcmp(video.data(), v.data(), v.size() * sizeof(float)) == 0 &&
                      mixed.question.value() == q && mixed.label.value() == y;
    identity_failures += !same;

    // Midpoint mix with a partner of a different answer.
    const std::size_t shifted[] = {1, 2, 0};
    const double halves[] = {0.5, 0.5, 0.5};
    const auto half = e_intervene(anchor, gather_partners(anchor, shifted, kK), halves, kK);
    const auto& ystar = half.label.value();
    for (std::size_t b = 0; b < kB; ++b) {
      double total = 0;
      std::size_t support = 0;
      bool expected = true;
      for (std::size_t a = 0; a < 4; ++a) {
        total += ystar(b, a);
        support += ystar(b, a) != 0.0f;
        const bool own_or_partner = y(b, a) != 0.0f || y(shifted[b], a) != 0.0f;
        expected &= own_or_partner ? ystar(b, a) == 0.5f : ystar(b, a) == 0.0f;
      }
      mix_failures += !(std::abs(total - 1.0) < 1e-6 && support == 2 && expected);
    }
  }
  return {identity_failures == 0 && mix_failures == 0,
          fmt("identity mismatches %zu/%zu, midpoint label failures %zu/%zu", identity_failures,
              kTrials, mix_failures, kTrials * kB)};
}

// ---------------------------------------------------------------------------
// 5. Loss closed forms
// ---------------------------------------------------------------------------

double nce_value(const Tensor<double>& a, const Tensor<double>& p,
                 const std::vector<Tensor<double>>& n) {
  Tape<double> tape;
  std::vector<Var<double>> negs;
  for (const auto& t : n) negs.push_back(tape.constant(t));
  return objective::info_nce(tape.constant(a), tape.constant(p),
                             std::span<const Var<double>>(negs))
      .value()
      .item();
}

double xent_value(const Tensor<double>& logits, const Tensor<double>& target) {
  Tape<double> tape;
  return objective::soft_cross_entropy(tape.constant(logits), tape.constant(target))
      .value()
      .item();
}

Outcome loss_closed_forms() {
  RngStream rng(5, "acceptance/losses");
  double nce_err = 0;
  for (std::size_t n : {1u, 5u, 10u}) {
    const auto anchor = random_tensor({4, 6}, rng);
    const auto same = random_tensor({4, 6}, rng);
    nce_err = std::max(nce_err, std::abs(nce_value(anchor, same, std::vector(n, same)) -
                                         std::log(double(n + 1))));
  }
  double lin_err = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto logits = random_tensor({3, 6}, rng, 3.0);
    Tensor<double> y({3, 6}), z({3, 6});
    for (std::size_t b = 0; b < 3; ++b) {
      y(b, rng.below(6)) = 1.0;
      z(b, rng.below(6)) = 1.0;
    }
    const double lambda = rng.uniform01();
    Tensor<double> mixed({3, 6});
    for (std::size_t i = 0; i < mixed.size(); ++i) mixed[i] = lambda * y[i] + (1 - lambda) * z[i];
    lin_err = std::max(lin_err, std::abs(xent_value(logits, mixed) -
                                         (lambda * xent_value(logits, y) +
                                          (1 - lambda) * xent_value(logits, z))));
  }
  return {nce_err <= 1e-6 && lin_err <= 1e-6,
          fmt("InfoNCE |L - ln(N+1)| max %.1e over N in {1,5,10}; soft-CE linearity err %.1e "
              "(tol 1e-6)",
              nce_err, lin_err)};
}

// ---------------------------------------------------------------------------
// 6-10. Training reproductions
// ---------------------------------------------------------------------------

struct RunSummary {
  double ood_accuracy = 0;
  double iou = 0;  // mean over test-iid and test-ood
  double gap = 0;
  double equivariance = 0;
};

trainkit::TrainConfig config_for(trainkit::TrainMode mode, std::uint64_t seed) {
  trainkit::TrainConfig c;
  c.mode = mode;
  c.lr = kLearningRate;
  c.beta = kBeta;
  c.seed = seed;
  return c;
}

class Reproduction {
 public:
  Reproduction() : corpus_(datagen::generate_corpus(gen_)) {}

  const RunSummary& run(const std::string& name, trainkit::TrainConfig cfg) {
    const auto key = name + "/" + std::to_string(cfg.seed);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const auto t0 = std::chrono::steady_clock::now();
    trainkit::EigvModel model(trainkit::model_dims(gen_, cfg), cfg.representation);
    model.init(cfg.seed);
    const auto result = trainkit::train(std::move(model), datagen::LabeledView(corpus_.train),
                                        datagen::LabeledView(corpus_.val), cfg);
    const auto iid = trainkit::evaluate(result.model, corpus_.test_iid);
    const auto ood = trainkit::evaluate(result.model, corpus_.test_ood);
    // Identical probes for every model: the probe stream depends only on a
    // fixed seed.
    RngStream probes(0, "acceptance/probes");
    const auto diag = trainkit::diagnostics(result.model, corpus_.test_ood, 400, probes);
    RunSummary s{*ood.accuracy, 0.5 * (*iid.grounding_iou + *ood.grounding_iou),
                 *diag.invariance_gap, *diag.equivariance_score};
    std::fprintf(stderr,
                 "  %-10s seed %llu: ood %.3f iou %.3f gap %.3f equi %.3f (%.0fs)\n",
                 name.c_str(), static_cast<unsigned long long>(cfg.seed), s.ood_accuracy, s.iou,
                 s.gap, s.equivariance, seconds_since(t0));
    return cache_.emplace(key, s).first->second;
  }

  const RunSummary& eigv(std::uint64_t seed) {
    return run("eigv", config_for(trainkit::TrainMode::kEigv, seed));
  }
  const RunSummary& erm(std::uint64_t seed) {
    return run("erm", config_for(trainkit::TrainMode::kErmBaseline, seed));
  }
  const RunSummary& mixup(std::uint64_t seed) {
    return run("mixup", config_for(trainkit::TrainMode::kMixupBaseline, seed));
  }
  const RunSummary& eigv_one_negative(std::uint64_t seed) {
    auto cfg = config_for(trainkit::TrainMode::kEigv, seed);
    cfg.n_visual_negatives = 1;
    cfg.n_question_negatives = 0;
    return run("eigv-N1", cfg);
  }

  const datagen::GenConfig& gen() const { return gen_; }
  const datagen::CorpusSet& corpus() const { return corpus_; }

 private:
  datagen::GenConfig gen_;
  datagen::CorpusSet corpus_;
  std::map<std::string, RunSummary> cache_;
};

template <class F>
double mean_over_seeds(F&& f) {
  double s = 0;
  for (auto seed : kSeeds) s += f(seed);
  return s / std::size(kSeeds);
}

Outcome ood_robustness(Reproduction& r) {
  const double eigv = mean_over_seeds([&](auto s) { return r.eigv(s).ood_accuracy; });
  const double erm = mean_over_seeds([&](auto s) { return r.erm(s).ood_accuracy; });
  const double mixup = mean_over_seeds([&](auto s) { return r.mixup(s).ood_accuracy; });
  const bool ok = eigv - erm >= 0.10 && eigv > mixup && mixup > erm;
  return {ok, fmt("test-ood acc eigv %.3f, mixup %.3f, erm %.3f; eigv-erm %+.3f (>= 0.100), "
                  "order eigv>mixup>erm %s",
                  eigv, mixup, erm, eigv - erm, (eigv > mixup && mixup > erm) ? "holds" : "broken")};
}

// Monte-Carlo mean IoU of a uniformly random 4-of-16 mask against a fixed
// 4-of-16 truth.
double random_mask_iou() {
  RngStream rng(0, "acceptance/random-mask");
  std::vector<bool> truth(16, false);
  for (std::size_t k = 0; k < 4; ++k) truth[k] = true;
  double s = 0;
  constexpr int kTrials = 100000;
  std::vector<std::size_t> idx(16);
  for (int t = 0; t < kTrials; ++t) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<bool> pred(16, false);
    for (std::size_t k = 0; k < 4; ++k) {
      std::swap(idx[k], idx[k + rng.below(16 - k)]);
      pred[idx[k]] = true;
    }
    s += trainkit::mask_iou(pred, truth);
  }
  return s / kTrials;
}

Outcome grounding_quality(Reproduction& r) {
  const double iou = mean_over_seeds([&](auto s) { return r.eigv(s).iou; });
  return {iou >= 0.6, fmt("eigv mean test IoU %.3f (>= 0.600); random 4-of-16 mask %.3f", iou,
                          random_mask_iou())};
}

Outcome diagnostics(Reproduction& r) {
  const double gap_eigv = mean_over_seeds([&](auto s) { return r.eigv(s).gap; });
  const double gap_erm = mean_over_seeds([&](auto s) { return r.erm(s).gap; });
  const double eq_eigv = mean_over_seeds([&](auto s) { return r.eigv(s).equivariance; });
  const double eq_erm = mean_over_seeds([&](auto s) { return r.erm(s).equivariance; });
  return {gap_eigv < gap_erm && eq_eigv > eq_erm,
          fmt("invariance gap eigv %.3f < erm %.3f; equivariance eigv %.3f > erm %.3f", gap_eigv,
              gap_erm, eq_eigv, eq_erm)};
}

Outcome negative_count(Reproduction& r) {
  const double n5 = mean_over_seeds([&](auto s) { return r.eigv(s).ood_accuracy; });
  const double n1 = mean_over_seeds([&](auto s) { return r.eigv_one_negative(s).ood_accuracy; });
  return {n5 >= n1, fmt("test-ood acc N=5 %.3f >= N=1 %.3f", n5, n1)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism(const Reproduction& r) {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "eigv_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto cfg = config_for(trainkit::TrainMode::kEigv, 42);
  cfg.epochs = 3;
  std::vector<trainkit::TrainResult> runs;
  for (int i = 0; i < 2; ++i) {
    trainkit::EigvModel model(trainkit::model_dims(r.gen(), cfg), cfg.representation);
    model.init(cfg.seed);
    runs.push_back(trainkit::train(std::move(model), datagen::LabeledView(r.corpus().train),
                                   datagen::LabeledView(r.corpus().val), cfg));
    trainkit::save_checkpoint(runs.back().model, dir / ("run" + std::to_string(i) + ".ckpt"));
  }
  const auto& a = runs[0].step_losses;
  const auto& b = runs[1].step_losses;
  const bool losses = a.size() == b.size() && !a.empty() &&
                      std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
  const nlohmann::json ha(runs[0].history), hb(runs[1].history);
  const auto ca = slurp(dir / "run0.ckpt");
  const auto cb = slurp(dir / "run1.ckpt");
  const bool ckpt = !ca.empty() && ca == cb;
  fs::remove_all(dir);
  return {losses && ha == hb && ckpt,
          fmt("%zu step losses %s, epoch history %s, checkpoints (%zu bytes) %s", a.size(),
              losses ? "identical" : "differ", ha == hb ? "identical" : "differs", ca.size(),
              ckpt ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const auto wanted = [&](int id) { return only.empty() || only.count(id) > 0; };

  Reproduction* repro = nullptr;
  std::optional<Reproduction> storage;
  const auto reproduction = [&]() -> Reproduction& {
    if (!repro) {
      std::fprintf(stderr, "generating default corpus\n");
      repro = &storage.emplace();
    }
    return *repro;
  };

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gradient integrity", gradient_integrity},
      {"scene-split exactness", scene_split},
      {"sampler laws", sampler_laws},
      {"intervention identities", intervention_identities},
      {"loss closed forms", loss_closed_forms},
      {"OOD robustness", [&] { return ood_robustness(reproduction()); }},
      {"grounding quality", [&] { return grounding_quality(reproduction()); }},
      {"invariance/equivariance diagnostics", [&] { return diagnostics(reproduction()); }},
      {"negative-count trend", [&] { return negative_count(reproduction()); }},
      {"determinism", [&] { return determinism(reproduction()); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!wanted(id)) continue;
    std::fprintf(stderr, "criterion %d: %s\n", id, criteria[i].first.c_str());
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    failures += !out.pass;
    std::printf("%s %2d %s: %s\n", out.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
