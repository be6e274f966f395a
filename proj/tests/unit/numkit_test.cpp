// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>
#include <set>

#include "eigv/numkit/adam.hpp"
#include "eigv/numkit/parameters.hpp"
#include "eigv/numkit/samplers.hpp"
#include "gradcheck.hpp"

namespace eigv::numkit {
namespace {

using eigv::testing::gradcheck;
using eigv::testing::LossBuilder;
using eigv::testing::project;
using eigv::testing::random_tensor;

constexpr int kInstances = 20;
constexpr double kGradTol = 1e-4;

// Runs `make` on kInstances random instances and checks each gradient.
void check_op(const char* name, const std::function<std::vector<Tensor<double>>(RngStream&)>& make,
              const std::function<Var<double>(std::span<const Var<double>>)>& op) {
  for (int i = 0; i < kInstances; ++i) {
    RngStream rng(static_cast<std::uint64_t>(i), std::string("grad/") + name);
    const auto inputs = make(rng);
    const LossBuilder build = [&](Tape<double>&, std::span<const Var<double>> x) {
      RngStream proj(static_cast<std::uint64_t>(i), "projection");
      return project(op(x), proj);
    };
    EXPECT_LT(gradcheck(build, inputs), kGradTol) << name << " instance " << i;
  }
}

auto pair_of(std::size_t r, std::size_t c) {
  return [=](RngStream& rng) {
    return std::vector<Tensor<double>>{random_tensor({r, c}, rng), random_tensor({r, c}, rng)};
  };
}

auto one_of(std::size_t r, std::size_t c) {
  return [=](RngStream& rng) { return std::vector<Tensor<double>>{random_tensor({r, c}, rng)}; };
}

TEST(Tensor, ConstructionChecksCount) {
  EXPECT_THROW(Tensor<float>({2, 3}, std::vector<float>(5)), Error);
  const Tensor<float> t({2, 3}, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 3u);
  EXPECT_EQ(t(1, 2), 6.0f);
  EXPECT_EQ(t.row(1)[0], 4.0f);
  EXPECT_EQ(Tensor<float>::scalar(2.5f).item(), 2.5f);
  EXPECT_THROW((void)t.item(), Error);
}

TEST(Tape, RejectsDanglingInputs) {
  Tape<double> tape;
  tape.leaf(Tensor<double>::scalar(1.0));
  EXPECT_THROW(tape.record(Tensor<double>::scalar(0.0), {7}, nullptr, "bogus"), Error);
  try {
    tape.record(Tensor<double>::scalar(0.0), {7}, nullptr, "bogus");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kDanglingNode);
  }
}

TEST(Tape, NonFiniteOutputsAreRejected) {
  Tape<double> tape;
  const auto x = tape.leaf(Tensor<double>::scalar(-1.0));
  EXPECT_THROW(tape.leaf(Tensor<double>::scalar(std::nan(""))), Error);
  const auto big = tape.leaf(Tensor<double>::scalar(1000.0));
  try {
    (void)ops::exp(big);
    FAIL() << "overflow not reported";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNonFinite);
  }
  (void)x;
}

TEST(Tape, BackwardNeedsScalarLoss) {
  Tape<double> tape;
  const auto x = tape.leaf(Tensor<double>({2, 2}), true);
  EXPECT_THROW((void)backward(tape, x), Error);
}

TEST(Tape, UnusedLeavesGetZeroGradients) {
  Tape<double> tape;
  const auto x = tape.leaf(Tensor<double>({1, 2}, {1.0, 2.0}), true);
  const auto unused = tape.leaf(Tensor<double>({1, 3}), true);
  const auto grads = backward(tape, ops::sum(ops::mul(x, x)));
  EXPECT_EQ(grads.at(x), (Tensor<double>({1, 2}, {2.0, 4.0})));
  EXPECT_EQ(grads.at(unused), Tensor<double>::zeros({1, 3}));
}

TEST(Tape, SharedSubexpressionsAccumulate) {
  Tape<double> tape;
  const auto x = tape.leaf(Tensor<double>::scalar(3.0), true);
  const auto y = ops::add(ops::mul(x, x), x);  // x^2 + x
  EXPECT_DOUBLE_EQ(backward(tape, y).at(x).item(), 7.0);
}

TEST(Ops, MatmulMatchesIndependentProduct) {
  RngStream rng(3, "matmul");
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t r = 1 + rng.below(6), k = 1 + rng.below(6), c = 1 + rng.below(6);
    const auto a = random_tensor({r, k}, rng).cast<float>();
    const auto b = random_tensor({k, c}, rng).cast<float>();
    const auto got = matmul(a, b);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) {
        long double acc = 0;
        for (std::size_t t = 0; t < k; ++t) acc += static_cast<long double>(a(i, t)) * b(t, j);
        EXPECT_NEAR(got(i, j), static_cast<double>(acc), 1e-5);
      }
    }
  }
}

TEST(Ops, ShapeMismatchesThrow) {
  Tape<double> tape;
  const auto a = tape.constant(Tensor<double>({2, 3}));
  const auto b = tape.constant(Tensor<double>({2, 2}));
  EXPECT_THROW((void)ops::add(a, b), Error);
  EXPECT_THROW((void)ops::matmul(a, a), Error);
  EXPECT_THROW((void)ops::rowwise_dot(a, b), Error);
  EXPECT_THROW((void)ops::sum_row_groups(a, 3), Error);
  EXPECT_THROW((void)ops::slice_cols(a, 2, 2), Error);
}

TEST(Ops, SoftmaxRowsSumToOne) {
  Tape<double> tape;
  RngStream rng(1, "softmax");
  const auto p = ops::row_softmax(tape.constant(random_tensor({4, 7}, rng, 10.0)));
  for (std::size_t r = 0; r < 4; ++r) {
    double s = 0;
    for (double v : p.value().row(r)) s += v;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(OpsGradient, Elementwise) {
  check_op("add", pair_of(3, 4), [](auto x) { return ops::add(x[0], x[1]); });
  check_op("sub", pair_of(3, 4), [](auto x) { return ops::sub(x[0], x[1]); });
  check_op("mul", pair_of(3, 4), [](auto x) { return ops::mul(x[0], x[1]); });
  check_op("scale", one_of(2, 5), [](auto x) { return ops::scale(x[0], -1.7); });
  check_op("tanh", one_of(3, 4), [](auto x) { return ops::tanh(x[0]); });
  check_op("sigmoid", one_of(3, 4), [](auto x) { return ops::sigmoid(x[0]); });
  check_op("exp", one_of(3, 4), [](auto x) { return ops::exp(x[0]); });
  check_op(
      "log_floor",
      [](RngStream& rng) {
        auto t = random_tensor({3, 4}, rng);
        for (auto& v : t.values()) v = std::abs(v) + 0.2;
        return std::vector<Tensor<double>>{t};
      },
      [](auto x) { return ops::log_floor(x[0], 1e-12); });
}

TEST(OpsGradient, Linear) {
  check_op(
      "matmul",
      [](RngStream& rng) {
        return std::vector<Tensor<double>>{random_tensor({3, 4}, rng), random_tensor({4, 2}, rng)};
      },
      [](auto x) { return ops::matmul(x[0], x[1]); });
  check_op(
      "add_row",
      [](RngStream& rng) {
        return std::vector<Tensor<double>>{random_tensor({3, 4}, rng), random_tensor({1, 4}, rng)};
      },
      [](auto x) { return ops::add_row(x[0], x[1]); });
  check_op("sum", one_of(3, 4), [](auto x) { return ops::sum(x[0]); });
  check_op("mean", one_of(3, 4), [](auto x) { return ops::mean(x[0]); });
}

TEST(OpsGradient, Softmax) {
  check_op("row_softmax", one_of(3, 5), [](auto x) { return ops::row_softmax(x[0]); });
  check_op("row_log_softmax", one_of(3, 5), [](auto x) { return ops::row_log_softmax(x[0]); });
}

TEST(OpsGradient, Layout) {
  check_op("slice_cols", one_of(3, 5), [](auto x) { return ops::slice_cols(x[0], 1, 3); });
  check_op(
      "concat_cols",
      [](RngStream& rng) {
        return std::vector<Tensor<double>>{random_tensor({3, 2}, rng), random_tensor({3, 4}, rng)};
      },
      [](auto x) {
        const std::array<Var<double>, 2> parts{x[0], x[1]};
        return ops::concat_cols(std::span<const Var<double>>(parts));
      });
  check_op(
      "concat_rows",
      [](RngStream& rng) {
        return std::vector<Tensor<double>>{random_tensor({2, 3}, rng), random_tensor({4, 3}, rng)};
      },
      [](auto x) {
        const std::array<Var<double>, 2> parts{x[0], x[1]};
        return ops::concat_rows(std::span<const Var<double>>(parts));
      });
  check_op("gather_rows", one_of(4, 3), [](auto x) {
    const std::array<std::size_t, 5> rows{3, 0, 0, 2, 3};
    return ops::gather_rows(x[0], std::span<const std::size_t>(rows));
  });
  check_op("reshape", one_of(4, 3), [](auto x) { return ops::reshape(x[0], 2, 6); });
  check_op("rowwise_dot", pair_of(4, 3), [](auto x) { return ops::rowwise_dot(x[0], x[1]); });
  check_op(
      "scale_rows",
      [](RngStream& rng) {
        return std::vector<Tensor<double>>{random_tensor({4, 3}, rng), random_tensor({4, 1}, rng)};
      },
      [](auto x) { return ops::scale_rows(x[0], x[1]); });
  check_op("sum_row_groups", one_of(6, 3), [](auto x) { return ops::sum_row_groups(x[0], 3); });
}

TEST(Ops, DetachBlocksGradient) {
  Tape<double> tape;
  const auto x = tape.leaf(Tensor<double>::scalar(2.0), true);
  const auto y = ops::mul(ops::detach(x), x);
  EXPECT_DOUBLE_EQ(backward(tape, y).at(x).item(), 2.0);
}

TEST(Rng, StreamsAreDeterministicAndLabelled) {
  RngStream a(5, "x"), b(5, "x"), c(5, "y"), d(6, "x");
  for (int i = 0; i < 10; ++i) {
    const auto va = a.next_u64();
    EXPECT_EQ(va, b.next_u64());
    EXPECT_NE(va, c.next_u64());
    EXPECT_NE(va, d.next_u64());
  }
  EXPECT_EQ(a.derive("sub").label(), "x/sub");
}

TEST(Rng, UniformAndBelowRanges) {
  RngStream rng(1, "ranges");
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const double o = rng.uniform_open();
    EXPECT_GT(o, 0.0);
    EXPECT_LT(o, 1.0);
    EXPECT_LT(rng.below(7), 7u);
  }
}

TEST(Samplers, BetaAndUniformMeans) {
  RngStream rng(0, "means");
  constexpr int kDraws = 100000;
  double beta = 0, uni = 0;
  for (int i = 0; i < kDraws; ++i) {
    const double b = sample_beta_symmetric(1.0, rng);
    ASSERT_GE(b, 0.0);
    ASSERT_LE(b, 1.0);
    beta += b;
    uni += sample_uniform01(rng);
  }
  EXPECT_NEAR(beta / kDraws, 0.5, 0.005);
  EXPECT_NEAR(uni / kDraws, 0.5, 0.005);
}

TEST(Samplers, BetaVarianceFollowsAlpha) {
  // Var[Beta(a, a)] = 1 / (4 (2a + 1)).
  for (double alpha : {0.2, 0.5, 1.0, 4.0}) {
    RngStream rng(11, "beta-var");
    constexpr int kDraws = 40000;
    double s = 0, s2 = 0;
    for (int i = 0; i < kDraws; ++i) {
      const double x = sample_beta_symmetric(alpha, rng);
      s += x;
      s2 += x * x;
    }
    const double mean = s / kDraws;
    EXPECT_NEAR(s2 / kDraws - mean * mean, 1.0 / (4.0 * (2.0 * alpha + 1.0)), 0.004) << alpha;
  }
}

TEST(Samplers, BetaRejectsNonPositiveAlpha) {
  RngStream rng(0, "beta");
  EXPECT_THROW((void)sample_beta_symmetric(0.0, rng), Error);
  EXPECT_THROW((void)sample_beta_symmetric(-1.0, rng), Error);
}

TEST(Samplers, GumbelMeanIsEulerGamma) {
  RngStream rng(4, "gumbel");
  double s = 0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) s += sample_gumbel(rng);
  EXPECT_NEAR(s / kDraws, 0.5772156649, 0.01);
}

TEST(Samplers, HardGumbelSelectionMatchesSoftmax) {
  for (double p : {0.5, 0.7, 0.9}) {
    RngStream rng(8, "hard-frequency");
    Tape<double> tape;
    constexpr std::size_t kDraws = 10000;
    Tensor<double> logits({kDraws, 2});
    for (std::size_t r = 0; r < kDraws; ++r) {
      logits(r, 0) = std::log(p);
      logits(r, 1) = std::log(1 - p);
    }
    const auto hard =
        gumbel_softmax_rows(tape.constant(logits), 1.0, SelectionMode::kHard, rng).value();
    double first = 0;
    for (std::size_t r = 0; r < kDraws; ++r) {
      ASSERT_EQ(hard(r, 0) + hard(r, 1), 1.0);
      first += hard(r, 0);
    }
    EXPECT_NEAR(first / kDraws, p, 0.015) << p;
  }
}

TEST(Samplers, HardGumbelIsStraightThrough) {
  // The hard forward value is one-hot; the gradient equals the soft one.
  auto run = [](SelectionMode mode) {
    Tape<double> tape;
    RngStream rng(2, "st");
    const auto x = tape.leaf(Tensor<double>({1, 3}, {0.1, 0.5, -0.3}), true);
    const auto y = gumbel_softmax_rows(x, 0.7, mode, rng);
    Tensor<double> value = y.value();  // copy before the tape grows
    const auto w = tape.constant(Tensor<double>({1, 3}, {1.0, -2.0, 0.5}));
    return std::pair{std::move(value), backward(tape, ops::sum(ops::mul(y, w))).at(x)};
  };
  const auto [hard, g_hard] = run(SelectionMode::kHard);
  const auto [soft, g_soft] = run(SelectionMode::kSoft);
  double ones = 0;
  for (double v : hard.values()) {
    EXPECT_TRUE(v == 0.0 || v == 1.0);
    ones += v;
  }
  EXPECT_EQ(ones, 1.0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(g_hard[i], g_soft[i], 1e-15);
}

TEST(Samplers, SoftGumbelGradient) {
  for (int i = 0; i < kInstances; ++i) {
    RngStream init(static_cast<std::uint64_t>(i), "soft-gumbel-input");
    const std::vector<Tensor<double>> inputs{random_tensor({3, 4}, init)};
    const LossBuilder build = [&](Tape<double>&, std::span<const Var<double>> x) {
      RngStream noise(static_cast<std::uint64_t>(i), "soft-gumbel-noise");
      RngStream proj(static_cast<std::uint64_t>(i), "projection");
      return project(gumbel_softmax_rows(x[0], 0.8, SelectionMode::kSoft, noise), proj);
    };
    EXPECT_LT(gradcheck(build, inputs), kGradTol) << i;
  }
}

TEST(Samplers, GumbelRejectsNonPositiveTemperature) {
  Tape<double> tape;
  RngStream rng(0, "t");
  const auto x = tape.constant(Tensor<double>({1, 2}));
  EXPECT_THROW((void)gumbel_softmax_rows(x, 0.0, SelectionMode::kSoft, rng), Error);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  // Bias correction makes the first step exactly lr * sign(grad) (up to eps).
  const Tensor<double> param({1, 2}, {1.0, 1.0});
  const Tensor<double> grad({1, 2}, {0.3, -5.0});
  const auto up = adam_step(param, grad, AdamState<double>{}, AdamOptions{0.01});
  EXPECT_NEAR(up.param[0], 0.99, 1e-9);
  EXPECT_NEAR(up.param[1], 1.01, 1e-9);
  EXPECT_EQ(up.state.step, 1u);
}

TEST(Adam, MatchesReferenceRecursion) {
  AdamOptions opt{0.05, 0.9, 0.999, 1e-8};
  Tensor<double> p({1, 1}, {2.0});
  AdamState<double> state;
  double m = 0, v = 0, x = 2.0;
  for (int t = 1; t <= 5; ++t) {
    const double g = 2 * x;  // d/dx x^2
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    const double mh = m / (1 - std::pow(0.9, t)), vh = v / (1 - std::pow(0.999, t));
    x -= 0.05 * mh / (std::sqrt(vh) + 1e-8);
    auto up = adam_step(p, Tensor<double>({1, 1}, {2 * p[0]}), state, opt);
    p = up.param;
    state = up.state;
    EXPECT_NEAR(p[0], x, 1e-12) << t;
  }
}

TEST(Adam, RejectsBadInput) {
  const Tensor<double> p({1, 2});
  EXPECT_THROW((void)adam_step(p, Tensor<double>({2, 1}), AdamState<double>{}, AdamOptions{}),
               Error);
  EXPECT_THROW((void)adam_step(p, Tensor<double>({1, 2}), AdamState<double>{}, AdamOptions{0.0}),
               Error);
}

TEST(Parameters, OrderedAndUnique) {
  ParameterSet<float> set;
  set.add("a", Tensor<float>({1, 2}));
  set.add("b", Tensor<float>({3, 1}));
  EXPECT_THROW(set.add("a", Tensor<float>({1, 1})), Error);
  EXPECT_EQ(set.entries()[1].name, "b");
  EXPECT_EQ(set.scalar_count(), 5u);
  EXPECT_THROW((void)set.at("zzz"), Error);
  Tape<float> tape;
  const Binding<float> bound(tape, set, true);
  EXPECT_EQ(bound["b"].shape(), (Shape{3, 1}));
  EXPECT_THROW((void)bound["zzz"], Error);
}

}  // namespace
}  // namespace eigv::numkit
