// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace eigv::numkit {

// Counter-based random stream. Draw n of a stream is a pure function of
// (seed, label, n), so results do not depend on the platform's <random>.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string label);

  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& label() const noexcept { return label_; }
  std::uint64_t counter() const noexcept { return counter_; }

  // Child stream with label "<label>/<sublabel>" and a fresh counter.
  RngStream derive(std::string_view sublabel) const;

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double uniform01();
  // Uniform in (0, 1); never returns an endpoint.
  double uniform_open();
  double normal();
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::string label_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t fnv1a64(std::string_view text) noexcept;
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace eigv::numkit
