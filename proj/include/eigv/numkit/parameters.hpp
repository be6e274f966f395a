// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eigv/numkit/tape.hpp"

namespace eigv::numkit {

// Named model parameters in registration order. The order is part of the
// checkpoint layout and of the optimizer state layout.
template <class T>
class ParameterSet {
 public:
  struct Entry {
    std::string name;
    Tensor<T> value;
  };

  void add(std::string name, Tensor<T> value) {
    if (find(name) != nullptr) {
      throw Error(Errc::kInvalidArgument, "duplicate parameter " + name);
    }
    entries_.push_back(Entry{std::move(name), std::move(value)});
  }

  const Tensor<T>* find(std::string_view name) const {
    for (const auto& e : entries_) {
      if (e.name == name) return &e.value;
    }
    return nullptr;
  }

  Tensor<T>& at(std::string_view name) {
    return const_cast<Tensor<T>&>(std::as_const(*this).at(name));
  }
  const Tensor<T>& at(std::string_view name) const {
    const Tensor<T>* t = find(name);
    if (t == nullptr) {
      throw Error(Errc::kInvalidArgument, "unknown parameter " + std::string(name));
    }
    return *t;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  std::vector<Entry>& entries() noexcept { return entries_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  std::size_t scalar_count() const {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.value.size();
    return n;
  }

  template <class U>
  ParameterSet<U> cast() const {
    ParameterSet<U> out;
    for (const auto& e : entries_) out.add(e.name, e.value.template cast<U>());
    return out;
  }

 private:
  std::vector<Entry> entries_;
};

// Parameters placed on a tape as leaves.
template <class T>
class Binding {
 public:
  Binding(Tape<T>& tape, const ParameterSet<T>& params, bool requires_grad) {
    vars_.reserve(params.size());
    for (const auto& e : params.entries()) {
      vars_.emplace_back(e.name, tape.leaf(e.value, requires_grad));
    }
  }

  Var<T> operator[](std::string_view name) const {
    for (const auto& [n, v] : vars_) {
      if (n == name) return v;
    }
    throw Error(Errc::kInvalidArgument, "unbound parameter " + std::string(name));
  }

  const std::vector<std::pair<std::string, Var<T>>>& vars() const noexcept { return vars_; }

 private:
  std::vector<std::pair<std::string, Var<T>>> vars_;
};

}  // namespace eigv::numkit
