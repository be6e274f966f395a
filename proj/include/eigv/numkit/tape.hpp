// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eigv/numkit/tensor.hpp"

namespace eigv::numkit {

using NodeId = std::uint32_t;

template <class T>
class Tape;

// Handle to a node recorded on a tape. Cheap to copy; only valid while the
// tape is alive.
template <class T>
class Var {
 public:
  Var() = default;
  Var(Tape<T>* tape, NodeId id) : tape_(tape), id_(id) {}

  NodeId id() const noexcept { return id_; }
  Tape<T>& tape() const { return *tape_; }
  bool valid() const noexcept { return tape_ != nullptr; }

  const Tensor<T>& value() const { return tape_->value(id_); }
  const Shape& shape() const { return value().shape(); }
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  bool requires_grad() const { return tape_->requires_grad(id_); }

 private:
  Tape<T>* tape_ = nullptr;
  NodeId id_ = 0;
};

// Receives the upstream gradient of a node and accumulates into the
// gradient slots of its inputs. A slot pointer is null when that input does
// not require a gradient.
template <class T>
using BackwardFn =
    std::function<void(const Tensor<T>& out_grad, std::span<Tensor<T>*> in_grads)>;

// Records executed operations in execution order, which is a topological
// order by construction: a node can only reference ids that already exist.
template <class T>
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var<T> leaf(Tensor<T> value, bool requires_grad = false) {
    check_finite(value, "leaf");
    nodes_.push_back(Node{std::move(value), {}, {}, requires_grad, true});
    return Var<T>(this, static_cast<NodeId>(nodes_.size() - 1));
  }

  Var<T> constant(Tensor<T> value) { return leaf(std::move(value), false); }

  // Appends an operation result. The backward function is dropped when no
  // input requires a gradient.
  Var<T> record(Tensor<T> value, std::vector<NodeId> inputs, BackwardFn<T> fn,
                const char* op_name) {
    bool needs_grad = false;
    for (NodeId in : inputs) {
      if (in >= nodes_.size()) {
        throw Error(Errc::kDanglingNode, std::string(op_name) +
                                             " references node " +
                                             std::to_string(in));
      }
      needs_grad = needs_grad || nodes_[in].requires_grad;
    }
    check_finite(value, op_name);
    if (!needs_grad) fn = nullptr;
    nodes_.push_back(
        Node{std::move(value), std::move(inputs), std::move(fn), needs_grad, false});
    return Var<T>(this, static_cast<NodeId>(nodes_.size() - 1));
  }

  const Tensor<T>& value(NodeId id) const { return node(id).value; }
  bool requires_grad(NodeId id) const { return node(id).requires_grad; }
  bool is_leaf(NodeId id) const { return node(id).is_leaf; }
  std::size_t size() const noexcept { return nodes_.size(); }

  const std::vector<NodeId>& inputs(NodeId id) const { return node(id).inputs; }
  const BackwardFn<T>& backward_fn(NodeId id) const { return node(id).backward; }

 private:
  struct Node {
    Tensor<T> value;
    std::vector<NodeId> inputs;
    BackwardFn<T> backward;
    bool requires_grad = false;
    bool is_leaf = false;
  };

  const Node& node(NodeId id) const {
    if (id >= nodes_.size()) {
      throw Error(Errc::kDanglingNode, "node " + std::to_string(id) +
                                           " not on tape of size " +
                                           std::to_string(nodes_.size()));
    }
    return nodes_[id];
  }

  static void check_finite(const Tensor<T>& value, const char* op_name) {
    if (!value.all_finite()) {
      throw Error(Errc::kNonFinite, std::string("output of ") + op_name);
    }
  }

  std::vector<Node> nodes_;
};

// Gradients of a scalar loss with respect to the tape's requires_grad leaves.
template <class T>
class Gradients {
 public:
  bool contains(const Var<T>& v) const { return grads_.count(v.id()) != 0; }

  const Tensor<T>& at(const Var<T>& v) const {
    auto it = grads_.find(v.id());
    if (it == grads_.end()) {
      throw Error(Errc::kInvalidArgument,
                  "no gradient for node " + std::to_string(v.id()));
    }
    return it->second;
  }

  std::size_t size() const noexcept { return grads_.size(); }

  void set(NodeId id, Tensor<T> g) { grads_[id] = std::move(g); }

 private:
  std::unordered_map<NodeId, Tensor<T>> grads_;
};

// Reverse sweep from `loss`. Every requires_grad leaf gets an entry; leaves
// that do not influence the loss receive zeros.
template <class T>
Gradients<T> backward(const Tape<T>& tape, const Var<T>& loss) {
  if (&loss.tape() != &tape) {
    throw Error(Errc::kDanglingNode, "loss belongs to a different tape");
  }
  const NodeId root = loss.id();
  const Tensor<T>& root_value = tape.value(root);
  if (root_value.size() != 1) {
    throw Error(Errc::kShapeMismatch, "backward needs a scalar loss, got shape " +
                                          shape_string(root_value.shape()));
  }

  std::vector<std::optional<Tensor<T>>> grads(static_cast<std::size_t>(root) + 1);
  grads[root] = Tensor<T>::full(root_value.shape(), T{1});

  std::vector<Tensor<T>*> slots;
  for (std::size_t i = root + 1; i-- > 0;) {
    const NodeId id = static_cast<NodeId>(i);
    if (!grads[i] || tape.is_leaf(id)) continue;
    const auto& fn = tape.backward_fn(id);
    if (!fn) continue;
    const auto& inputs = tape.inputs(id);
    slots.assign(inputs.size(), nullptr);
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      const NodeId in = inputs[k];
      if (!tape.requires_grad(in)) continue;
      if (!grads[in]) grads[in] = Tensor<T>::zeros(tape.value(in).shape());
      slots[k] = &*grads[in];
    }
    fn(*grads[i], slots);
  }

  Gradients<T> out;
  for (std::size_t i = 0; i < tape.size(); ++i) {
    const NodeId id = static_cast<NodeId>(i);
    if (!tape.is_leaf(id) || !tape.requires_grad(id)) continue;
    if (i < grads.size() && grads[i]) {
      out.set(id, std::move(*grads[i]));
    } else {
      out.set(id, Tensor<T>::zeros(tape.value(id).shape()));
    }
  }
  return out;
}

}  // namespace eigv::numkit
