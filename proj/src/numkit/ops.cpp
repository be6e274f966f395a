// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include "eigv/numkit/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eigv::numkit {
namespace {

template <class T>
void require_same_tape(const Var<T>& a, const Var<T>& b, const char* op) {
  if (!a.valid() || !b.valid() || &a.tape() != &b.tape()) {
    throw Error(Errc::kDanglingNode, std::string(op) + ": operands on different tapes");
  }
}

template <class T>
void require_matrix(const Tensor<T>& t, const char* op) {
  if (t.rank() != 2) {
    throw Error(Errc::kShapeMismatch,
                std::string(op) + " expects a matrix, got " + shape_string(t.shape()));
  }
}

template <class T>
void require_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw Error(Errc::kShapeMismatch, std::string(op) + ": " + shape_string(a.shape()) +
                                          " vs " + shape_string(b.shape()));
  }
}

// C (+)= A * B with A: n x k, B: k x m.
template <class T>
void gemm_nn(const T* a, const T* b, T* c, std::size_t n, std::size_t k, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    T* crow = c + i * m;
    const T* arow = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const T av = arow[p];
      const T* brow = b + p * m;
      for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

// C += A * B^T with A: n x k, B: m x k.
template <class T>
void gemm_nt(const T* a, const T* b, T* c, std::size_t n, std::size_t k, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    const T* arow = a + i * k;
    for (std::size_t j = 0; j < m; ++j) {
      const T* brow = b + j * k;
      T acc{0};
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      c[i * m + j] += acc;
    }
  }
}

// C += A^T * B with A: k x n, B: k x m.
template <class T>
void gemm_tn(const T* a, const T* b, T* c, std::size_t k, std::size_t n, std::size_t m) {
  for (std::size_t p = 0; p < k; ++p) {
    const T* arow = a + p * n;
    const T* brow = b + p * m;
    for (std::size_t i = 0; i < n; ++i) {
      const T av = arow[i];
      T* crow = c + i * m;
      for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

template <class T>
void softmax_row(std::span<const T> in, std::span<T> out) {
  const T mx = *std::max_element(in.begin(), in.end());
  T total{0};
  for (std::size_t j = 0; j < in.size(); ++j) {
    out[j] = std::exp(in[j] - mx);
    total += out[j];
  }
  for (auto& v : out) v /= total;
}

}  // namespace

template <class T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
  require_matrix(a, "matmul");
  require_matrix(b, "matmul");
  if (a.cols() != b.rows()) {
    throw Error(Errc::kShapeMismatch,
                "matmul: " + shape_string(a.shape()) + " x " + shape_string(b.shape()));
  }
  Tensor<T> out({a.rows(), b.cols()});
  gemm_nn(a.data(), b.data(), out.data(), a.rows(), a.cols(), b.cols());
  return out;
}

namespace ops {

template <class T>
Var<T> add(Var<T> a, Var<T> b) {
  require_same_tape(a, b, "add");
  const auto& av = a.value();
  const auto& bv = b.value();
  require_same_shape(av, bv, "add");
  Tensor<T> out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  return a.tape().record(std::move(out), {a.id(), b.id()},
                         [](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                           for (Tensor<T>* slot : in) {
                             if (!slot) continue;
                             for (std::size_t i = 0; i < g.size(); ++i) (*slot)[i] += g[i];
                           }
                         },
                         "add");
}

template <class T>
Var<T> sub(Var<T> a, Var<T> b) {
  require_same_tape(a, b, "sub");
  const auto& av = a.value();
  const auto& bv = b.value();
  require_same_shape(av, bv, "sub");
  Tensor<T> out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  return a.tape().record(std::move(out), {a.id(), b.id()},
                         [](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                           if (in[0]) for (std::size_t i = 0; i < g.size(); ++i) (*in[0])[i] += g[i];
                           if (in[1]) for (std::size_t i = 0; i < g.size(); ++i) (*in[1])[i] -= g[i];
                         },
                         "sub");
}

template <class T>
Var<T> mul(Var<T> a, Var<T> b) {
  require_same_tape(a, b, "mul");
  const auto& av = a.value();
  const auto& bv = b.value();
  require_same_shape(av, bv, "mul");
  Tensor<T> out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  Tape<T>* tape = &a.tape();
  const NodeId ia = a.id(), ib = b.id();
  return tape->record(std::move(out), {ia, ib},
                      [tape, ia, ib](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                        const auto& x = tape->value(ia);
                        const auto& y = tape->value(ib);
                        if (in[0]) for (std::size_t i = 0; i < g.size(); ++i) (*in[0])[i] += g[i] * y[i];
                        if (in[1]) for (std::size_t i = 0; i < g.size(); ++i) (*in[1])[i] += g[i] * x[i];
                      },
                      "mul");
}

template <class T>
Var<T> scale(Var<T> a, double factor) {
  const T f = static_cast<T>(factor);
  Tensor<T> out = a.value();
  for (auto& v : out.values()) v *= f;
  return a.tape().record(std::move(out), {a.id()},
                         [f](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                           for (std::size_t i = 0; i < g.size(); ++i) (*in[0])[i] += f * g[i];
                         },
                         "scale");
}

template <class T>
Var<T> add_row(Var<T> a, Var<T> bias) {
  require_same_tape(a, bias, "add_row");
  const auto& av = a.value();
  const auto& bv = bias.value();
  require_matrix(av, "add_row");
  if (bv.size() != av.cols()) {
    throw Error(Errc::kShapeMismatch, "add_row: bias " + shape_string(bv.shape()) +
                                          " for " + shape_string(av.shape()));
  }
  Tensor<T> out = av;
  const std::size_t rows = av.rows(), cols = av.cols();
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out[r * cols + c] += bv[c];
  return a.tape().record(std::move(out), {a.id(), bias.id()},
                         [rows, cols](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                           if (in[0]) for (std::size_t i = 0; i < g.size(); ++i) (*in[0])[i] += g[i];
                           if (in[1]) {
                             for (std::size_t r = 0; r < rows; ++r)
                               for (std::size_t c = 0; c < cols; ++c) (*in[1])[c] += g[r * cols + c];
                           }
                         },
                         "add_row");
}

template <class T>
Var<T> matmul(Var<T> a, Var<T> b) {
  require_same_tape(a, b, "matmul");
  Tensor<T> out = numkit::matmul(a.value(), b.value());
  Tape<T>* tape = &a.tape();
  const NodeId ia = a.id(), ib = b.id();
  const std::size_t n = a.value().rows(), k = a.value().cols(), m = b.value().cols();
  return tape->record(std::move(out), {ia, ib},
                      [tape, ia, ib, n, k, m](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                        if (in[0]) gemm_nt(g.data(), tape->value(ib).data(), in[0]->data(), n, m, k);
                        if (in[1]) gemm_tn(tape->value(ia).data(), g.data(), in[1]->data(), n, k, m);
                      },
                      "matmul");
}

template <class T>
Var<T> tanh(Var<T> a) {
  Tensor<T> out = a.value();
  for (auto& v : out.values()) v = std::tanh(v);
  Tape<T>* tape = &a.tape();
  const NodeId self = static_cast<NodeId>(tape->size());
  return tape->record(std::move(out), {a.id()},
                      [tape, self](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                        const auto& y = tape->value(self);
                        for (std::size_t i = 0; i < g.size(); ++i)
                          (*in[0])[i] += g[i] * (T{1} - y[i] * y[i]);
                      },
                      "tanh");
}

template <class T>
Var<T> sigmoid(Var<T> a) {
  Tensor<T> out = a.value();
  for (auto& v : out.values()) v = T{1} / (T{1} + std::exp(-v));
  Tape<T>* tape = &a.tape();
  const NodeId self = static_cast<NodeId>(tape->size());
  return tape->record(std::move(out), {a.id()},
                      [tape, self](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                        const auto& y = tape->value(self);
                        for (std::size_t i = 0; i < g.size(); ++i)
                          (*in[0])[i] += g[i] * y[i] * (T{1} - y[i]);
                      },
                      "sigmoid");
}

template <class T>
Var<T> exp(Var<T> a) {
  Tensor<T> out = a.value();
  for (auto& v : out.values()) v = std::exp(v);
  Tape<T>* tape = &a.tape();
  const NodeId self = static_cast<NodeId>(tape->size());
  return tape->record(std::move(out), {a.id()},
                      [tape, self](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                        const auto& y = tape->value(self);
                        for (std::size_t i = 0; i < g.size(); ++i) (*in[0])[i] += g[i] * y[i];
                      },
                      "exp");
}

template <class T>
Var<T> log_floor(Var<T> a, double floor) {
  const T lo = static_cast<T>(floor);
  Tensor<T> out = a.value();
  for (auto& v : out.values()) v = std::log(std::max(v, lo));
  Tape<T>* tape = &a.tape();
  const NodeId ia = a.id();
  return tape->record(std::move(out), {ia},
                      [tape, ia, lo](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                        const auto& x = tape->value(ia);
                        for (std::size_t i = 0; i < g.size(); ++i)
                          if (x[i] > lo) (*in[0])[i] += g[i] / x[i];
                      },
                      "log_floor");
}

template <class T>
Var<T> row_softmax(Var<T> a) {
  const auto& av = a.value();
  require_matrix(av, "row_softmax");
  Tensor<T> out(av.shape());
  for (std::size_t r = 0; r < av.rows(); ++r) softmax_row(av.row(r), out.row(r));
  Tape<T>* tape = &a.tape();
  const NodeId self = static_cast<NodeId>(tape->size());
  return tape->record(std::move(out), {a.id()},
                      [tape, self](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                        const auto& y = tape->value(self);
                        const std::size_t cols = y.cols();
                        for (std::size_t r = 0; r < y.rows(); ++r) {
                          T dot{0};
                          for (std::size_t c = 0; c < cols; ++c) dot += g[r * cols + c] * y[r * cols + c];
                          for (std::size_t c = 0; c < cols; ++c)
                            (*in[0])[r * cols + c] += y[r * cols + c] * (g[r * cols + c] - dot);
                        }
                      },
                      "row_softmax");
}

template <class T>
Var<T> row_log_softmax(Var<T> a) {
  const auto& av = a.value();
  require_matrix(av, "row_log_softmax");
  Tensor<T> out(av.shape());
  const std::size_t cols = av.cols();
  for (std::size_t r = 0; r < av.rows(); ++r) {
    auto row = av.row(r);
    const T mx = *std::max_element(row.begin(), row.end());
    T total{0};
    for (T v : row) total += std::exp(v - mx);
    const T lse = mx + std::log(total);
    for (std::size_t c = 0; c < cols; ++c) out[r * cols + c] = row[c] - lse;
  }
  Tape<T>* tape = &a.tape();
  const NodeId self = static_cast<NodeId>(tape->size());
  return tape->record(std::move(out), {a.id()},
                      [tape, self](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                        const auto& y = tape->value(self);
                        const std::size_t cols = y.cols();
                        for (std::size_t r = 0; r < y.rows(); ++r) {
                          T gsum{0};
                          for (std::size_t c = 0; c < cols; ++c) gsum += g[r * cols + c];
                          for (std::size_t c = 0; c < cols; ++c)
                            (*in[0])[r * cols + c] += g[r * cols + c] - std::exp(y[r * cols + c]) * gsum;
                        }
                      },
                      "row_log_softmax");
}

template <class T>
Var<T> slice_cols(Var<T> a, std::size_t begin, std::size_t count) {
  const auto& av = a.value();
  require_matrix(av, "slice_cols");
  const std::size_t rows = av.rows(), cols = av.cols();
  if (begin + count > cols || count == 0) {
    throw Error(Errc::kShapeMismatch, "slice_cols [" + std::to_string(begin) + ", +" +
                                          std::to_string(count) + ") of " +
                                          shape_string(av.shape()));
  }
  Tensor<T> out({rows, count});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < count; ++c) out[r * count + c] = av[r * cols + begin + c];
  return a.tape().record(std::move(out), {a.id()},
                         [rows, cols, begin, count](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                           for (std::size_t r = 0; r < rows; ++r)
                             for (std::size_t c = 0; c < count; ++c)
                               (*in[0])[r * cols + begin + c] += g[r * count + c];
                         },
                         "slice_cols");
}

template <class T>
Var<T> concat_cols(std::span<const Var<T>> parts) {
  if (parts.empty()) throw Error(Errc::kEmptyInput, "concat_cols of nothing");
  const std::size_t rows = parts[0].value().rows();
  std::vector<std::size_t> widths;
  std::vector<NodeId> ids;
  std::size_t total = 0;
  for (const auto& p : parts) {
    require_same_tape(parts[0], p, "concat_cols");
    require_matrix(p.value(), "concat_cols");
    if (p.value().rows() != rows) {
      throw Error(Errc::kShapeMismatch, "concat_cols: row count " +
                                            std::to_string(p.value().rows()) + " vs " +
                                            std::to_string(rows));
    }
    widths.push_back(p.value().cols());
    ids.push_back(p.id());
    total += p.value().cols();
  }
  Tensor<T> out({rows, total});
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& pv = parts[k].value();
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < widths[k]; ++c) out[r * total + offset + c] = pv[r * widths[k] + c];
    offset += widths[k];
  }
  return parts[0].tape().record(
      std::move(out), ids,
      [rows, total, widths](const Tensor<T>& g, std::span<Tensor<T>*> in) {
        std::size_t off = 0;
        for (std::size_t k = 0; k < widths.size(); ++k) {
          if (in[k]) {
            for (std::size_t r = 0; r < rows; ++r)
              for (std::size_t c = 0; c < widths[k]; ++c)
                (*in[k])[r * widths[k] + c] += g[r * total + off + c];
          }
          off += widths[k];
        }
      },
      "concat_cols");
}

template <class T>
Var<T> concat_rows(std::span<const Var<T>> parts) {
  if (parts.empty()) throw Error(Errc::kEmptyInput, "concat_rows of nothing");
  const std::size_t cols = parts[0].value().cols();
  std::vector<std::size_t> sizes;
  std::vector<NodeId> ids;
  std::size_t rows = 0;
  for (const auto& p : parts) {
    require_same_tape(parts[0], p, "concat_rows");
    require_matrix(p.value(), "concat_rows");
    if (p.value().cols() != cols) {
      throw Error(Errc::kShapeMismatch, "concat_rows: column count " +
                                            std::to_string(p.value().cols()) + " vs " +
                                            std::to_string(cols));
    }
    sizes.push_back(p.value().size());
    ids.push_back(p.id());
    rows += p.value().rows();
  }
  std::vector<T> values;
  values.reserve(rows * cols);
  for (const auto& p : parts) {
    const auto v = p.value().values();
    values.insert(values.end(), v.begin(), v.end());
  }
  return parts[0].tape().record(
      Tensor<T>({rows, cols}, std::move(values)), ids,
      [sizes](const Tensor<T>& g, std::span<Tensor<T>*> in) {
        std::size_t off = 0;
        for (std::size_t k = 0; k < sizes.size(); ++k) {
          if (in[k])
            for (std::size_t i = 0; i < sizes[k]; ++i) (*in[k])[i] += g[off + i];
          off += sizes[k];
        }
      },
      "concat_rows");
}

template <class T>
Var<T> gather_rows(Var<T> a, std::span<const std::size_t> rows) {
  const auto& av = a.value();
  require_matrix(av, "gather_rows");
  const std::size_t cols = av.cols();
  Tensor<T> out({rows.size(), cols});
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= av.rows()) {
      throw Error(Errc::kShapeMismatch, "gather_rows: row " + std::to_string(rows[r]) +
                                            " of " + shape_string(av.shape()));
    }
    std::copy_n(av.data() + rows[r] * cols, cols, out.data() + r * cols);
  }
  std::vector<std::size_t> index(rows.begin(), rows.end());
  return a.tape().record(std::move(out), {a.id()},
                         [index = std::move(index), cols](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                           for (std::size_t r = 0; r < index.size(); ++r) {
                             T* dst = in[0]->data() + index[r] * cols;
                             const T* src = g.data() + r * cols;
                             for (std::size_t c = 0; c < cols; ++c) dst[c] += src[c];
                           }
                         },
                         "gather_rows");
}

template <class T>
Var<T> reshape(Var<T> a, std::size_t rows, std::size_t cols) {
  const auto& av = a.value();
  if (rows * cols != av.size()) {
    throw Error(Errc::kShapeMismatch, "reshape " + shape_string(av.shape()) + " to [" +
                                          std::to_string(rows) + "," + std::to_string(cols) + "]");
  }
  return a.tape().record(av.reshaped({rows, cols}), {a.id()},
                         [](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                           for (std::size_t i = 0; i < g.size(); ++i) (*in[0])[i] += g[i];
                         },
                         "reshape");
}

template <class T>
Var<T> rowwise_dot(Var<T> a, Var<T> b) {
  require_same_tape(a, b, "rowwise_dot");
  const auto& av = a.value();
  const auto& bv = b.value();
  require_matrix(av, "rowwise_dot");
  require_same_shape(av, bv, "rowwise_dot");
  const std::size_t rows = av.rows(), cols = av.cols();
  Tensor<T> out({rows, 1});
  for (std::size_t r = 0; r < rows; ++r) {
    T acc{0};
    for (std::size_t c = 0; c < cols; ++c) acc += av[r * cols + c] * bv[r * cols + c];
    out[r] = acc;
  }
  Tape<T>* tape = &a.tape();
  const NodeId ia = a.id(), ib = b.id();
  return tape->record(std::move(out), {ia, ib},
                      [tape, ia, ib, rows, cols](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                        const auto& x = tape->value(ia);
                        const auto& y = tape->value(ib);
                        for (std::size_t r = 0; r < rows; ++r) {
                          for (std::size_t c = 0; c < cols; ++c) {
                            if (in[0]) (*in[0])[r * cols + c] += g[r] * y[r * cols + c];
                            if (in[1]) (*in[1])[r * cols + c] += g[r] * x[r * cols + c];
                          }
                        }
                      },
                      "rowwise_dot");
}

template <class T>
Var<T> scale_rows(Var<T> a, Var<T> w) {
  require_same_tape(a, w, "scale_rows");
  const auto& av = a.value();
  const auto& wv = w.value();
  require_matrix(av, "scale_rows");
  const std::size_t rows = av.rows(), cols = av.cols();
  if (wv.size() != rows) {
    throw Error(Errc::kShapeMismatch, "scale_rows: weights " + shape_string(wv.shape()) +
                                          " for " + shape_string(av.shape()));
  }
  Tensor<T> out = av;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out[r * cols + c] *= wv[r];
  Tape<T>* tape = &a.tape();
  const NodeId ia = a.id(), iw = w.id();
  return tape->record(std::move(out), {ia, iw},
                      [tape, ia, iw, rows, cols](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                        const auto& x = tape->value(ia);
                        const auto& s = tape->value(iw);
                        for (std::size_t r = 0; r < rows; ++r) {
                          T acc{0};
                          for (std::size_t c = 0; c < cols; ++c) {
                            if (in[0]) (*in[0])[r * cols + c] += g[r * cols + c] * s[r];
                            acc += g[r * cols + c] * x[r * cols + c];
                          }
                          if (in[1]) (*in[1])[r] += acc;
                        }
                      },
                      "scale_rows");
}

template <class T>
Var<T> sum_row_groups(Var<T> a, std::size_t group) {
  const auto& av = a.value();
  require_matrix(av, "sum_row_groups");
  if (group == 0 || av.rows() % group != 0) {
    throw Error(Errc::kShapeMismatch, "sum_row_groups: " + std::to_string(av.rows()) +
                                          " rows in groups of " + std::to_string(group));
  }
  const std::size_t groups = av.rows() / group, cols = av.cols();
  Tensor<T> out({groups, cols});
  for (std::size_t r = 0; r < av.rows(); ++r)
    for (std::size_t c = 0; c < cols; ++c) out[(r / group) * cols + c] += av[r * cols + c];
  const std::size_t rows = av.rows();
  return a.tape().record(std::move(out), {a.id()},
                         [rows, cols, group](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                           for (std::size_t r = 0; r < rows; ++r)
                             for (std::size_t c = 0; c < cols; ++c)
                               (*in[0])[r * cols + c] += g[(r / group) * cols + c];
                         },
                         "sum_row_groups");
}

template <class T>
Var<T> sum(Var<T> a) {
  T total{0};
  for (T v : a.value().values()) total += v;
  return a.tape().record(Tensor<T>::scalar(total), {a.id()},
                         [](const Tensor<T>& g, std::span<Tensor<T>*> in) {
                           for (auto& v : in[0]->values()) v += g[0];
                         },
                         "sum");
}

template <class T>
Var<T> mean(Var<T> a) {
  const std::size_t n = a.value().size();
  if (n == 0) throw Error(Errc::kEmptyInput, "mean of empty tensor");
  return scale(sum(a), 1.0 / static_cast<double>(n));
}

template <class T>
Var<T> detach(Var<T> a) {
  return a.tape().constant(a.value());
}

#define EIGV_INSTANTIATE_OPS(T)                                                   \
  template Var<T> add(Var<T>, Var<T>);                                            \
  template Var<T> sub(Var<T>, Var<T>);                                            \
  template Var<T> mul(Var<T>, Var<T>);                                            \
  template Var<T> scale(Var<T>, double);                                          \
  template Var<T> add_row(Var<T>, Var<T>);                                        \
  template Var<T> matmul(Var<T>, Var<T>);                                         \
  template Var<T> tanh(Var<T>);                                                   \
  template Var<T> sigmoid(Var<T>);                                                \
  template Var<T> exp(Var<T>);                                                    \
  template Var<T> log_floor(Var<T>, double);                                      \
  template Var<T> row_softmax(Var<T>);                                            \
  template Var<T> row_log_softmax(Var<T>);                                        \
  template Var<T> slice_cols(Var<T>, std::size_t, std::size_t);                   \
  template Var<T> concat_cols(std::span<const Var<T>>);                           \
  template Var<T> concat_rows(std::span<const Var<T>>);                           \
  template Var<T> gather_rows(Var<T>, std::span<const std::size_t>);              \
  template Var<T> reshape(Var<T>, std::size_t, std::size_t);                      \
  template Var<T> rowwise_dot(Var<T>, Var<T>);                                    \
  template Var<T> scale_rows(Var<T>, Var<T>);                                     \
  template Var<T> sum_row_groups(Var<T>, std::size_t);                            \
  template Var<T> sum(Var<T>);                                                    \
  template Var<T> mean(Var<T>);                                                   \
  template Var<T> detach(Var<T>);

EIGV_INSTANTIATE_OPS(float)
EIGV_INSTANTIATE_OPS(double)
#undef EIGV_INSTANTIATE_OPS

}  // namespace ops

template Tensor<float> matmul(const Tensor<float>&, const Tensor<float>&);
template Tensor<double> matmul(const Tensor<double>&, const Tensor<double>&);

}  // namespace eigv::numkit
