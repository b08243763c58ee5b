#pragma once

#include <Eigen/Dense>

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "caat/util.hpp"

namespace caat {

/// All numerics are 64-bit, row-major dense matrices. Scalars are 1x1.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using BoolArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

namespace detail {

/// One recorded operation (or leaf) in the autodiff graph. `seq` is the
/// creation index; inputs always carry smaller seq values, so descending
/// seq order is a valid reverse topological order.
struct Node {
  Matrix value;
  Matrix grad;  // empty until touched by backward()
  bool requires_grad = false;
  bool is_leaf = true;
  std::uint64_t seq = 0;
  const char* op = "leaf";
  std::vector<std::shared_ptr<Node>> inputs;
  // Reads this->grad and accumulates into inputs' grads.
  std::function<void(Node&)> backprop;

  void accumulate(const Matrix& delta) {
    if (grad.size() == 0) {
      grad = delta;
    } else {
      grad += delta;
    }
  }
};

std::uint64_t next_seq();

}  // namespace detail

/// Disables graph recording for the enclosing scope (pure inference).
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

  static bool grad_enabled();

 private:
  bool previous_;
};

/// Value-semantic handle to a node in the autodiff graph.
class Tensor {
 public:
  Tensor() = default;

  /// Leaf with no gradient tracking.
  static Tensor constant(Matrix value);
  static Tensor constant(double scalar);
  /// Trainable leaf.
  static Tensor parameter(Matrix value);

  bool defined() const { return node_ != nullptr; }
  Index rows() const { return node_->value.rows(); }
  Index cols() const { return node_->value.cols(); }
  Index size() const { return node_->value.size(); }
  bool requires_grad() const { return node_->requires_grad; }
  bool is_leaf() const { return node_->is_leaf; }

  const Matrix& value() const { return node_->value; }
  double scalar() const;

  /// Gradient from the most recent backward(); zeros if this tensor was
  /// not reached (an unused parameter).
  Matrix grad() const;

  /// In-place update of a leaf's value (optimizer step). Graph outputs are
  /// immutable; calling this on a non-leaf throws.
  void set_value(const Matrix& value);
  /// Perturb one element in place (finite-difference probes). Leaf only.
  void bump(Index r, Index c, double delta);

  void clear_grad() { node_->grad.resize(0, 0); }

  std::shared_ptr<detail::Node> node() const { return node_; }

  /// Internal: wrap an op result. `make_op` in ops.cpp is the only caller.
  static Tensor from_node(std::shared_ptr<detail::Node> node) {
    Tensor t;
    t.node_ = std::move(node);
    return t;
  }

 private:
  std::shared_ptr<detail::Node> node_;
};

/// Reverse-mode sweep from a scalar loss. Gradients accumulate in
/// topological order from a fixed node ordering, so repeated runs are
/// bit-identical. Parameters not reachable from `loss` keep empty grads
/// (read back as zeros via Tensor::grad()).
void backward(const Tensor& loss);

/// Reset gradients on a parameter set before building the next step's graph.
void zero_grad(std::span<Tensor> params);

}  // namespace caat
