#include "caat/tensor.hpp"

#include <algorithm>
#include <unordered_set>

namespace caat {

namespace detail {

std::uint64_t next_seq() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace detail

namespace {
thread_local bool g_grad_enabled = true;
}

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }
bool NoGradGuard::grad_enabled() { return g_grad_enabled; }

Tensor Tensor::constant(Matrix value) {
  auto node = std::make_shared<detail::Node>();
  node->value = std::move(value);
  node->seq = detail::next_seq();
  return from_node(std::move(node));
}

Tensor Tensor::constant(double scalar) {
  Matrix m(1, 1);
  m(0, 0) = scalar;
  return constant(std::move(m));
}

Tensor Tensor::parameter(Matrix value) {
  auto node = std::make_shared<detail::Node>();
  node->value = std::move(value);
  node->requires_grad = true;
  node->seq = detail::next_seq();
  return from_node(std::move(node));
}

double Tensor::scalar() const {
  if (rows() != 1 || cols() != 1) {
    throw ShapeError("scalar() on tensor of shape " + std::to_string(rows()) + "x" +
                     std::to_string(cols()));
  }
  return node_->value(0, 0);
}

Matrix Tensor::grad() const {
  if (node_->grad.size() == 0) {
    return Matrix::Zero(rows(), cols());
  }
  return node_->grad;
}

void Tensor::set_value(const Matrix& value) {
  if (!node_->is_leaf) throw std::logic_error("set_value on non-leaf tensor");
  if (value.rows() != rows() || value.cols() != cols()) {
    throw ShapeError("set_value shape mismatch");
  }
  node_->value = value;
}

void Tensor::bump(Index r, Index c, double delta) {
  if (!node_->is_leaf) throw std::logic_error("bump on non-leaf tensor");
  node_->value(r, c) += delta;
}

void backward(const Tensor& loss) {
  if (!loss.defined()) throw std::invalid_argument("backward on undefined tensor");
  if (loss.rows() != 1 || loss.cols() != 1) {
    throw ShapeError("backward requires a scalar loss, got " + std::to_string(loss.rows()) +
                     "x" + std::to_string(loss.cols()));
  }

  // Collect the subgraph that requires gradients.
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> seen;
  std::vector<detail::Node*> stack{loss.node().get()};
  while (!stack.empty()) {
    detail::Node* n = stack.back();
    stack.pop_back();
    if (!n->requires_grad || seen.count(n) != 0) continue;
    seen.insert(n);
    order.push_back(n);
    for (const auto& in : n->inputs) stack.push_back(in.get());
  }
  std::sort(order.begin(), order.end(),
            [](const detail::Node* a, const detail::Node* b) { return a->seq > b->seq; });

  for (detail::Node* n : order) n->grad = Matrix::Zero(n->value.rows(), n->value.cols());

  if (!loss.node()->requires_grad) return;  // loss independent of all parameters
  loss.node()->grad(0, 0) = 1.0;
  for (detail::Node* n : order) {
    if (n->backprop) n->backprop(*n);
  }
}

void zero_grad(std::span<Tensor> params) {
  for (auto& p : params) p.clear_grad();
}

}  // namespace caat
