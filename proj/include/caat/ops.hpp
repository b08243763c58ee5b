#pragma once

#include "caat/tensor.hpp"

namespace caat {

// Differentiable free functions over Tensor. Every op validates shapes,
// checks the result for non-finite values, and registers its backward rule
// when gradients are enabled.

/// Standard matrix product [m x k] * [k x n] -> [m x n].
Tensor matmul(const Tensor& a, const Tensor& b);

Tensor transpose(const Tensor& x);

/// Elementwise sum; shapes must match.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor hadamard(const Tensor& a, const Tensor& b);

/// Elementwise alpha*x + beta.
Tensor affine(const Tensor& x, double alpha, double beta);

/// [T x d] + broadcast row [1 x d].
Tensor add_row_broadcast(const Tensor& x, const Tensor& row);

/// Row-wise softmax, stabilized by subtracting the row max.
Tensor softmax_rows(const Tensor& x);

/// Columns of a followed by columns of b; row counts must agree.
Tensor concat_features(const Tensor& a, const Tensor& b);

/// Contiguous column block [start, start+width).
Tensor slice_cols(const Tensor& x, Index start, Index width);

/// Mean over all elements of (pred - target)^2, as a scalar tensor.
Tensor mse_loss(const Tensor& pred, const Tensor& target);

/// Mean binary cross-entropy on logits, computed in stable form.
Tensor bce_with_logits_loss(const Tensor& logits, const Tensor& targets);

Tensor relu(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor tanh_activation(const Tensor& x);

/// Row-wise layer normalization with learned gain/bias rows [1 x d].
/// Normalization uses the population variance of each row plus eps.
Tensor layer_norm_rows(const Tensor& x, const Tensor& gain, const Tensor& bias,
                       double eps = 1e-5);

Tensor sum_all(const Tensor& x);

/// Inverted dropout: keep with probability 1-rate and scale by 1/(1-rate).
/// rate == 0 returns x unchanged. Mask draws come from `rng` in row-major
/// element order, so results are deterministic for a given engine state.
Tensor dropout(const Tensor& x, double rate, Rng& rng);

}  // namespace caat
