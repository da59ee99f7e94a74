// Independent reference implementations used only by the tests. These
// deliberately avoid the library's own code paths for the quantity they
// check.
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lrmt/dataset.hpp"
#include "lrmt/network.hpp"
#include "lrmt/tensor.hpp"

namespace oracle {

// Plain nested-loop cross-correlation, valid padding.
lrmt::Tensor conv_naive(const lrmt::Tensor& input, const lrmt::Tensor& filters,
                        std::size_t stride);

// Plain nested-loop max-pooling (values only, no argmax bookkeeping).
lrmt::Tensor maxpool_naive(const lrmt::Tensor& input, std::size_t window, std::size_t stride);

// Singular values of w via a cyclic Jacobi eigensolver on w^T w (or
// w w^T, whichever is smaller), sorted non-increasing.
std::vector<double> singular_values_via_gram(const lrmt::Tensor& w);

// Central finite difference of f along coordinate k of xs.
double central_diff(const std::function<double(const std::vector<double>&)>& f,
                    std::vector<double> xs, std::size_t k, double eps);

// Straight-line re-implementation of the seven-layer feature stack with
// no trace caching; used to cross-check forward_features.
lrmt::Tensor forward_features_straightline(const lrmt::FeatureExtractor& extractor,
                                           const lrmt::Tensor& x,
                                           const lrmt::NetworkConfig& config);

// Per-task least-squares probe on a feature matrix (rows = samples),
// solved by Gaussian elimination on the Gram system with a tiny ridge;
// returns sign predictions per sample for one task's targets.
std::vector<int> linear_probe_predictions(const std::vector<std::vector<double>>& features,
                                          const std::vector<double>& targets);

}  // namespace oracle
