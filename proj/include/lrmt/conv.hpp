#pragma once

#include <vector>

#include "lrmt/tensor.hpp"

namespace lrmt {

/// Max-pooling output plus, per output value, the flat index of the
/// input entry that won its window.
struct PoolRecord {
  Tensor output;
  std::vector<std::size_t> argmax;
};

/// Valid-padding cross-correlation. input is [C, L] or [C, H, W];
/// filters are [OC, C, K] or [OC, C, KH, KW]; output is [OC, spatial...].
/// Output extent per spatial axis is (in - kernel) / stride + 1.
Tensor conv_forward(const Tensor& input, const Tensor& filters, std::size_t stride);

struct ConvGrads {
  Tensor input;
  Tensor filters;
};

/// Exact adjoints of conv_forward with respect to input and filters.
ConvGrads conv_backward(const Tensor& input, const Tensor& filters, const Tensor& upstream,
                        std::size_t stride);

/// Per-channel max over square (or length-window, in 1-D) windows.
/// Ties break toward the lowest flat index.
PoolRecord maxpool_forward(const Tensor& input, std::size_t window, std::size_t stride);

/// Scatters upstream back to the recorded argmax positions.
Tensor maxpool_backward(const PoolRecord& record, const Tensor& upstream,
                        const std::vector<std::size_t>& input_shape);

}  // namespace lrmt
