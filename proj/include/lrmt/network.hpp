#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lrmt/conv.hpp"
#include "lrmt/tensor.hpp"

namespace lrmt {

struct ConvSpec {
  std::size_t out_channels = 1;
  std::size_t kernel = 1;  // extent per spatial axis
  std::size_t stride = 1;
  bool rectify = true;
};

struct PoolSpec {
  std::size_t window = 1;
  std::size_t stride = 1;
};

/// Seven-layer feature stack, fixed order conv, pool, conv, pool, conv,
/// pool, conv, followed by two parallel linear heads.
struct NetworkConfig {
  std::vector<std::size_t> input_shape;  // [C, L] or [C, H, W]
  std::array<ConvSpec, 4> conv;
  std::array<PoolSpec, 3> pool;
  std::size_t task_count = 1;  // m

  static NetworkConfig default_config();
};

/// Shapes after each of the seven layers, index 0 being the input.
/// Throws ShapeError naming the first layer whose output underflows.
std::vector<std::vector<std::size_t>> layer_shapes(const NetworkConfig& config);

/// Flattened length of the last conv layer's output (the feature vector).
std::size_t feature_dim(const NetworkConfig& config);

std::vector<std::size_t> filter_shape(const NetworkConfig& config, std::size_t layer);

void validate(const NetworkConfig& config);

/// The four conv filter banks.
struct FeatureExtractor {
  std::array<Tensor, 4> filters;
};

struct Heads {
  Tensor w1;  // m x p
  Tensor w2;  // m x p
};

struct Params {
  FeatureExtractor extractor;
  Heads heads;
};

/// Uniform init in [-a, a] with a = sqrt(6 / (fan_in + fan_out)) per
/// tensor; a fixed draw order makes this reproducible for a given seed.
Params init_params(const NetworkConfig& config, std::uint64_t seed);

/// Everything the backward pass needs to replay one sample.
struct ForwardTrace {
  std::array<Tensor, 4> conv_inputs;  // [0] is the sample itself
  std::array<Tensor, 4> pre_activations;
  std::array<PoolRecord, 3> pools;
  Tensor phi;  // length-p feature vector
};

ForwardTrace forward_features(const FeatureExtractor& extractor, const Tensor& x,
                              const NetworkConfig& config);

struct HeadOutputs {
  Tensor f1;
  Tensor f2;
  Tensor g;  // f1 + f2
};

HeadOutputs forward_heads(const Heads& heads, const Tensor& phi_vec);

/// Elementwise sign of the fused score; zero maps to +1.
std::vector<int> predict_labels(const Tensor& g);

}  // namespace lrmt
