#include "lrmt/network.hpp"

#include <cmath>
#include <string>

#include "lrmt/linalg.hpp"
#include "lrmt/rng.hpp"

namespace lrmt {

NetworkConfig NetworkConfig::default_config() {
  NetworkConfig c;
  c.input_shape = {1, 64};
  c.conv = {{{4, 5, 1, true}, {8, 3, 1, true}, {8, 3, 1, true}, {8, 3, 1, true}}};
  c.pool = {{{2, 2}, {2, 2}, {2, 2}}};
  c.task_count = 8;
  return c;
}

namespace {

std::vector<std::size_t> conv_out_shape(const std::vector<std::size_t>& in, const ConvSpec& spec,
                                        std::size_t layer_index) {
  std::vector<std::size_t> out{spec.out_channels};
  for (std::size_t axis = 1; axis < in.size(); ++axis) {
    if (spec.kernel > in[axis]) {
      throw ShapeError("layer " + std::to_string(layer_index) + " (conv): kernel " +
                       std::to_string(spec.kernel) + " exceeds extent " +
                       std::to_string(in[axis]) + " of input " + shape_str(in));
    }
    out.push_back((in[axis] - spec.kernel) / spec.stride + 1);
  }
  return out;
}

std::vector<std::size_t> pool_out_shape(const std::vector<std::size_t>& in, const PoolSpec& spec,
                                        std::size_t layer_index) {
  std::vector<std::size_t> out{in[0]};
  for (std::size_t axis = 1; axis < in.size(); ++axis) {
    if (spec.window > in[axis]) {
      throw ShapeError("layer " + std::to_string(layer_index) + " (pool): window " +
                       std::to_string(spec.window) + " exceeds extent " +
                       std::to_string(in[axis]) + " of input " + shape_str(in));
    }
    out.push_back((in[axis] - spec.window) / spec.stride + 1);
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::size_t>> layer_shapes(const NetworkConfig& config) {
  if (config.input_shape.size() != 2 && config.input_shape.size() != 3) {
    throw ShapeError("input_shape must be [channels, length] or [channels, rows, cols], got " +
                     shape_str(config.input_shape));
  }
  for (std::size_t extent : config.input_shape) {
    if (extent == 0) throw ShapeError("input_shape has a zero extent: " + shape_str(config.input_shape));
  }
  std::vector<std::vector<std::size_t>> shapes;
  shapes.push_back(config.input_shape);
  // Layers 1..7: conv, pool, conv, pool, conv, pool, conv.
  std::size_t layer = 1;
  for (std::size_t block = 0; block < 3; ++block) {
    shapes.push_back(conv_out_shape(shapes.back(), config.conv[block], layer++));
    shapes.push_back(pool_out_shape(shapes.back(), config.pool[block], layer++));
  }
  shapes.push_back(conv_out_shape(shapes.back(), config.conv[3], layer++));
  return shapes;
}

std::size_t feature_dim(const NetworkConfig& config) {
  return shape_product(layer_shapes(config).back());
}

std::vector<std::size_t> filter_shape(const NetworkConfig& config, std::size_t layer) {
  const bool two_d = config.input_shape.size() == 3;
  std::size_t in_channels = config.input_shape[0];
  for (std::size_t l = 0; l < layer; ++l) in_channels = config.conv[l].out_channels;
  const ConvSpec& spec = config.conv[layer];
  if (two_d) return {spec.out_channels, in_channels, spec.kernel, spec.kernel};
  return {spec.out_channels, in_channels, spec.kernel};
}

void validate(const NetworkConfig& config) {
  for (const ConvSpec& c : config.conv) {
    if (c.out_channels == 0 || c.kernel == 0 || c.stride == 0) {
      throw ConfigError("conv layers need positive channels, kernel, and stride");
    }
  }
  for (const PoolSpec& p : config.pool) {
    if (p.window == 0 || p.stride == 0) {
      throw ConfigError("pool layers need positive window and stride");
    }
  }
  if (config.task_count == 0) throw ConfigError("task_count must be positive");
  if (feature_dim(config) == 0) {
    throw ShapeError("configuration yields an empty feature vector");
  }
}

Params init_params(const NetworkConfig& config, std::uint64_t seed) {
  validate(config);
  Rng rng(seed);
  Params params;
  const std::size_t spatial_axes = config.input_shape.size() - 1;
  for (std::size_t l = 0; l < 4; ++l) {
    const std::vector<std::size_t> fs = filter_shape(config, l);
    std::size_t kernel_volume = 1;
    for (std::size_t axis = 0; axis < spatial_axes; ++axis) kernel_volume *= config.conv[l].kernel;
    const double fan_in = static_cast<double>(fs[1] * kernel_volume);
    const double fan_out = static_cast<double>(fs[0] * kernel_volume);
    const double a = std::sqrt(6.0 / (fan_in + fan_out));
    Tensor f(fs);
    for (double& v : f.values) v = rng.next_symmetric(a);
    params.extractor.filters[l] = std::move(f);
  }
  const std::size_t p = feature_dim(config);
  const std::size_t m = config.task_count;
  const double a = std::sqrt(6.0 / static_cast<double>(p + m));
  params.heads.w1 = Tensor({m, p});
  for (double& v : params.heads.w1.values) v = rng.next_symmetric(a);
  params.heads.w2 = Tensor({m, p});
  for (double& v : params.heads.w2.values) v = rng.next_symmetric(a);
  return params;
}

namespace {

Tensor rectified(const Tensor& t) {
  Tensor out(t.shape);
  for (std::size_t i = 0; i < t.size(); ++i) out.values[i] = t.values[i] > 0.0 ? t.values[i] : 0.0;
  return out;
}

}  // namespace

ForwardTrace forward_features(const FeatureExtractor& extractor, const Tensor& x,
                              const NetworkConfig& config) {
  if (x.shape != config.input_shape) {
    throw ShapeError("input " + shape_str(x.shape) + " does not match configured shape " +
                     shape_str(config.input_shape));
  }
  for (std::size_t l = 0; l < 4; ++l) {
    if (extractor.filters[l].shape != filter_shape(config, l)) {
      throw ShapeError("layer " + std::to_string(2 * l + 1) + " (conv): filters " +
                       shape_str(extractor.filters[l].shape) + " do not match configured " +
                       shape_str(filter_shape(config, l)));
    }
  }

  ForwardTrace trace;
  Tensor current = x;
  for (std::size_t block = 0; block < 3; ++block) {
    trace.conv_inputs[block] = current;
    trace.pre_activations[block] =
        conv_forward(current, extractor.filters[block], config.conv[block].stride);
    current = config.conv[block].rectify ? rectified(trace.pre_activations[block])
                                         : trace.pre_activations[block];
    trace.pools[block] = maxpool_forward(current, config.pool[block].window, config.pool[block].stride);
    current = trace.pools[block].output;
  }
  trace.conv_inputs[3] = current;
  trace.pre_activations[3] = conv_forward(current, extractor.filters[3], config.conv[3].stride);
  current = config.conv[3].rectify ? rectified(trace.pre_activations[3]) : trace.pre_activations[3];

  trace.phi = Tensor({current.size()});
  trace.phi.values = current.values;
  return trace;
}

HeadOutputs forward_heads(const Heads& heads, const Tensor& phi_vec) {
  if (heads.w1.shape != heads.w2.shape) {
    throw ShapeError("heads disagree: " + shape_str(heads.w1.shape) + " vs " +
                     shape_str(heads.w2.shape));
  }
  HeadOutputs out;
  out.f1 = matvec(heads.w1, phi_vec);
  out.f2 = matvec(heads.w2, phi_vec);
  out.g = add(out.f1, out.f2);
  return out;
}

std::vector<int> predict_labels(const Tensor& g) {
  std::vector<int> labels(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) labels[i] = g.values[i] >= 0.0 ? 1 : -1;
  return labels;
}

}  // namespace lrmt
