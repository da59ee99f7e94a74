#include "lrmt/conv.hpp"

#include <limits>

namespace lrmt {

namespace {

// Both 1-D and 2-D cases run through one set of loops by viewing a
// [C, L] tensor as C x 1 x L.
struct Spatial {
  std::size_t channels, height, width;
  bool two_d;
};

Spatial spatial_view(const std::vector<std::size_t>& shape, const char* what) {
  if (shape.size() == 2) return {shape[0], 1, shape[1], false};
  if (shape.size() == 3) return {shape[0], shape[1], shape[2], true};
  throw ShapeError(std::string(what) + " must be [channels, length] or [channels, rows, cols], got " +
                   shape_str(shape));
}

struct ConvDims {
  Spatial in;
  std::size_t out_channels, kh, kw, oh, ow;
};

ConvDims conv_dims(const Tensor& input, const Tensor& filters, std::size_t stride) {
  if (stride == 0) throw ConfigError("stride must be positive");
  ConvDims d;
  d.in = spatial_view(input.shape, "conv input");
  if (filters.rank() != input.rank() + 1) {
    throw ShapeError("conv filters " + shape_str(filters.shape) + " do not match input " +
                     shape_str(input.shape) + " (need one leading out-channel axis)");
  }
  d.out_channels = filters.shape[0];
  if (filters.shape[1] != d.in.channels) {
    throw ShapeError("conv filters " + shape_str(filters.shape) + " expect " +
                     std::to_string(filters.shape[1]) + " input channels, input has " +
                     std::to_string(d.in.channels));
  }
  d.kh = d.in.two_d ? filters.shape[2] : 1;
  d.kw = filters.shape.back();
  if (d.kh > d.in.height || d.kw > d.in.width) {
    throw ShapeError("conv kernel " + shape_str(filters.shape) + " larger than input " +
                     shape_str(input.shape));
  }
  d.oh = (d.in.height - d.kh) / stride + 1;
  d.ow = (d.in.width - d.kw) / stride + 1;
  return d;
}

std::vector<std::size_t> conv_output_shape(const ConvDims& d) {
  if (d.in.two_d) return {d.out_channels, d.oh, d.ow};
  return {d.out_channels, d.ow};
}

}  // namespace

Tensor conv_forward(const Tensor& input, const Tensor& filters, std::size_t stride) {
  const ConvDims d = conv_dims(input, filters, stride);
  Tensor out(conv_output_shape(d));

  const std::size_t ic = d.in.channels, ih = d.in.height, iw = d.in.width;
  for (std::size_t oc = 0; oc < d.out_channels; ++oc) {
    for (std::size_t oy = 0; oy < d.oh; ++oy) {
      for (std::size_t ox = 0; ox < d.ow; ++ox) {
        double acc = 0.0;
        for (std::size_t c = 0; c < ic; ++c) {
          for (std::size_t ky = 0; ky < d.kh; ++ky) {
            const std::size_t in_row = (c * ih + oy * stride + ky) * iw + ox * stride;
            const std::size_t f_row = ((oc * ic + c) * d.kh + ky) * d.kw;
            for (std::size_t kx = 0; kx < d.kw; ++kx) {
              acc += input.values[in_row + kx] * filters.values[f_row + kx];
            }
          }
        }
        out.values[(oc * d.oh + oy) * d.ow + ox] = acc;
      }
    }
  }
  return out;
}

ConvGrads conv_backward(const Tensor& input, const Tensor& filters, const Tensor& upstream,
                        std::size_t stride) {
  const ConvDims d = conv_dims(input, filters, stride);
  if (upstream.shape != conv_output_shape(d)) {
    throw ShapeError("conv upstream " + shape_str(upstream.shape) + " does not match output " +
                     shape_str(conv_output_shape(d)));
  }

  ConvGrads g{Tensor(input.shape), Tensor(filters.shape)};
  const std::size_t ic = d.in.channels, ih = d.in.height, iw = d.in.width;
  for (std::size_t oc = 0; oc < d.out_channels; ++oc) {
    for (std::size_t oy = 0; oy < d.oh; ++oy) {
      for (std::size_t ox = 0; ox < d.ow; ++ox) {
        const double up = upstream.values[(oc * d.oh + oy) * d.ow + ox];
        for (std::size_t c = 0; c < ic; ++c) {
          for (std::size_t ky = 0; ky < d.kh; ++ky) {
            const std::size_t in_row = (c * ih + oy * stride + ky) * iw + ox * stride;
            const std::size_t f_row = ((oc * ic + c) * d.kh + ky) * d.kw;
            for (std::size_t kx = 0; kx < d.kw; ++kx) {
              g.input.values[in_row + kx] += up * filters.values[f_row + kx];
              g.filters.values[f_row + kx] += up * input.values[in_row + kx];
            }
          }
        }
      }
    }
  }
  return g;
}

PoolRecord maxpool_forward(const Tensor& input, std::size_t window, std::size_t stride) {
  if (stride == 0) throw ConfigError("stride must be positive");
  if (window == 0) throw ConfigError("window must be positive");
  const Spatial in = spatial_view(input.shape, "maxpool input");
  const std::size_t wh = in.two_d ? window : 1;
  const std::size_t ww = window;
  if (wh > in.height || ww > in.width) {
    throw ShapeError("maxpool window " + std::to_string(window) + " exceeds input " +
                     shape_str(input.shape));
  }
  const std::size_t oh = (in.height - wh) / stride + 1;
  const std::size_t ow = (in.width - ww) / stride + 1;

  PoolRecord rec;
  rec.output = Tensor(in.two_d ? std::vector<std::size_t>{in.channels, oh, ow}
                               : std::vector<std::size_t>{in.channels, ow});
  rec.argmax.assign(rec.output.size(), 0);

  for (std::size_t c = 0; c < in.channels; ++c) {
    for (std::size_t oy = 0; oy < oh; ++oy) {
      for (std::size_t ox = 0; ox < ow; ++ox) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_idx = 0;
        // Scanning the window in ascending flat order plus strict ">"
        // keeps the lowest index on ties.
        for (std::size_t py = 0; py < wh; ++py) {
          const std::size_t row = (c * in.height + oy * stride + py) * in.width + ox * stride;
          for (std::size_t px = 0; px < ww; ++px) {
            if (input.values[row + px] > best) {
              best = input.values[row + px];
              best_idx = row + px;
            }
          }
        }
        const std::size_t out_idx = (c * oh + oy) * ow + ox;
        rec.output.values[out_idx] = best;
        rec.argmax[out_idx] = best_idx;
      }
    }
  }
  return rec;
}

Tensor maxpool_backward(const PoolRecord& record, const Tensor& upstream,
                        const std::vector<std::size_t>& input_shape) {
  if (!upstream.same_shape(record.output)) {
    throw ShapeError("maxpool upstream " + shape_str(upstream.shape) + " does not match output " +
                     shape_str(record.output.shape));
  }
  Tensor grad(input_shape);
  for (std::size_t k = 0; k < upstream.size(); ++k) {
    if (record.argmax[k] >= grad.size()) {
      throw ShapeError("maxpool argmax index " + std::to_string(record.argmax[k]) +
                       " outside input " + shape_str(input_shape));
    }
    grad.values[record.argmax[k]] += upstream.values[k];
  }
  return grad;
}

}  // namespace lrmt
