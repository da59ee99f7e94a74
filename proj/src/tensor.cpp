#include "lrmt/tensor.hpp"

#include <cmath>
#include <utility>

namespace lrmt {

std::string shape_str(const std::vector<std::size_t>& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(shape[i]);
  }
  out += "]";
  return out;
}

std::size_t shape_product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t extent : shape) n *= extent;
  return n;
}

namespace {

void check_extents(const std::vector<std::size_t>& shape) {
  for (std::size_t extent : shape) {
    if (extent == 0) {
      throw ShapeError("tensor extents must be positive, got " + shape_str(shape));
    }
  }
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
  check_extents(shape);
  values.assign(shape_product(shape), 0.0);
}

Tensor::Tensor(std::vector<std::size_t> s, std::vector<double> v)
    : shape(std::move(s)), values(std::move(v)) {
  check_extents(shape);
  if (shape_product(shape) != values.size()) {
    throw ShapeError("shape " + shape_str(shape) + " expects " +
                     std::to_string(shape_product(shape)) + " values, got " +
                     std::to_string(values.size()));
  }
  for (double v_i : values) {
    if (!std::isfinite(v_i)) {
      throw NumericError("tensor constructed with non-finite value");
    }
  }
}

std::size_t Tensor::rows() const {
  if (rank() != 2) throw ShapeError("expected a matrix, got shape " + shape_str(shape));
  return shape[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2) throw ShapeError("expected a matrix, got shape " + shape_str(shape));
  return shape[1];
}

bool all_finite(const Tensor& t) {
  for (double v : t.values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace lrmt
