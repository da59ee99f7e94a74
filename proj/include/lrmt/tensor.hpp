#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrmt {

// Dimensions that do not line up.
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative kernel failed to converge, or a value left the finite range.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid run parameters.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string shape_str(const std::vector<std::size_t>& shape);
std::size_t shape_product(const std::vector<std::size_t>& shape);

/// Dense n-dimensional array of 64-bit reals, row-major.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  Tensor() = default;

  // Zero-filled tensor of the given shape.
  explicit Tensor(std::vector<std::size_t> s);

  // Tensor from explicit values; rejects size mismatches and non-finite entries.
  Tensor(std::vector<std::size_t> s, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  std::size_t rank() const { return shape.size(); }

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  // Rank-2 accessors.
  std::size_t rows() const;
  std::size_t cols() const;
  double at(std::size_t r, std::size_t c) const { return values[r * shape[1] + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * shape[1] + c]; }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }
};

bool all_finite(const Tensor& t);

}  // namespace lrmt
