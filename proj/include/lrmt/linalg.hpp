#pragma once

#include <vector>

#include "lrmt/tensor.hpp"

namespace lrmt {

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor matvec(const Tensor& a, const Tensor& x);
Tensor transpose(const Tensor& a);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
void axpy(double alpha, const Tensor& x, Tensor& y);  // y += alpha * x
double dot(const Tensor& a, const Tensor& b);

double frobenius_sq(const Tensor& t);
double l1_norm(const Tensor& t);
double nuclear_norm(const Tensor& w);

struct SvdResult {
  Tensor u;                   // m x r, orthonormal columns
  std::vector<double> sigma;  // r values, non-increasing, >= 0
  Tensor vt;                  // r x p, orthonormal rows
};

/// One-sided Jacobi SVD with r = min(m, p). Throws NumericError if the
/// column sweeps have not converged after the iteration cap.
SvdResult svd(const Tensor& w);

/// Count of singular values above rel_tol times the largest one.
std::size_t numerical_rank(const Tensor& w, double rel_tol);

/// Fraction of entries with magnitude below abs_tol.
double near_zero_fraction(const Tensor& w, double abs_tol);

}  // namespace lrmt
