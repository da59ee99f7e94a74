#include "lrmt/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

namespace lrmt {

Tensor matmul(const Tensor& a, const Tensor& b) {
  const std::size_t m = a.rows(), k = a.cols();
  if (b.rows() != k) {
    throw ShapeError("matmul inner dimensions disagree: " + shape_str(a.shape) + " vs " +
                     shape_str(b.shape));
  }
  const std::size_t p = b.cols();
  Tensor out({m, p});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      const double a_il = a.values[i * k + l];
      for (std::size_t j = 0; j < p; ++j) {
        out.values[i * p + j] += a_il * b.values[l * p + j];
      }
    }
  }
  return out;
}

Tensor matvec(const Tensor& a, const Tensor& x) {
  const std::size_t m = a.rows(), k = a.cols();
  if (x.rank() != 1 || x.size() != k) {
    throw ShapeError("matvec dimensions disagree: " + shape_str(a.shape) + " vs " +
                     shape_str(x.shape));
  }
  Tensor out({m});
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t l = 0; l < k; ++l) acc += a.values[i * k + l] * x.values[l];
    out.values[i] = acc;
  }
  return out;
}

Tensor transpose(const Tensor& a) {
  const std::size_t m = a.rows(), n = a.cols();
  Tensor out({n, m});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.values[j * m + i] = a.values[i * n + j];
  }
  return out;
}

namespace {

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + " shapes disagree: " + shape_str(a.shape) + " vs " +
                     shape_str(b.shape));
  }
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  Tensor out(a.shape);
  for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a.values[i] + b.values[i];
  return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "sub");
  Tensor out(a.shape);
  for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a.values[i] - b.values[i];
  return out;
}

void axpy(double alpha, const Tensor& x, Tensor& y) {
  check_same_shape(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y.values[i] += alpha * x.values[i];
}

double dot(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a.values[i] * b.values[i];
  return acc;
}

double frobenius_sq(const Tensor& t) {
  double acc = 0.0;
  for (double v : t.values) acc += v * v;
  return acc;
}

double l1_norm(const Tensor& t) {
  double acc = 0.0;
  for (double v : t.values) acc += std::fabs(v);
  return acc;
}

namespace {

constexpr std::size_t kMaxSweeps = 100;
constexpr double kOrthTol = 1e-12;

// Hestenes rotations on a tall matrix until all column pairs are
// relatively orthogonal. a is M x N row-major with M >= N; v accumulates
// the right rotations (N x N, starts as identity).
void jacobi_orthogonalize(Tensor& a, Tensor& v) {
  const std::size_t m = a.shape[0], n = a.shape[1];
  double off = 0.0;
  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    off = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
          const double ai = a.values[r * n + i];
          const double aj = a.values[r * n + j];
          alpha += ai * ai;
          beta += aj * aj;
          gamma += ai * aj;
        }
        const double denom = std::sqrt(alpha * beta);
        if (denom <= 0.0) continue;
        off = std::max(off, std::fabs(gamma) / denom);
        if (std::fabs(gamma) <= kOrthTol * denom) continue;

        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t r = 0; r < m; ++r) {
          const double ai = a.values[r * n + i];
          const double aj = a.values[r * n + j];
          a.values[r * n + i] = c * ai - s * aj;
          a.values[r * n + j] = s * ai + c * aj;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vi = v.values[r * n + i];
          const double vj = v.values[r * n + j];
          v.values[r * n + i] = c * vi - s * vj;
          v.values[r * n + j] = s * vi + c * vj;
        }
      }
    }
    if (off <= kOrthTol) return;
  }
  throw NumericError("svd did not converge after " + std::to_string(kMaxSweeps) +
                     " sweeps, off-diagonal residual " + std::to_string(off));
}

// Fill column j of u (M x N) with a unit vector orthogonal to every other
// column, built from the first canonical basis vector that keeps a
// sizeable residual. Deterministic.
void complete_orthonormal_column(Tensor& u, std::size_t j) {
  const std::size_t m = u.shape[0], n = u.shape[1];
  for (std::size_t cand = 0; cand < m; ++cand) {
    std::vector<double> w(m, 0.0);
    w[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k == j) continue;
        double proj = 0.0;
        for (std::size_t r = 0; r < m; ++r) proj += w[r] * u.values[r * n + k];
        for (std::size_t r = 0; r < m; ++r) w[r] -= proj * u.values[r * n + k];
      }
    }
    double norm_sq = 0.0;
    for (double x : w) norm_sq += x * x;
    if (norm_sq > 0.25) {
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (std::size_t r = 0; r < m; ++r) u.values[r * n + j] = w[r] * inv;
      return;
    }
  }
  throw NumericError("failed to complete orthonormal basis in svd");
}

// SVD of a tall matrix (rows >= cols): a = u * diag(sigma) * v^T.
struct TallSvd {
  Tensor u;                   // M x N
  std::vector<double> sigma;  // N
  Tensor v;                   // N x N
};

TallSvd svd_tall(Tensor a) {
  const std::size_t m = a.shape[0], n = a.shape[1];
  Tensor v({n, n});
  for (std::size_t i = 0; i < n; ++i) v.values[i * n + i] = 1.0;
  jacobi_orthogonalize(a, v);

  std::vector<double> norms(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double x = a.values[r * n + j];
      acc += x * x;
    }
    norms[j] = std::sqrt(acc);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  TallSvd out;
  out.sigma.resize(n);
  out.u = Tensor({m, n});
  out.v = Tensor({n, n});
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.sigma[j] = norms[src];
    for (std::size_t r = 0; r < n; ++r) out.v.values[r * n + j] = v.values[r * n + src];
    if (norms[src] > DBL_MIN) {
      const double inv = 1.0 / norms[src];
      for (std::size_t r = 0; r < m; ++r) out.u.values[r * n + j] = a.values[r * n + src] * inv;
    }
  }
  // Numerically dead columns get an explicit orthonormal completion.
  for (std::size_t j = 0; j < n; ++j) {
    if (out.sigma[j] <= DBL_MIN) complete_orthonormal_column(out.u, j);
  }
  return out;
}

}  // namespace

SvdResult svd(const Tensor& w) {
  const std::size_t m = w.rows(), p = w.cols();
  if (!all_finite(w)) throw NumericError("svd input has non-finite entries");

  SvdResult out;
  if (m >= p) {
    TallSvd t = svd_tall(w);
    out.u = std::move(t.u);
    out.sigma = std::move(t.sigma);
    out.vt = transpose(t.v);
  } else {
    // w = (u_t s v_t^T)^T of the transpose: u <- v_t, vt <- u_t^T.
    TallSvd t = svd_tall(transpose(w));
    out.u = std::move(t.v);
    out.sigma = std::move(t.sigma);
    out.vt = transpose(t.u);
  }
  return out;
}

double nuclear_norm(const Tensor& w) {
  const SvdResult dec = svd(w);
  double acc = 0.0;
  for (double s : dec.sigma) acc += s;
  return acc;
}

std::size_t numerical_rank(const Tensor& w, double rel_tol) {
  const SvdResult dec = svd(w);
  if (dec.sigma.empty() || dec.sigma[0] <= 0.0) return 0;
  const double cutoff = rel_tol * dec.sigma[0];
  std::size_t count = 0;
  for (double s : dec.sigma) {
    if (s > cutoff) ++count;
  }
  return count;
}

double near_zero_fraction(const Tensor& w, double abs_tol) {
  if (w.size() == 0) return 0.0;
  std::size_t count = 0;
  for (double v : w.values) {
    if (std::fabs(v) < abs_tol) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(w.size());
}

}  // namespace lrmt
