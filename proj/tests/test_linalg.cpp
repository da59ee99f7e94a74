#include <doctest.h>

#include <cmath>

#include "lrmt/linalg.hpp"
#include "lrmt/rng.hpp"
#include "oracles.hpp"

using lrmt::Tensor;

namespace {

Tensor random_matrix(std::size_t m, std::size_t p, lrmt::Rng& rng) {
  Tensor t({m, p});
  for (double& v : t.values) v = rng.next_normal();
  return t;
}

double reconstruction_error(const Tensor& w, const lrmt::SvdResult& dec) {
  const std::size_t r = dec.sigma.size();
  Tensor scaled_vt = dec.vt;
  for (std::size_t l = 0; l < r; ++l)
    for (std::size_t j = 0; j < w.cols(); ++j) scaled_vt.values[l * w.cols() + j] *= dec.sigma[l];
  const Tensor rebuilt = lrmt::matmul(dec.u, scaled_vt);
  return std::sqrt(lrmt::frobenius_sq(lrmt::sub(rebuilt, w)));
}

double max_orthogonality_defect(const Tensor& q, bool columns) {
  const Tensor g = columns ? lrmt::matmul(lrmt::transpose(q), q)
                           : lrmt::matmul(q, lrmt::transpose(q));
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const double want = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::fabs(g.at(i, j) - want));
    }
  return worst;
}

void check_svd_invariants(const Tensor& w) {
  const lrmt::SvdResult dec = lrmt::svd(w);
  const std::size_t r = std::min(w.rows(), w.cols());
  REQUIRE(dec.sigma.size() == r);
  for (std::size_t l = 0; l + 1 < r; ++l) CHECK(dec.sigma[l] >= dec.sigma[l + 1]);
  for (double s : dec.sigma) CHECK(s >= 0.0);
  const double scale = std::max(1.0, std::sqrt(lrmt::frobenius_sq(w)));
  CHECK(reconstruction_error(w, dec) <= 1e-8 * scale);
  CHECK(max_orthogonality_defect(dec.u, true) <= 1e-8);
  CHECK(max_orthogonality_defect(dec.vt, false) <= 1e-8);
}

}  // namespace

TEST_CASE("matmul hand cases") {
  const Tensor eye({2, 2}, {1, 0, 0, 1});
  const Tensor col({2, 1}, {3, 4});
  CHECK(lrmt::matmul(eye, col).values == std::vector<double>{3, 4});

  const Tensor a({2, 2}, {1, 2, 3, 4});
  CHECK(lrmt::matmul(a, Tensor({2, 1}, {0, 0})).values == std::vector<double>{0, 0});
  CHECK(lrmt::matmul(a, Tensor({2, 1}, {5, 6})).values == std::vector<double>{17, 39});
}

TEST_CASE("matmul names both shapes on a mismatch") {
  const Tensor a({2, 3});
  const Tensor b({2, 2});
  try {
    lrmt::matmul(a, b);
    FAIL("expected ShapeError");
  } catch (const lrmt::ShapeError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("[2, 3]") != std::string::npos);
    CHECK(msg.find("[2, 2]") != std::string::npos);
  }
}

TEST_CASE("svd of fixed matrices") {
  const lrmt::SvdResult diag = lrmt::svd(Tensor({2, 2}, {3, 0, 0, 4}));
  CHECK(diag.sigma[0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(diag.sigma[1] == doctest::Approx(3.0).epsilon(1e-12));

  const lrmt::SvdResult eye = lrmt::svd(Tensor({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
  for (double s : eye.sigma) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("svd singular values match the Gram eigensolver oracle") {
  lrmt::Rng rng(42);
  const Tensor w = random_matrix(4, 3, rng);
  const lrmt::SvdResult dec = lrmt::svd(w);
  const std::vector<double> expected = oracle::singular_values_via_gram(w);
  REQUIRE(dec.sigma.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(std::fabs(dec.sigma[i] - expected[i]) <= 1e-8);
  }
}

TEST_CASE("svd invariants hold on assorted shapes") {
  lrmt::Rng rng(7);
  check_svd_invariants(random_matrix(5, 5, rng));
  check_svd_invariants(random_matrix(8, 3, rng));
  check_svd_invariants(random_matrix(3, 9, rng));  // wide
  check_svd_invariants(Tensor({4, 6}));            // zero matrix
  // Rank-one.
  Tensor rank1({3, 4});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) rank1.at(i, j) = (1.0 + i) * (0.5 + j);
  check_svd_invariants(rank1);
}

TEST_CASE("svd rejects non-finite input") {
  Tensor w({2, 2});
  w.values[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(lrmt::svd(w), lrmt::NumericError);
}

TEST_CASE("norm hand values") {
  const Tensor t({2, 2}, {1, -2, 0, 3});
  CHECK(lrmt::l1_norm(t) == 6.0);
  CHECK(lrmt::frobenius_sq(t) == 14.0);
  CHECK(lrmt::nuclear_norm(Tensor({2, 2}, {3, 0, 0, 4})) == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("nuclear norm dominates the Frobenius norm and matches the oracle") {
  lrmt::Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Tensor w = random_matrix(4, 3, rng);
    const double nuc = lrmt::nuclear_norm(w);
    const double fro = std::sqrt(lrmt::frobenius_sq(w));
    const std::vector<double> sigmas = oracle::singular_values_via_gram(w);
    CHECK(nuc >= fro - 1e-12);
    CHECK(fro >= sigmas[0] - 1e-12);
    double sum = 0.0;
    for (double s : sigmas) sum += s;
    CHECK(std::fabs(nuc - sum) <= 1e-8);
  }
}

TEST_CASE("kernels are bit-deterministic") {
  lrmt::Rng rng(11);
  const Tensor w = random_matrix(6, 4, rng);
  const lrmt::SvdResult a = lrmt::svd(w);
  const lrmt::SvdResult b = lrmt::svd(w);
  CHECK(a.sigma == b.sigma);
  CHECK(a.u.values == b.u.values);
  CHECK(a.vt.values == b.vt.values);
  CHECK(lrmt::matmul(w, lrmt::transpose(w)).values ==
        lrmt::matmul(w, lrmt::transpose(w)).values);
}

TEST_CASE("numerical rank and near-zero fraction helpers") {
  const Tensor w({2, 3}, {5, 0, 0, 0, 1e-6, 0});
  CHECK(lrmt::numerical_rank(w, 1e-3) == 1);
  CHECK(lrmt::numerical_rank(w, 1e-9) == 2);
  CHECK(lrmt::near_zero_fraction(w, 1e-4) == doctest::Approx(5.0 / 6.0));
}
