#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "syncert/cert.hpp"
#include "syncert/linalg.hpp"
#include "syncert/ring_oscillator.hpp"
#include "syncert/rng.hpp"

using namespace syncert;

namespace {

MatX random_symmetric(int n, SplitMix64& rng, double scale = 1.0) {
  MatX m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = rng.uniform(-scale, scale);
  }
  return MatX(0.5 * (m + m.transpose()));
}

// Counts eigenvalues of `a` strictly below t via the inertia of the LDL
// pivots of (a - t·I); independent of the Jacobi path.
int eigs_below(MatX a, double t) {
  const int n = static_cast<int>(a.rows());
  a.diagonal().array() -= t;
  int neg = 0;
  for (int k = 0; k < n; ++k) {
    double piv = a(k, k);
    if (std::abs(piv) < 1e-300) piv = 1e-300;
    if (piv < 0.0) ++neg;
    for (int i = k + 1; i < n; ++i) {
      const double f = a(i, k) / piv;
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return neg;
}

// k-th (ascending, 0-based) root of det(M - λI) by bisection on the inertia
// count, bracketed by Gershgorin bounds.
double kth_eig_bisect(const MatX& m, int k) {
  const int n = static_cast<int>(m.rows());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < n; ++i) {
    double radius = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) radius += std::abs(m(i, j));
    }
    lo = std::min(lo, m(i, i) - radius);
    hi = std::max(hi, m(i, i) + radius);
  }
  lo -= 1.0;
  hi += 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eigs_below(m, mid) <= k) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double det_cofactor(const MatX& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 1) return m(0, 0);
  double det = 0.0;
  double sign = 1.0;
  for (int c = 0; c < n; ++c) {
    MatX minor(n - 1, n - 1);
    for (int i = 1; i < n; ++i) {
      int cc = 0;
      for (int j = 0; j < n; ++j) {
        if (j == c) continue;
        minor(i - 1, cc++) = m(i, j);
      }
    }
    det += sign * m(0, c) * det_cofactor(minor);
    sign = -sign;
  }
  return det;
}

}  // namespace

TEST_CASE("SymMatrix symmetrizes exactly and validates input") {
  MatX m(2, 2);
  m << 1.0, 2.0, 4.0, 3.0;
  SymMatrix s(m);
  CHECK(s(0, 1) == s(1, 0));
  CHECK(s(0, 1) == doctest::Approx(3.0));

  MatX bad(2, 3);
  bad.setZero();
  CHECK_THROWS_AS(SymMatrix{bad}, InputError);

  MatX nonfinite = MatX::Zero(2, 2);
  nonfinite(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SymMatrix{nonfinite}, InputError);
}

TEST_CASE("sym_eigs: identity and 2x2 swap") {
  const EigenDecomposition id3 = sym_eigs(SymMatrix(MatX::Identity(3, 3)));
  for (int i = 0; i < 3; ++i) CHECK(id3.eigenvalues[i] == doctest::Approx(1.0).epsilon(1e-14));

  MatX swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  const EigenDecomposition e = sym_eigs(SymMatrix(swap));
  CHECK(e.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(e.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sym_eigs: random 5x5 matches the inertia-bisection oracle") {
  SplitMix64 rng(101);
  const MatX m = random_symmetric(5, rng, 2.0);
  const EigenDecomposition e = sym_eigs(SymMatrix(m));
  for (int k = 0; k < 5; ++k) {
    CHECK(std::abs(e.eigenvalues[k] - kth_eig_bisect(m, k)) <= 1e-8);
  }
}

TEST_CASE("sym_eigs invariants: residual, orthonormality, trace, determinant") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng.next() % 8);
    const MatX m = random_symmetric(n, rng, 3.0);
    const SymMatrix s(m);
    const EigenDecomposition e = sym_eigs(s);
    const double scale = std::max(s.mat().norm(), 1e-30);

    for (int i = 0; i < n; ++i) {
      const VecX resid = s.mat() * e.eigenvectors.col(i) - e.eigenvalues[i] * e.eigenvectors.col(i);
      CHECK(resid.norm() <= 1e-10 * scale);
    }
    const MatX qtq = e.eigenvectors.transpose() * e.eigenvectors;
    CHECK((qtq - MatX::Identity(n, n)).norm() <= 1e-10);
    for (int i = 0; i + 1 < n; ++i) CHECK(e.eigenvalues[i] <= e.eigenvalues[i + 1]);

    CHECK(std::abs(e.eigenvalues.sum() - s.mat().trace()) <= 1e-9 * scale);
    if (n <= 4) {
      const double det = det_cofactor(s.mat());
      CHECK(std::abs(e.eigenvalues.prod() - det) <=
            1e-9 * std::max(std::abs(det), std::pow(scale, n)));
    }
  }
}

TEST_CASE("kron: identity blocks, scalar case, elementwise definition") {
  MatX e1 = MatX::Zero(2, 2);
  e1(0, 0) = 1.0;
  const MatX k1 = kron(MatX::Identity(2, 2), e1);
  MatX expect = MatX::Zero(4, 4);
  expect(0, 0) = 1.0;
  expect(2, 2) = 1.0;
  CHECK((k1 - expect).norm() == 0.0);

  SplitMix64 rng(13);
  const MatX b = random_symmetric(3, rng);
  MatX two(1, 1);
  two << 2.0;
  CHECK((kron(two, b) - 2.0 * b).norm() == 0.0);

  // path on two nodes against the elementwise definition
  MatX lap(2, 2);
  lap << 1.0, -1.0, -1.0, 1.0;
  const MatX k = kron(lap, e1);
  REQUIRE(k.rows() == 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(k(i, j) == lap(i / 2, j / 2) * e1(i % 2, j % 2));
    }
  }
}

TEST_CASE("kron mixed-product identity on random instances") {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    MatX a(2, 3), c(3, 2), b(3, 2), d(2, 3);
    for (int i = 0; i < a.size(); ++i) a.data()[i] = rng.uniform(-1, 1);
    for (int i = 0; i < b.size(); ++i) b.data()[i] = rng.uniform(-1, 1);
    for (int i = 0; i < c.size(); ++i) c.data()[i] = rng.uniform(-1, 1);
    for (int i = 0; i < d.size(); ++i) d.data()[i] = rng.uniform(-1, 1);
    const MatX lhs = kron(a, b) * kron(c, d);
    const MatX rhs = kron(MatX(a * c), MatX(b * d));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("factor_half_sym: projector, diagonal case, indefinite rejection") {
  const MatX q1 = factor_half_sym(SymMatrix(MatX::Identity(2, 2)), 0);
  MatX e1 = MatX::Zero(2, 2);
  e1(0, 0) = 1.0;
  CHECK((q1.transpose() * q1 - e1).norm() <= 1e-9);

  MatX p = MatX::Zero(2, 2);
  p(0, 0) = 4.0;
  p(1, 1) = 1.0;
  const MatX q2 = factor_half_sym(SymMatrix(p), 0);
  MatX expect = MatX::Zero(2, 2);
  expect(0, 0) = 4.0;
  CHECK((q2.transpose() * q2 - expect).norm() <= 1e-9);

  MatX indef(2, 2);
  indef << 0.0, 1.0, 1.0, 0.0;  // P·E1 + E1·P indefinite for this P
  CHECK_THROWS_AS(factor_half_sym(SymMatrix(indef), 0), FactorizationError);
}

TEST_CASE("factor_half_sym is reproducible and factors random SPD matrices") {
  SplitMix64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.next() % 4);
    MatX a = random_symmetric(n, rng);
    MatX p = a * a.transpose() + MatX::Identity(n, n);  // SPD, so columns qualify
    const SymMatrix ps{p};
    const int k = static_cast<int>(rng.next() % n);
    // PEk + EkP ⪰ 0 needs the off-diagonal of column k cleared
    MatX restricted = ps.mat();
    for (int i = 0; i < n; ++i) {
      if (i != k) {
        restricted(i, k) = 0.0;
        restricted(k, i) = 0.0;
      }
    }
    const SymMatrix rs{restricted};
    const MatX q = factor_half_sym(rs, k);
    CHECK((q.transpose() * q - half_sym_product(rs, k)).norm() <= 1e-9);

    const MatX q_again = factor_half_sym(rs, k);
    CHECK((q - q_again).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("is_negative_definite basics") {
  const NegDefResult a = is_negative_definite(SymMatrix(MatX(-MatX::Identity(3, 3))), 0.5);
  CHECK(a.negative_definite);
  CHECK(a.lambda_max == doctest::Approx(-1.0).epsilon(1e-14));

  MatX swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  const NegDefResult b = is_negative_definite(SymMatrix(swap), 0.0);
  CHECK_FALSE(b.negative_definite);
  CHECK(b.lambda_max == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("is_negative_definite on a certified ring aggregate: lambda_max = -eps") {
  // hull certificate for a well-inside ring instance; the binding vertex
  // aggregate has lambda_max exactly -eps
  const double gain = std::cbrt(1.8);
  const RingOscillatorParams params = RingOscillatorParams::validated(
      3, VecX::Ones(3), VecX::Constant(3, gain), VecX::Ones(3), VecX::Zero(3));
  const CertifyResult res =
      certify_hull_cone(hull_from_box(box_bound(params)), VecX::Zero(3), CouplingSpec::all(3), {});
  REQUIRE(res.feasible());
  const Certificate& cert = *res.certificate;

  double worst = -std::numeric_limits<double>::infinity();
  for (const MatX& z : hull_from_box(box_bound(params)).vertices) {
    const MatX red = reduced_matrix(z, cert.lambda2s);
    const MatX agg = cert.P.mat() * red + red.transpose() * cert.P.mat();
    const NegDefResult nd = is_negative_definite(SymMatrix(agg), cert.epsilon * (1.0 - 1e-9));
    CHECK(nd.negative_definite);
    worst = std::max(worst, nd.lambda_max);
  }
  CHECK(worst == doctest::Approx(-cert.epsilon).epsilon(1e-9));
}
