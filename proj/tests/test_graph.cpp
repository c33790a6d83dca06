#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "syncert/graph.hpp"
#include "syncert/rng.hpp"

using namespace syncert;

namespace {

ComponentGraph complete_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) edges.push_back({i, j, 1.0});
  }
  return ComponentGraph(n, edges, true);
}

ComponentGraph cycle_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 1; i <= n; ++i) edges.push_back({i, i % n + 1, 1.0});
  return ComponentGraph(n, edges, true);
}

}  // namespace

TEST_CASE("build_laplacian on definitional cases") {
  const LaplacianMatrix single = build_laplacian(ComponentGraph(2, {{1, 2, 3.0}}, true));
  MatX expect(2, 2);
  expect << 3.0, -3.0, -3.0, 3.0;
  CHECK((single.matrix - expect).norm() == 0.0);
  CHECK(single.lambda2 == doctest::Approx(6.0).epsilon(1e-12));  // single edge: 2w

  const LaplacianMatrix empty = build_laplacian(ComponentGraph(4, {}, true));
  CHECK(empty.matrix.isZero(0.0));
  CHECK(empty.lambda2 == 0.0);
  CHECK(empty.no_positive_lambda2);

  const LaplacianMatrix k3 = build_laplacian(complete_graph(3));
  for (int i = 0; i < 3; ++i) {
    CHECK(k3.matrix(i, i) == doctest::Approx(2.0));
    for (int j = 0; j < 3; ++j) {
      if (i != j) CHECK(k3.matrix(i, j) == doctest::Approx(-1.0));
    }
  }
}

TEST_CASE("lambda2 closed forms: complete graphs, cycles, single edge") {
  for (int n = 2; n <= 10; ++n) {
    const LaplacianMatrix l = build_laplacian(complete_graph(n));
    CHECK(std::abs(lambda2_symmetric(l) - n) <= 1e-9);
    CHECK(std::abs(l.lambda2 - n) <= 1e-9);
  }
  for (int n = 3; n <= 10; ++n) {
    const LaplacianMatrix l = build_laplacian(cycle_graph(n));
    const double expect = 2.0 * (1.0 - std::cos(2.0 * M_PI / n));
    CHECK(std::abs(lambda2_symmetric(l) - expect) <= 1e-9);
  }
  const LaplacianMatrix c4 = build_laplacian(cycle_graph(4));
  CHECK(lambda2_symmetric(c4) == doctest::Approx(2.0).epsilon(1e-12));

  SplitMix64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const double w = rng.uniform(0.1, 5.0);
    const LaplacianMatrix l = build_laplacian(ComponentGraph(2, {{1, 2, w}}, true));
    CHECK(std::abs(l.lambda2 - 2.0 * w) <= 1e-9 * std::max(1.0, 2.0 * w));
  }
}

TEST_CASE("weighted path lambda2 matches the full eigendecomposition") {
  const LaplacianMatrix l =
      build_laplacian(ComponentGraph(3, {{1, 2, 1.0}, {2, 3, 5.0}}, true));
  const EigenDecomposition e = sym_eigs(SymMatrix(l.matrix));
  CHECK(std::abs(l.lambda2 - e.eigenvalues[1]) <= 1e-10);
  CHECK(std::abs(lambda2_symmetric(l) - e.eigenvalues[1]) <= 1e-12);
}

TEST_CASE("lambda2_general: reduction, hand case, zero matrix, row-sum guard") {
  const LaplacianMatrix sym = build_laplacian(complete_graph(4));
  CHECK(std::abs(lambda2_general(sym) - lambda2_symmetric(sym)) <= 1e-9);

  LaplacianMatrix l;
  l.matrix.resize(2, 2);
  l.matrix << 1.0, -1.0, -3.0, 3.0;
  l.symmetric = false;
  CHECK(lambda2_general(l) == doctest::Approx(4.0).epsilon(1e-12));

  LaplacianMatrix zero;
  zero.matrix = MatX::Zero(3, 3);
  CHECK(lambda2_general(zero) == 0.0);

  LaplacianMatrix bad;
  bad.matrix.resize(2, 2);
  bad.matrix << 1.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(lambda2_general(bad), InputError);
}

TEST_CASE("quadratic-form bound holds for random z orthogonal to ones") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 3 + static_cast<int>(rng.next() % 5);
    std::vector<Edge> edges;
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        if (rng.uniform01() < 0.6) edges.push_back({i, j, rng.uniform(0.1, 2.0)});
      }
    }
    const LaplacianMatrix l = build_laplacian(ComponentGraph(n, edges, true));
    for (int draw = 0; draw < 1000; ++draw) {
      VecX z(n);
      for (int i = 0; i < n; ++i) z[i] = rng.uniform(-1.0, 1.0);
      z.array() -= z.mean();
      const double zz = z.squaredNorm();
      if (zz < 1e-12) continue;
      CHECK(z.dot(l.matrix * z) >= (l.lambda2 - 1e-9) * zz);
    }
  }
}

TEST_CASE("symmetric Laplacians from nonnegative weights are PSD") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.next() % 6);
    std::vector<Edge> edges;
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        if (rng.uniform01() < 0.5) edges.push_back({i, j, rng.uniform(0.0, 3.0)});
      }
    }
    const LaplacianMatrix l = build_laplacian(ComponentGraph(n, edges, true));
    CHECK(l.psd);
    const EigenDecomposition e = sym_eigs(SymMatrix(l.matrix));
    CHECK(e.eigenvalues[0] >= -1e-10 * std::max(1.0, l.matrix.norm()));
  }
}

TEST_CASE("adding an edge never decreases lambda2") {
  SplitMix64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.next() % 4);
    std::vector<Edge> edges;
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        if (rng.uniform01() < 0.4) edges.push_back({i, j, rng.uniform(0.1, 2.0)});
      }
    }
    const double before = build_laplacian(ComponentGraph(n, edges, true)).lambda2;
    // add one absent edge if any remain
    bool added = false;
    for (int i = 1; i <= n && !added; ++i) {
      for (int j = i + 1; j <= n && !added; ++j) {
        bool present = false;
        for (const Edge& e : edges) {
          if ((e.i == i && e.j == j) || (e.i == j && e.j == i)) present = true;
        }
        if (!present) {
          edges.push_back({i, j, rng.uniform(0.1, 2.0)});
          added = true;
        }
      }
    }
    if (!added) continue;
    const double after = build_laplacian(ComponentGraph(n, edges, true)).lambda2;
    CHECK(after >= before - 1e-9);
  }
}

TEST_CASE("negative weights are accepted and flagged when PSD fails") {
  const LaplacianMatrix l = build_laplacian(ComponentGraph(2, {{1, 2, -1.0}}, true));
  CHECK_FALSE(l.psd);
  CHECK(l.lambda2 == doctest::Approx(-2.0));
  CHECK(l.no_positive_lambda2);
}

TEST_CASE("graph constructor rejections") {
  CHECK_THROWS_AS(ComponentGraph(2, {{1, 1, 1.0}}, true), InputError);   // self loop
  CHECK_THROWS_AS(ComponentGraph(2, {{1, 3, 1.0}}, true), InputError);   // out of range
  CHECK_THROWS_AS(ComponentGraph(2, {{1, 2, 1.0}, {1, 2, 2.0}}, false), InputError);  // duplicate
  CHECK_THROWS_AS(ComponentGraph(2, {{1, 2, 1.0}, {2, 1, 2.0}}, true), InputError);   // conflict
  CHECK_NOTHROW(ComponentGraph(2, {{1, 2, 1.0}, {2, 1, 1.0}}, true));  // consistent double listing
  CHECK_THROWS_AS(ComponentGraph(2, {{1, 2, std::nan("")}}, true), InputError);
  CHECK_THROWS_AS(ComponentGraph(0, {}, true), InputError);
}

TEST_CASE("double-listed symmetric edges are not double counted") {
  const LaplacianMatrix once = build_laplacian(ComponentGraph(2, {{1, 2, 3.0}}, true));
  const LaplacianMatrix twice =
      build_laplacian(ComponentGraph(2, {{1, 2, 3.0}, {2, 1, 3.0}}, true));
  CHECK((once.matrix - twice.matrix).norm() == 0.0);
}

TEST_CASE("non-symmetric Laplacian has zero row sums and a restricted lambda2") {
  // directed weights: node 1 listens to 2 with weight 1, node 2 to 1 with 3
  const LaplacianMatrix l = build_laplacian(ComponentGraph(2, {{1, 2, 1.0}, {2, 1, 3.0}}, false));
  CHECK(std::abs(l.matrix.row(0).sum()) <= 1e-14);
  CHECK(std::abs(l.matrix.row(1).sum()) <= 1e-14);
  MatX expect(2, 2);
  expect << 1.0, -1.0, -3.0, 3.0;
  CHECK((l.matrix - expect).norm() == 0.0);
  CHECK(l.lambda2 == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("ones-complement basis is orthonormal and annihilates ones") {
  for (int n = 2; n <= 8; ++n) {
    const MatX b = ones_complement_basis(n);
    CHECK((b.transpose() * b - MatX::Identity(n - 1, n - 1)).norm() <= 1e-12);
    CHECK((b.transpose() * VecX::Ones(n)).norm() <= 1e-12);
  }
}

TEST_CASE("scale_laplacian folds coupling gains") {
  const LaplacianMatrix base = build_laplacian(complete_graph(3));
  const LaplacianMatrix scaled = scale_laplacian(base, 0.5);
  CHECK((scaled.matrix - 0.5 * base.matrix).norm() == 0.0);
  CHECK(scaled.lambda2 == doctest::Approx(1.5));
  CHECK(scale_laplacian(base, 0.0).matrix.isZero(0.0));
  CHECK_THROWS_AS(scale_laplacian(base, -1.0), InputError);
}
