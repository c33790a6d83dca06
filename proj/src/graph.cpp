#include "syncert/graph.hpp"

#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "syncert/errors.hpp"

namespace syncert {

ComponentGraph::ComponentGraph(int num_nodes, std::vector<Edge> edges, bool symmetric)
    : num_nodes_(num_nodes), edges_(std::move(edges)), symmetric_(symmetric) {
  if (num_nodes_ < 1) {
    throw InputError("ComponentGraph: need at least one node");
  }
  std::map<std::pair<int, int>, double> seen;
  for (const Edge& e : edges_) {
    if (e.i < 1 || e.i > num_nodes_ || e.j < 1 || e.j > num_nodes_) {
      throw InputError("ComponentGraph: edge (" + std::to_string(e.i) + "," +
                       std::to_string(e.j) + ") out of range");
    }
    if (e.i == e.j) {
      throw InputError("ComponentGraph: self-loop at node " + std::to_string(e.i));
    }
    if (!std::isfinite(e.w)) {
      throw InputError("ComponentGraph: non-finite edge weight");
    }
    auto [it, inserted] = seen.emplace(std::make_pair(e.i, e.j), e.w);
    if (!inserted) {
      throw InputError("ComponentGraph: duplicate edge (" + std::to_string(e.i) + "," +
                       std::to_string(e.j) + ")");
    }
  }
  if (symmetric_) {
    for (const auto& [key, w] : seen) {
      auto rev = seen.find({key.second, key.first});
      if (rev != seen.end() && rev->second != w) {
        throw InputError("ComponentGraph: symmetric graph lists edge (" +
                         std::to_string(key.first) + "," + std::to_string(key.second) +
                         ") with conflicting reverse weight");
      }
    }
  }
}

namespace {

void fill_lambda2(LaplacianMatrix& l) {
  const int n = static_cast<int>(l.matrix.rows());
  const double fro = l.matrix.norm();
  const double zero_tol = std::max(1e-12 * fro, 1e-14);

  if (n == 1 || fro == 0.0) {
    l.lambda2 = 0.0;
    l.no_positive_lambda2 = true;
    l.psd = true;
    return;
  }

  const MatX basis = ones_complement_basis(n);
  const MatX sym_part = 0.5 * (l.matrix + l.matrix.transpose());
  const SymMatrix restricted(MatX(basis.transpose() * sym_part * basis));
  double l2 = sym_eigs(restricted).eigenvalues[0];
  if (std::abs(l2) <= zero_tol) l2 = 0.0;
  l.lambda2 = l2;
  l.no_positive_lambda2 = (l2 <= 0.0);

  if (l.symmetric) {
    const double min_full = sym_eigs(SymMatrix(l.matrix)).eigenvalues[0];
    l.psd = (min_full >= -std::max(1e-10 * fro, 1e-14));
  }
}

}  // namespace

LaplacianMatrix build_laplacian(const ComponentGraph& g) {
  const int n = g.num_nodes();
  LaplacianMatrix out;
  out.matrix = MatX::Zero(n, n);
  out.symmetric = g.symmetric();

  if (g.symmetric()) {
    // one listing covers both directions; double listings were checked consistent
    std::map<std::pair<int, int>, double> undirected;
    for (const Edge& e : g.edges()) {
      const int a = std::min(e.i, e.j) - 1;
      const int b = std::max(e.i, e.j) - 1;
      undirected[{a, b}] = e.w;
    }
    for (const auto& [key, w] : undirected) {
      const auto [a, b] = key;
      out.matrix(a, b) -= w;
      out.matrix(b, a) -= w;
      out.matrix(a, a) += w;
      out.matrix(b, b) += w;
    }
  } else {
    for (const Edge& e : g.edges()) {
      const int a = e.i - 1;
      const int b = e.j - 1;
      out.matrix(a, b) -= e.w;
      out.matrix(a, a) += e.w;
    }
  }

  fill_lambda2(out);
  return out;
}

LaplacianMatrix zero_laplacian(int num_nodes) {
  if (num_nodes < 1) throw InputError("zero_laplacian: need at least one node");
  LaplacianMatrix out;
  out.matrix = MatX::Zero(num_nodes, num_nodes);
  out.lambda2 = 0.0;
  out.symmetric = true;
  out.psd = true;
  out.no_positive_lambda2 = true;
  return out;
}

LaplacianMatrix scale_laplacian(const LaplacianMatrix& l, double factor) {
  if (!std::isfinite(factor) || factor < 0.0) {
    throw InputError("scale_laplacian: factor must be finite and nonnegative");
  }
  if (factor == 0.0) return zero_laplacian(static_cast<int>(l.matrix.rows()));
  LaplacianMatrix out = l;
  out.matrix *= factor;
  out.lambda2 *= factor;
  out.no_positive_lambda2 = (out.lambda2 <= 0.0);
  return out;
}

double lambda2_symmetric(const LaplacianMatrix& l) {
  if (!l.symmetric) {
    throw InputError("lambda2_symmetric: Laplacian is not flagged symmetric");
  }
  const int n = static_cast<int>(l.matrix.rows());
  if (n == 1) return 0.0;
  const EigenDecomposition eig = sym_eigs(SymMatrix(l.matrix));
  double l2 = eig.eigenvalues[1];
  if (std::abs(l2) <= std::max(1e-12 * l.matrix.norm(), 1e-14)) l2 = 0.0;
  return l2;
}

double lambda2_general(const LaplacianMatrix& l) {
  const int n = static_cast<int>(l.matrix.rows());
  const double fro = l.matrix.norm();
  const VecX row_sums = l.matrix.rowwise().sum();
  if (row_sums.cwiseAbs().maxCoeff() > std::max(1e-12 * fro, 1e-14)) {
    throw InputError("lambda2_general: row sums are not zero");
  }
  if (n == 1 || fro == 0.0) return 0.0;

  const MatX basis = ones_complement_basis(n);
  const MatX sym_part = 0.5 * (l.matrix + l.matrix.transpose());
  const SymMatrix restricted(MatX(basis.transpose() * sym_part * basis));
  double l2 = sym_eigs(restricted).eigenvalues[0];
  if (std::abs(l2) <= std::max(1e-12 * fro, 1e-14)) l2 = 0.0;
  return l2;
}

MatX ones_complement_basis(int n) {
  if (n < 2) throw InputError("ones_complement_basis: need n >= 2");
  MatX b = MatX::Zero(n, n - 1);
  for (int j = 1; j < n; ++j) {
    const double norm = std::sqrt(static_cast<double>(j) * (j + 1));
    for (int i = 0; i < j; ++i) b(i, j - 1) = 1.0 / norm;
    b(j, j - 1) = -static_cast<double>(j) / norm;
  }
  return b;
}

}  // namespace syncert
