#include "syncert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace syncert {

SymMatrix::SymMatrix(const MatX& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InputError("SymMatrix: matrix must be square and non-empty");
  }
  if (!m.allFinite()) {
    throw InputError("SymMatrix: non-finite entries");
  }
  m_ = 0.5 * (m + m.transpose());
}

EigenDecomposition sym_eigs(const SymMatrix& m) {
  const int n = m.dim();
  MatX a = m.mat();
  MatX v = MatX::Identity(n, n);

  const double fro = a.norm();
  const double tol = std::max(1e-13 * fro, 1e-14);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        off = std::max(off, std::abs(a(p, q)));
      }
    }
    if (off < tol) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;

        const double theta = 0.5 * (a(q, q) - a(p, p)) / apq;
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(p, k) = a(k, p);
          a(k, q) = s * akp + c * akq;
          a(q, k) = a(k, q);
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](int i, int j) { return a(i, i) < a(j, j); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.eigenvalues[i] = a(order[i], order[i]);
    out.eigenvectors.col(i) = v.col(order[i]);
  }
  return out;
}

MatX kron(const MatX& a, const MatX& b) {
  if (!a.allFinite() || !b.allFinite()) {
    throw InputError("kron: non-finite entries");
  }
  MatX out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

MatX half_sym_product(const SymMatrix& p, int k) {
  const int n = p.dim();
  if (k < 0 || k >= n) {
    throw InputError("half_sym_product: component index out of range");
  }
  const VecX col = p.mat().col(k);
  MatX h = MatX::Zero(n, n);
  h.col(k) += 0.5 * col;
  h.row(k) += 0.5 * col.transpose();
  return h;
}

MatX factor_half_sym(const SymMatrix& p, int k) {
  const MatX h = half_sym_product(p, k);
  const SymMatrix hs(h);
  const EigenDecomposition eig = sym_eigs(hs);

  const double scale = std::max(h.norm(), 1.0);
  const double neg_tol = std::max(1e-10 * scale, 1e-14);
  if (eig.eigenvalues[0] < -neg_tol) {
    throw FactorizationError("factor_half_sym: (P·Ek + Ek·P)/2 is indefinite (min eig " +
                             std::to_string(eig.eigenvalues[0]) + ")");
  }

  VecX clamped = eig.eigenvalues.cwiseMax(0.0);
  return clamped.cwiseSqrt().asDiagonal() * eig.eigenvectors.transpose();
}

NegDefResult is_negative_definite(const SymMatrix& m, double margin) {
  const EigenDecomposition eig = sym_eigs(m);
  const double lmax = eig.eigenvalues[m.dim() - 1];
  return {lmax <= -margin, lmax};
}

}  // namespace syncert
