#pragma once

#include "syncert/errors.hpp"
#include "syncert/types.hpp"

namespace syncert {

/// Dense symmetric matrix. Construction symmetrizes as (M + Mᵀ)/2, so the
/// stored entries satisfy m(i,j) == m(j,i) exactly.
class SymMatrix {
 public:
  explicit SymMatrix(const MatX& m);
  int dim() const { return static_cast<int>(m_.rows()); }
  const MatX& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  MatX m_;
};

struct EigenDecomposition {
  VecX eigenvalues;   // ascending
  MatX eigenvectors;  // orthonormal columns; col(i) pairs with eigenvalues[i]
};

/// Cyclic Jacobi eigensolver. Sweeps in a fixed (p, q) order until the largest
/// off-diagonal magnitude drops below 1e-13·‖M‖_F (absolute floor 1e-14),
/// capped at 100 sweeps. Fixed sweep order makes results reproducible.
EigenDecomposition sym_eigs(const SymMatrix& m);

/// Kronecker product, block (i,j) equal to a(i,j)·b.
MatX kron(const MatX& a, const MatX& b);

/// ½(P·Ek + Ek·P) for the rank-one coordinate projector Ek = ek·ekᵀ.
/// k is 0-based.
MatX half_sym_product(const SymMatrix& p, int k);

/// Square-root factor Q with QᵀQ = ½(P·Ek + Ek·P). Eigenvalues of the product
/// below -1e-10·‖·‖_F raise FactorizationError; small negatives are clamped
/// to zero (the product is structurally rank-deficient, so Cholesky is not an
/// option). Deterministic for fixed input.
MatX factor_half_sym(const SymMatrix& p, int k);

struct NegDefResult {
  bool negative_definite;  // λmax ≤ -margin
  double lambda_max;
};

NegDefResult is_negative_definite(const SymMatrix& m, double margin);

}  // namespace syncert
