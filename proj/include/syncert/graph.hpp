#pragma once

#include <vector>

#include "syncert/linalg.hpp"
#include "syncert/types.hpp"

namespace syncert {

/// One edge of a component interconnection graph. Node indices are 1-based.
struct Edge {
  int i;
  int j;
  double w;
};

/// Weighted interconnection graph for one state component. When `symmetric`
/// is set, listing both directions of an edge is allowed only with equal
/// weights; a single listing implies the reverse edge.
class ComponentGraph {
 public:
  ComponentGraph(int num_nodes, std::vector<Edge> edges, bool symmetric);

  int num_nodes() const { return num_nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool symmetric() const { return symmetric_; }

 private:
  int num_nodes_;
  std::vector<Edge> edges_;
  bool symmetric_;
};

struct LaplacianMatrix {
  MatX matrix;
  /// Smallest eigenvalue of ½(L+Lᵀ) restricted to the subspace orthogonal to
  /// the all-ones vector. Coincides with the second-smallest eigenvalue for
  /// symmetric PSD Laplacians; 0 for the zero matrix.
  double lambda2 = 0.0;
  bool symmetric = true;
  /// For symmetric Laplacians: whether the full matrix is PSD (negative edge
  /// weights can break this).
  bool psd = true;
  /// λ₂ ≤ 0, i.e. the quadratic form gives no strictly positive bound on 1⊥.
  bool no_positive_lambda2 = false;
};

/// L(i,i) = Σ_j w_ij, L(i,j) = -w_ij. A graph with no edges yields the zero
/// matrix. lambda2 is filled from the restricted eigenproblem.
LaplacianMatrix build_laplacian(const ComponentGraph& g);

LaplacianMatrix zero_laplacian(int num_nodes);

/// Uniform scaling (coupling strength folded into the Laplacian). factor = 0
/// collapses to the zero Laplacian.
LaplacianMatrix scale_laplacian(const LaplacianMatrix& l, double factor);

/// Second smallest eigenvalue of the full spectrum. Requires symmetric flag.
double lambda2_symmetric(const LaplacianMatrix& l);

/// Smallest eigenvalue of ½(L+Lᵀ) on 1⊥ (deflated through an explicit
/// orthonormal basis). Valid for non-symmetric L with zero row sums; a
/// negative return means no positive bound exists.
double lambda2_general(const LaplacianMatrix& l);

/// n×(n-1) orthonormal basis of the complement of the all-ones vector
/// (Helmert construction, deterministic).
MatX ones_complement_basis(int n);

}  // namespace syncert
