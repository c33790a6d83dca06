#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "syncert/linalg.hpp"
#include "syncert/types.hpp"

namespace syncert {

/// Uniform cell-centered grid on [0, length]; cell centers at (m+½)h, faces at j·h.
struct PdeGrid {
  double length = 0.0;
  int cells = 0;
  double h = 0.0;

  PdeGrid(double length, int cells);
  double center(int m) const { return (m + 0.5) * h; }
  double face(int j) const { return j * h; }
};

/// Per-component diffusion coefficients sampled at the cells+1 face
/// coordinates; every interior face must sit at or above the ellipticity
/// floor alpha > 0.
struct DiffusionProfile {
  std::vector<VecX> face_coeffs;
  double alpha = 0.0;

  DiffusionProfile(std::vector<VecX> face_coeffs, double alpha, int cells);
  int components() const { return static_cast<int>(face_coeffs.size()); }
  double max_interior_coeff() const;
};

DiffusionProfile profile_from_functions(const PdeGrid& grid,
                                        const std::vector<std::function<double(double)>>& a,
                                        double alpha);

/// Conservative flux discretization of ∇·(a(ξ)∇u) with zero boundary fluxes.
/// Symmetric, negative semidefinite, constants in the kernel.
struct DiscreteOperator {
  MatX matrix;
  int component = 0;
  double lambda2 = 0.0;  // second smallest eigenvalue of −matrix
};

DiscreteOperator discretize_operator(const PdeGrid& grid, const DiffusionProfile& prof,
                                     int component);

double neumann_lambda2(const DiscreteOperator& op);

/// Worst ratio of the discrete Dirichlet form vᵀ(−L)v to λ₂·vᵀv over `trials`
/// random mean-zero grid functions. Must come out ≥ 1 − 1e-9.
double check_lemma1(const DiscreteOperator& op, int trials, std::uint64_t seed);

/// Per-component mean removal (midpoint-rule average).
MatX pi_projection(const MatX& field, const PdeGrid& grid);

/// √(h·Σ v²) over all components and cells (midpoint quadrature).
double l2_norm(const MatX& field, const PdeGrid& grid);

/// Largest admissible explicit step: 0.9·h²/(2·max a).
double max_stable_dt(const PdeGrid& grid, const DiffusionProfile& prof);

using FieldReaction = std::function<MatX(const MatX&)>;

struct PdeRun {
  VecX snapshot_times;
  std::vector<MatX> snapshots;   // n×cells fields
  VecX metric_times;
  VecX pi_norm;                  // ‖π{x}‖_{L²} per metric sample
  MatX component_means;          // metric samples × components
};

/// Method of lines: pointwise reaction plus per-component diffusion, RK4 in
/// time. dt above the stability bound raises InputError naming the bound;
/// non-finite states raise DivergenceError. snapshot_stride 0 keeps only the
/// first and last fields.
PdeRun simulate_pde(const PdeGrid& grid, const DiffusionProfile& prof,
                    const FieldReaction& reaction, const MatX& x0, double t_end, double dt,
                    int snapshot_stride = 0, int metric_stride = 1);

}  // namespace syncert
