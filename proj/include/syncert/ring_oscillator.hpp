#pragma once

#include <vector>

#include "syncert/cert.hpp"
#include "syncert/graph.hpp"
#include "syncert/ode_sim.hpp"
#include "syncert/types.hpp"

namespace syncert {

/// n-stage ring oscillator:
///   ẋ_1 = −η_1 x_1 − α_1 tanh(β_1 x_n)
///   ẋ_k = −η_k x_k + α_k tanh(β_k x_{k−1}),  k ≥ 2
/// coupling_d[k] is the diffusive gain of component k between circuits
/// (zero for uncoupled components).
struct RingOscillatorParams {
  int n = 0;
  VecX eta;
  VecX alpha;
  VecX beta;
  VecX coupling_d;

  static RingOscillatorParams validated(int n, VecX eta, VecX alpha, VecX beta, VecX coupling_d);
};

/// sech²(u) computed as (1/cosh u)² with |u| clamped at 350 (cosh overflows
/// near 710); past the clamp the true value underflows to 0 anyway.
double sech2(double u);

VecX vector_field(const RingOscillatorParams& p, const VecX& x);
MatX jacobian(const RingOscillatorParams& p, const VecX& x);

/// box{A_0, A_1, …, A_n} with A_0 = diag(−η) and one rank-one term per
/// feedback edge: A_1 = (−α_1β_1 e_1)·e_nᵀ, A_k = (α_kβ_k e_k)·e_{k−1}ᵀ.
BoxBound box_bound(const RingOscillatorParams& p);

/// Pointwise ring reaction applied to an n×M field (columns are grid cells).
MatX reaction_field(const RingOscillatorParams& p, const MatX& field);

/// Network of N identical ring oscillators; coupling for component k is
/// coupling_d[k]·L(graphs[k]).
NetworkModel build_network(const RingOscillatorParams& p,
                           const std::vector<ComponentGraph>& graphs);

}  // namespace syncert
