#include "syncert/ring_oscillator.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "syncert/errors.hpp"

namespace syncert {

RingOscillatorParams RingOscillatorParams::validated(int n, VecX eta, VecX alpha, VecX beta,
                                                     VecX coupling_d) {
  if (n < 3) throw InputError("RingOscillatorParams: need at least three stages");
  if (eta.size() != n || alpha.size() != n || beta.size() != n || coupling_d.size() != n) {
    throw InputError("RingOscillatorParams: parameter vectors must have length n");
  }
  for (int k = 0; k < n; ++k) {
    if (!(eta[k] > 0.0) || !(alpha[k] > 0.0) || !(beta[k] > 0.0)) {
      throw InputError("RingOscillatorParams: eta, alpha, beta must be positive");
    }
    if (!(coupling_d[k] >= 0.0) || !std::isfinite(coupling_d[k])) {
      throw InputError("RingOscillatorParams: coupling gains must be nonnegative");
    }
  }
  return {n, std::move(eta), std::move(alpha), std::move(beta), std::move(coupling_d)};
}

double sech2(double u) {
  if (std::abs(u) >= 350.0) return 0.0;
  const double c = 1.0 / std::cosh(u);
  return c * c;
}

VecX vector_field(const RingOscillatorParams& p, const VecX& x) {
  if (x.size() != p.n) throw InputError("vector_field: state length mismatch");
  VecX out(p.n);
  out[0] = -p.eta[0] * x[0] - p.alpha[0] * std::tanh(p.beta[0] * x[p.n - 1]);
  for (int k = 1; k < p.n; ++k) {
    out[k] = -p.eta[k] * x[k] + p.alpha[k] * std::tanh(p.beta[k] * x[k - 1]);
  }
  return out;
}

MatX jacobian(const RingOscillatorParams& p, const VecX& x) {
  if (x.size() != p.n) throw InputError("jacobian: state length mismatch");
  MatX j = MatX::Zero(p.n, p.n);
  j.diagonal() = -p.eta;
  j(0, p.n - 1) = -p.alpha[0] * p.beta[0] * sech2(p.beta[0] * x[p.n - 1]);
  for (int k = 1; k < p.n; ++k) {
    j(k, k - 1) = p.alpha[k] * p.beta[k] * sech2(p.beta[k] * x[k - 1]);
  }
  return j;
}

BoxBound box_bound(const RingOscillatorParams& p) {
  BoxBound out;
  out.base = MatX::Zero(p.n, p.n);
  out.base.diagonal() = -p.eta;
  out.terms.reserve(p.n);

  VecX left = VecX::Zero(p.n);
  VecX right = VecX::Zero(p.n);
  left[0] = -p.alpha[0] * p.beta[0];
  right[p.n - 1] = 1.0;
  out.terms.push_back({left, right});
  for (int k = 1; k < p.n; ++k) {
    left = VecX::Zero(p.n);
    right = VecX::Zero(p.n);
    left[k] = p.alpha[k] * p.beta[k];
    right[k - 1] = 1.0;
    out.terms.push_back({left, right});
  }
  return out;
}

MatX reaction_field(const RingOscillatorParams& p, const MatX& field) {
  if (field.rows() != p.n) throw InputError("reaction_field: component count mismatch");
  MatX out(p.n, field.cols());
  out.row(0) = -p.eta[0] * field.row(0).array() -
               p.alpha[0] * (p.beta[0] * field.row(p.n - 1).array()).tanh();
  for (int k = 1; k < p.n; ++k) {
    out.row(k) = -p.eta[k] * field.row(k).array() +
                 p.alpha[k] * (p.beta[k] * field.row(k - 1).array()).tanh();
  }
  return out;
}

NetworkModel build_network(const RingOscillatorParams& p,
                           const std::vector<ComponentGraph>& graphs) {
  if (static_cast<int>(graphs.size()) != p.n) {
    throw InputError("build_network: need one graph per component");
  }
  const int compartments = graphs[0].num_nodes();
  for (const ComponentGraph& g : graphs) {
    if (g.num_nodes() != compartments) {
      throw InputError("build_network: graphs disagree on the number of circuits");
    }
  }

  NetworkModel model;
  model.num_compartments = compartments;
  model.state_dim = p.n;
  model.f = [p](const VecX& x) { return vector_field(p, x); };
  model.jac = [p](const VecX& x) { return jacobian(p, x); };
  model.laplacians.reserve(p.n);
  for (int k = 0; k < p.n; ++k) {
    if (p.coupling_d[k] == 0.0) {
      model.laplacians.push_back(zero_laplacian(compartments));
    } else {
      model.laplacians.push_back(scale_laplacian(build_laplacian(graphs[k]), p.coupling_d[k]));
    }
  }
  return model;
}

}  // namespace syncert
