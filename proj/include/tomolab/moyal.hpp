#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tomolab/dynamics.hpp"
#include "tomolab/potential.hpp"
#include "tomolab/states.hpp"

namespace tomolab {

// Wigner-side reference dynamics. Fields carry a (q, p) axis pair per mode and
// use the normalization int W dq dp / (2 pi)^n = 1. Derivatives are spectral
// along q and p; no tomographic operator is involved.

// dW/dt = -sum_s p_s/m_s dW/dq_s
//         + sum_{|j| odd} (-1)^{(|j|-1)/2} (hbar/2)^{|j|-1} / j! (d^j U / dq^j) d^j W / dp^j
// `hbar` overrides the potential's hbar; hbar = 0 gives the Liouville equation.
Field moyal_generator(const Field& W, const PolynomialPotential& U, std::optional<double> hbar = std::nullopt);

// df/dt = -sum_s p_s/m_s df/dq_s + sum_s dU/dq_s df/dp_s
Field liouville_generator(const Field& f, const PolynomialPotential& U);

double wigner_normalization(const Field& W);

// rho(x, x') = psi(x) psi*(x') on an (x, x_prime) grid; psi may be sampled on a q or x axis.
Field density_from_wavefunction(const Field& psi);

// W(q, p) = int rho(q + u/2, q - u/2) exp(-i p u / hbar) du, q on the x nodes.
// Throws ContractViolation if rho is not Hermitian to `hermitian_tol`.
Field wigner_from_density(const Field& rho, const Axis& p_axis, double hbar = 1.0, double hermitian_tol = 1e-10);
// rho(x, x') = (1 / 2 pi hbar) int W((x + x')/2, p) exp(i p (x - x') / hbar) dp on the q nodes of W.
Field density_from_wigner(const Field& W, double hbar = 1.0);

using TimePotential = std::function<PolynomialPotential(double)>;

// U(t) = m Omega(t)^2 q^2 / 2
TimePotential parametric_potential(const FrequencyProfile& profile, const ModeConstants& c = {});

struct MoyalOptions {
  double blowup_factor = 1e3;
  // Liouville instead of Moyal right-hand side.
  bool classical = false;
};

// RK4 in time with the potential evaluated at each stage time. Snapshot
// normalization_drift is |int W dq dp / (2 pi)^n - 1|.
std::vector<Snapshot> evolve_moyal(const Field& W0, const TimePotential& U, double dt, long steps, long snapshot_every,
                                   const MoyalOptions& opt = {});
std::vector<Snapshot> evolve_moyal(const Field& W0, const PolynomialPotential& U, double dt, long steps,
                                   long snapshot_every, const MoyalOptions& opt = {});

// Wigner function of a state on a (q, p) grid (wavefunction route for PACS, closed form for Gaussians).
Field wigner_of_state(const StateSpec& s, const Axis& q_axis, const Axis& p_axis);

struct CorrespondenceGrids {
  Axis q = Axis::uniform(AxisLabel::q, -8, 8, 256);
  Axis p = Axis::uniform(AxisLabel::p, -8, 8, 256);
  Axis X = Axis::uniform(AxisLabel::X, -8, 8, 256);
  Axis theta = Axis::angle(64);
  // Small (mu, nu) patch for the symplectic rules; compared at its centre node.
  double mu0 = 0.7, nu0 = -0.3, patch_step = 0.005;
};

struct CorrespondenceRow {
  std::string rule;
  double norm = 0.0;
  bool pass = false;
};

struct CorrespondenceReport {
  std::string state;
  std::string potential;
  double tolerance = 1e-5;
  // dq, dp, q, p (optical), symplectic (its four rules), density (x, x', d/dx, d/dx')
  std::vector<CorrespondenceRow> rows;
  // radon(moyal_generator(W)) against optical_generator(radon(W)) for the given potential.
  CorrespondenceRow generator;
  bool pass() const;
};

CorrespondenceReport correspondence_check(const StateSpec& state, const PolynomialPotential& U, double tolerance = 1e-5,
                                          const CorrespondenceGrids& grids = {});

}  // namespace tomolab
