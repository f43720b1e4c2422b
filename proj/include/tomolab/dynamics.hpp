#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tomolab/potential.hpp"
#include "tomolab/transforms.hpp"

namespace tomolab {

// Number of modes of a tomographic field: one X axis per mode, modes numbered 0..n-1.
std::size_t mode_count(const Field& f);

// Optical correspondence rules for mode `mode` (physical momentum is m*omega times the rotated one):
//   q W   <->  sin(theta) (d/dX)^{-1} d/dtheta w + X cos(theta) w
//   p W   <->  m omega [-cos(theta) (d/dX)^{-1} d/dtheta w + X sin(theta) w]
//   dW/dq <->  cos(theta) dw/dX
//   dW/dp <->  sin(theta) / (m omega) dw/dX
Field q_operator_optical(const Field& f, std::size_t mode = 0);
Field p_operator_optical(const Field& f, std::size_t mode = 0, const ModeConstants& c = {});
Field dq_operator_optical(const Field& f, std::size_t mode = 0);
Field dp_operator_optical(const Field& f, std::size_t mode = 0, const ModeConstants& c = {});

// Symplectic rules: q <-> -(d/dX)^{-1} d/dmu, p <-> -(d/dX)^{-1} d/dnu, d/dq <-> mu d/dX, d/dp <-> nu d/dX.
Field q_operator_symplectic(const Field& f, std::size_t mode = 0);
Field p_operator_symplectic(const Field& f, std::size_t mode = 0);
Field dq_operator_symplectic(const Field& f, std::size_t mode = 0);
Field dp_operator_symplectic(const Field& f, std::size_t mode = 0);

// dw/dt = sum_s omega_s [cos^2 d/dtheta - sin(2 theta)/2 (1 + X d/dX)] w + (2/hbar) Im U(A + i hbar/2 B) w
Field optical_generator(const Field& f, const PolynomialPotential& U);
// dM/dt = sum_s (mu_s / m_s) dM/dnu_s + (2/hbar) Im U(A_M + i hbar/2 B_M) M
Field symplectic_generator(const Field& f, const PolynomialPotential& U);
// Liouville limit: only the first-order force term of the series.
Field classical_optical_generator(const Field& f, const PolynomialPotential& U);
Field classical_symplectic_generator(const Field& f, const PolynomialPotential& U);

// Right-hand side for the characteristic function (eta or z duals of X).
// The 1/eta factor is replaced by its finite limit d/deta on the eta = 0 row.
CharacteristicFunction characteristic_generator(const CharacteristicFunction& chi, const PolynomialPotential& U);

// Individual pieces, exposed for tests and diagnostics.
Field optical_free_part(const Field& f, const PolynomialPotential& U);
Field optical_potential_part(const Field& f, const PolynomialPotential& U, int max_b_order = 1000);
Field symplectic_free_part(const Field& f, const PolynomialPotential& U);
Field symplectic_potential_part(const Field& f, const PolynomialPotential& U, int max_b_order = 1000);

struct EnergyResidual {
  Field residual;
  double norm = 0.0;  // grid-weighted L2
};

// E w = sum_s [(m w^2 / 2) P_s^2 - (hbar^2 / 8m) cos^2(theta_s) d^2/dX_s^2] w + Re U(A + i hbar/2 B) w,
// P_s the rotated-momentum rule applied twice. U is the full potential.
EnergyResidual energy_residual_optical(const Field& w, double E, const PolynomialPotential& U);
// E M = sum_s [(1/2m) P_M^2 - (mu^2 hbar^2 / 8m) d^2/dX^2] M + Re U(A_M + i hbar/2 B_M) M
EnergyResidual energy_residual_symplectic(const Field& M, double E, const PolynomialPotential& U);

enum class GeneratorKind {
  optical_quantum,
  symplectic_quantum,
  optical_classical,
  symplectic_classical,
  characteristic_symplectic,
  characteristic_optical,
};

std::string to_string(GeneratorKind k);
GeneratorKind generator_kind_from_string(const std::string& s);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::optical_quantum;
  PolynomialPotential potential;
};

// Applies the generator selected by spec. Characteristic kinds expect a field with an eta (or z) axis.
Field apply_generator(const GeneratorSpec& spec, const Field& f);

// L2 norm of the generator output.
double stationarity_residual(const Field& f, const GeneratorSpec& spec);

struct Snapshot {
  double t = 0.0;
  long step = 0;
  Field field;
  double normalization_drift = 0.0;  // max |int f dX - 1| (or |chi(0) - 1|)
  std::optional<double> symmetry_residual;  // optical single-mode grids only
};

struct EvolveOptions {
  // Abort when sup|f| exceeds this multiple of the initial sup.
  double blowup_factor = 1e3;
  double normalization_warning = 1e-3;
  bool require_probability = true;
};

// Classical RK4 method of lines. Returns snapshots at step 0, every
// `snapshot_every` steps and at the final step. Throws NumericalError naming
// the step on non-finite values or blow-up.
std::vector<Snapshot> evolve(const Field& f0, const GeneratorSpec& spec, double dt, long steps, long snapshot_every,
                             const EvolveOptions& opt = {});

// Reflection-symmetry residual max |w(-X, theta + pi) - w(X, theta)| for a single-mode optical field on a symmetric grid.
std::optional<double> optical_symmetry_residual(const Field& w);

}  // namespace tomolab
