#pragma once

#include <Eigen/Core>

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tomolab/field.hpp"

namespace tomolab {

struct ModeConstants {
  double mass = 1.0;
  double frequency = 1.0;
  double hbar = 1.0;

  void validate() const;
};

// Omega(t) for the parametric oscillator.
class FrequencyProfile {
 public:
  enum class Kind { constant, piecewise, sinusoidal };

  FrequencyProfile() = default;
  static FrequencyProfile constant(double omega0);
  // `initial` holds before the first jump; each (t, omega) applies from t onwards.
  static FrequencyProfile piecewise(double initial, std::vector<std::pair<double, double>> jumps);
  // omega0 * (1 + depth * sin(drive * t))
  static FrequencyProfile sinusoidal(double omega0, double depth, double drive);

  // Right-continuous at jumps.
  double operator()(double t) const;
  // Frequency in effect just before t = 0; the state family needs it to be 1.
  double initial_value() const;
  // Jump times in (lo, hi), increasing.
  std::vector<double> breakpoints(double lo, double hi) const;

  Kind kind() const { return kind_; }
  double omega0() const { return omega0_; }
  double depth() const { return depth_; }
  double drive() const { return drive_; }
  const std::vector<std::pair<double, double>>& jumps() const { return jumps_; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::constant;
  double omega0_ = 1.0;
  double depth_ = 0.0;
  double drive_ = 0.0;
  std::vector<std::pair<double, double>> jumps_;
};

struct EpsilonSample {
  double t = 0.0;
  cplx eps{1.0, 0.0};
  cplx eps_dot{0.0, 1.0};
  // arg(eps) unwrapped continuously from 0 along the trajectory.
  double phase = 0.0;

  // eps * conj(eps_dot) - conj(eps) * eps_dot + 2i; zero on an exact trajectory.
  double wronskian_defect() const;
};

struct EpsilonTrajectory {
  std::vector<EpsilonSample> samples;
  double dt = 0.0;

  double max_wronskian_drift() const;
  const EpsilonSample& at(double t, double tol = 1e-12) const;
};

// RK4 for eps'' + Omega(t)^2 eps = 0 with eps(0) = 1, eps'(0) = i. Starts at
// `dt` and halves the step until the Wronskian drift is at most `drift_tol`.
// Output times must be nonnegative and increasing.
EpsilonTrajectory solve_epsilon(const FrequencyProfile& profile, const std::vector<double>& times, double dt = 1e-3,
                                double drift_tol = 1e-9);
EpsilonTrajectory solve_epsilon(const FrequencyProfile& profile, const Axis& time_axis, double dt = 1e-3,
                                double drift_tol = 1e-9);
EpsilonSample epsilon_at(const FrequencyProfile& profile, double t, double dt = 1e-3);

inline constexpr int kMaxQuanta = 30;
inline constexpr double kMaxAlpha = 4.0;

cplx hermite(int m, cplx z);
double laguerre(int m, double x);

// Photon-added coherent state proportional to (a^dagger)^m |alpha> of the parametric oscillator.
struct PacsState {
  cplx alpha{0.0, 0.0};
  int m = 0;
  FrequencyProfile profile;

  void validate() const;
  // 1 / (m! L_m(-|alpha|^2))
  double norm_factor() const;
  std::string id() const;
};

struct ClassicalGaussianState {
  double mean_q = 0.0;
  double mean_p = 0.0;
  Eigen::Matrix2d cov = 0.5 * Eigen::Matrix2d::Identity();

  void validate() const;
  std::string id() const;
};

using StateSpec = std::variant<PacsState, ClassicalGaussianState>;

PacsState fock(int m, FrequencyProfile profile = {});
PacsState coherent(cplx alpha, FrequencyProfile profile = {});
PacsState vacuum(FrequencyProfile profile = {});
// The six reference states (alpha, m) used for validation, with Omega = 1.
std::vector<PacsState> catalog();

// <q|alpha, m, t> on a q axis.
Field pacs_wavefunction(const PacsState& s, const EpsilonSample& e, const Axis& q_axis);
Field pacs_wavefunction(const PacsState& s, double t, const Axis& q_axis);

// Closed-form symplectic tomogram M(X, mu, nu) at the time of `e`.
double pacs_symplectic_tomogram(const PacsState& s, const EpsilonSample& e, double X, double mu, double nu);
double pacs_symplectic_tomogram(const PacsState& s, double t, double X, double mu, double nu);

Field pacs_symplectic_field(const PacsState& s, double t, const Axis& x_axis, const Axis& mu_axis, const Axis& nu_axis);
// Optical tomogram: mu = cos(theta), nu = sin(theta). Tagged as a probability field.
Field pacs_optical_tomogram(const PacsState& s, double t, const Axis& x_axis, const Axis& theta_axis);
Field pacs_optical_tomogram(const PacsState& s, const EpsilonSample& e, const Axis& x_axis, const Axis& theta_axis);

// W(q, p) = int psi(q + u/2) psi*(q - u/2) exp(-i p u) du with hbar = 1, so
// int W dq dp / (2 pi) = 1. Sets metadata "accuracy_warning" when psi does
// not decay at the grid edges.
Field wigner_of_wavefunction(const Field& psi, const Axis& p_axis);

// Gaussian phase-space density normalized as int f dq dp / (2 pi) = 1.
Field classical_gaussian(const ClassicalGaussianState& s, const Axis& q_axis, const Axis& p_axis);

}  // namespace tomolab
