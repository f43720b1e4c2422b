#pragma once

#include "tomolab/field.hpp"

namespace tomolab {

// w(X, theta) = int W(q, p) delta(X - q cos(theta) - p sin(theta)) dq dp / (2 pi).
// Each slice is evaluated from the exact 2-D Fourier sum of W at
// (eta cos(theta), eta sin(theta)) for the eta nodes dual to the X axis.
// The X axis needs a power-of-two count and theta a periodic axis with even count.
Field radon_optical(const Field& W, const Axis& x_axis, const Axis& theta_axis);

// M(X, mu, nu) = w(X / r, phi) / r with r = |(mu, nu)| and phi = atan2(nu, mu) in [0, 2 pi).
// The intermediate optical tomogram uses `theta_count` angles.
Field radon_symplectic(const Field& W, const Axis& x_axis, const Axis& mu_axis, const Axis& nu_axis,
                       std::size_t theta_count = 64);

// Band-limited interpolation of an optical tomogram: Fourier series in X and in theta.
// Points with x outside the sampled X range evaluate to zero.
class TomogramInterpolant {
 public:
  explicit TomogramInterpolant(const Field& w);

  double value(double x, double phi) const;
  // w(x_i, phi) for every entry of xs.
  Eigen::VectorXd ray(double phi, const Eigen::VectorXd& xs) const;

 private:
  Axis xa_, ta_;
  Eigen::MatrixXcd coef_;  // (X wavenumber, theta harmonic), normalized
  Eigen::VectorXd eta_;
  Eigen::VectorXd harmonics_;
};

double optical_to_symplectic(const TomogramInterpolant& w, double X, double mu, double nu);
double optical_to_symplectic(const Field& w, double X, double mu, double nu);
Field optical_to_symplectic(const Field& w, const Axis& x_axis, const Axis& mu_axis, const Axis& nu_axis);

struct InverseRadonOptions {
  // Fraction of the Nyquist wavenumber where the Hann taper of the ramp filter begins.
  double taper_start = 0.8;
  // Symmetry w(-X, theta + pi) = w(X, theta) required of the input.
  double symmetry_tol = 1e-6;
  // The tomogram is resampled onto this many times more angles (trigonometric
  // interpolation) before back-projection, which suppresses angular aliasing
  // far from the origin.
  int angular_upsampling = 4;
};

// Filtered back-projection over theta in [0, pi). Metadata records the
// symmetry residual and the taper setting. Needs a symmetric X axis.
Field inverse_radon(const Field& w, const Axis& q_axis, const Axis& p_axis, const InverseRadonOptions& opt = {});

// chi(eta, .) = int f(X, .) exp(i eta X) dX on the eta grid dual to X
// (uniform, from -pi/dX, same count). The X axis becomes `eta` for optical
// tomograms and `z` for symplectic ones.
struct CharacteristicFunction {
  Field values;
  std::size_t dual_axis = 0;
  Axis source_axis;  // the X axis it came from, for the inverse
};

CharacteristicFunction characteristic_fn(const Field& f);
Field inverse_characteristic_fn(const CharacteristicFunction& chi);

// chi(eta, theta_j) at an arbitrary eta by direct quadrature.
cplx characteristic_at(const Field& w, double eta, std::size_t theta_index);

inline constexpr int kMaxMoment = 8;

// <X^n> per theta (or per (mu, nu)) by quadrature.
Field quadrature_moment(const Field& w, int n);
// i^{-n} d^n chi / d eta^n at eta = 0 by a centred finite-difference stencil of spacing delta.
Field characteristic_moment(const Field& w, int n, double delta = 0.05);

}  // namespace tomolab
