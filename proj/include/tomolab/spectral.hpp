#pragma once

#include <span>
#include <vector>

#include "tomolab/field.hpp"

namespace tomolab {

// Calls fn(n, coords) for every node of the grid, coords updated incrementally.
template <typename Fn>
void for_each_node(const std::vector<Axis>& axes, Fn&& fn) {
  const std::size_t r = axes.size();
  std::vector<std::size_t> idx(r, 0);
  std::vector<double> c(r);
  std::size_t total = 1;
  for (std::size_t k = 0; k < r; ++k) {
    c[k] = axes[k].start;
    total *= axes[k].count;
  }
  for (std::size_t n = 0; n < total; ++n) {
    fn(static_cast<Eigen::Index>(n), std::span<const double>(c));
    for (std::size_t k = r; k-- > 0;) {
      if (++idx[k] < axes[k].count) {
        c[k] = axes[k][idx[k]];
        break;
      }
      idx[k] = 0;
      c[k] = axes[k].start;
    }
  }
}

// f * g(coords) at every node.
template <typename G>
Field pointwise_mul(const Field& f, G&& g) {
  Field out(f.axes());
  out.metadata() = f.metadata();
  auto& v = out.mutable_values();
  const auto& in = f.values();
  for_each_node(f.axes(), [&](Eigen::Index n, std::span<const double> c) { v[n] = in[n] * cplx(g(c)); });
  return out;
}

// Angular wavenumbers 2*pi*j/L in FFT order; the Nyquist entry carries +N/2.
Eigen::VectorXd wavenumbers(const Axis& axis);

// Spectral derivative of arbitrary order along axis k (periodic or decaying).
Field spectral_derivative(const Field& f, std::size_t axis, int order = 1);

// d/dX along a non-periodic axis. Periodic axes are rejected; use spectral_dtheta.
Field spectral_dx(const Field& f, AxisLabel label = AxisLabel::X, std::uint8_t mode = 0);
Field spectral_dx2(const Field& f, AxisLabel label = AxisLabel::X, std::uint8_t mode = 0);

// (d/dX)^{-1} as the Fourier multiplier 1/(ik); the k = 0 (and Nyquist) mode is set to zero.
Field spectral_inv_dx(const Field& f, AxisLabel label = AxisLabel::X, std::uint8_t mode = 0);

// (d/dX)^{-1} returning the antiderivative that vanishes at both grid ends. The
// input must integrate to zero along the axis (true for d/dtheta and d/dmu of
// tomograms). The zero mode is the first-moment limit -(1/L) * int X f dX.
Field decaying_inv_dx(const Field& f, AxisLabel label = AxisLabel::X, std::uint8_t mode = 0);

Field spectral_dtheta(const Field& f, std::uint8_t mode = 0);

// f(theta + delta) by spectral translation along the periodic axis.
Field shift_periodic(const Field& f, std::size_t axis, double delta);

// Fourth-order central finite differences (one-sided near the ends); order 1 or 2.
Field fd_derivative(const Field& f, AxisLabel label, int order = 1, std::uint8_t mode = 0);

// Fornberg finite-difference weights: result[d][j] is the weight of nodes[j]
// for the d-th derivative at x0, d = 0..max_order.
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes, int max_order);

// Trapezoidal quadrature along one axis; the result drops that axis.
Field integrate_axis(const Field& f, std::size_t axis);
Field integrate_x(const Field& f, AxisLabel label = AxisLabel::X, std::uint8_t mode = 0);

// Integral over every axis (trapezoid), e.g. int W dq dp.
cplx integrate_all(const Field& f);

bool is_power_of_two(std::size_t n);

}  // namespace tomolab
