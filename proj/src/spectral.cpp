#include "tomolab/spectral.hpp"

#include <cmath>
#include <numbers>

#include "lines.hpp"

namespace tomolab {

using detail::apply_multiplier;
using detail::fft_engine;
using detail::map_lines;

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

Eigen::VectorXd wavenumbers(const Axis& axis) {
  const auto n = static_cast<Eigen::Index>(axis.count);
  Eigen::VectorXd k(n);
  const double base = 2.0 * std::numbers::pi / axis.length();
  for (Eigen::Index j = 0; j < n; ++j) k[j] = base * static_cast<double>(j <= n / 2 ? j : j - n);
  return k;
}

namespace {

Eigen::VectorXcd derivative_multiplier(const Axis& axis, int order) {
  const Eigen::VectorXd k = wavenumbers(axis);
  const auto n = k.size();
  Eigen::VectorXcd m(n);
  for (Eigen::Index j = 0; j < n; ++j) m[j] = std::pow(cplx(0.0, k[j]), order);
  // The Nyquist mode has no well-defined odd derivative on a real grid.
  if (n % 2 == 0 && order % 2 != 0) m[n / 2] = 0.0;
  return m;
}

std::size_t spectral_axis(const Field& f, AxisLabel label, std::uint8_t mode) {
  const std::size_t k = f.axis_index(label, mode);
  const Axis& a = f.axis(k);
  if (a.periodic) throw ContractViolation("spectral_dx: axis '" + std::string(to_string(label)) +
                                          "' is periodic; use spectral_dtheta");
  if (!is_power_of_two(a.count))
    throw DomainError("spectral operators need a power-of-two sample count along '" +
                      std::string(to_string(label)) + "'");
  return k;
}

}  // namespace

Field spectral_derivative(const Field& f, std::size_t axis, int order) {
  if (order == 0) return f;
  return apply_multiplier(f, axis, derivative_multiplier(f.axis(axis), order));
}

Field spectral_dx(const Field& f, AxisLabel label, std::uint8_t mode) {
  return spectral_derivative(f, spectral_axis(f, label, mode), 1);
}

Field spectral_dx2(const Field& f, AxisLabel label, std::uint8_t mode) {
  return spectral_derivative(f, spectral_axis(f, label, mode), 2);
}

Field spectral_inv_dx(const Field& f, AxisLabel label, std::uint8_t mode) {
  const std::size_t k = spectral_axis(f, label, mode);
  Eigen::VectorXcd m = derivative_multiplier(f.axis(k), 1);
  for (Eigen::Index j = 0; j < m.size(); ++j) m[j] = (m[j] == cplx(0.0)) ? cplx(0.0) : 1.0 / m[j];
  return apply_multiplier(f, k, m);
}

Field decaying_inv_dx(const Field& f, AxisLabel label, std::uint8_t mode) {
  const std::size_t k = spectral_axis(f, label, mode);
  const Axis& a = f.axis(k);
  Eigen::VectorXcd m = derivative_multiplier(a, 1);
  for (Eigen::Index j = 0; j < m.size(); ++j) m[j] = (m[j] == cplx(0.0)) ? cplx(0.0) : 1.0 / m[j];
  const Eigen::VectorXd x = a.coords();
  const double n = static_cast<double>(a.count);
  auto& engine = fft_engine();
  Eigen::VectorXcd spec;
  return map_lines(f, k, [&](Eigen::VectorXcd& line, std::size_t, std::size_t) {
    // mean of the antiderivative F with F(+-inf) = 0 is -(1/L) int X f dX
    const cplx mean = -(x.cast<cplx>().cwiseProduct(line).sum() * a.step) / a.length();
    engine.fwd(spec, line);
    spec.array() *= m.array();
    spec[0] = mean * n;
    engine.inv(line, spec);
  });
}

Field spectral_dtheta(const Field& f, std::uint8_t mode) {
  auto k = f.find_axis(AxisLabel::theta, mode);
  if (!k || !f.axis(*k).periodic) throw DomainError("spectral_dtheta: field has no periodic theta axis");
  return spectral_derivative(f, *k, 1);
}

Field shift_periodic(const Field& f, std::size_t axis, double delta) {
  const Axis& a = f.axis(axis);
  if (!a.periodic) throw DomainError("shift_periodic: axis is not periodic");
  const Eigen::VectorXd k = wavenumbers(a);
  const auto n = k.size();
  Eigen::VectorXcd m(n);
  for (Eigen::Index j = 0; j < n; ++j) m[j] = std::exp(cplx(0.0, k[j] * delta));
  if (n % 2 == 0) m[n / 2] = std::cos(k[n / 2] * delta);
  return apply_multiplier(f, axis, m);
}

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x, int max_order) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(static_cast<std::size_t>(max_order + 1), std::vector<double>(x.size(), 0.0));
  double c1 = 1.0, c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

Field fd_derivative(const Field& f, AxisLabel label, int order, std::uint8_t mode) {
  if (order != 1 && order != 2) throw DomainError("fd_derivative: order must be 1 or 2");
  const std::size_t k = f.axis_index(label, mode);
  const Axis& a = f.axis(k);
  const auto n = static_cast<std::ptrdiff_t>(a.count);
  const std::ptrdiff_t width = order == 1 ? 5 : 6;
  if (n < width) throw DomainError("fd_derivative: axis too short for a fourth-order stencil");
  // Per node: first stencil index and weights (unit spacing, scaled below).
  std::vector<std::ptrdiff_t> first(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> w(static_cast<std::size_t>(n));
  const double scale = std::pow(a.step, -order);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::ptrdiff_t lo = i - 2;
    std::ptrdiff_t len = 5;
    if (lo < 0 || lo + 5 > n) {
      len = width;
      lo = std::clamp<std::ptrdiff_t>(i - len / 2, 0, n - len);
    }
    std::vector<double> nodes(static_cast<std::size_t>(len));
    for (std::ptrdiff_t j = 0; j < len; ++j) nodes[static_cast<std::size_t>(j)] = static_cast<double>(lo + j - i);
    auto c = fornberg_weights(0.0, nodes, order);
    first[static_cast<std::size_t>(i)] = lo;
    w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(order)];
    for (double& v : w[static_cast<std::size_t>(i)]) v *= scale;
  }
  Eigen::VectorXcd src;
  return map_lines(f, k, [&](Eigen::VectorXcd& line, std::size_t, std::size_t) {
    src = line;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto& wi = w[static_cast<std::size_t>(i)];
      cplx acc = 0.0;
      for (std::size_t j = 0; j < wi.size(); ++j) acc += wi[j] * src[first[static_cast<std::size_t>(i)] + static_cast<std::ptrdiff_t>(j)];
      line[i] = acc;
    }
  });
}

Field integrate_axis(const Field& f, std::size_t axis) {
  const Axis& a = f.axis(axis);
  std::vector<Axis> rest;
  for (std::size_t k = 0; k < f.rank(); ++k)
    if (k != axis) rest.push_back(f.axis(k));
  Field out(rest);
  out.metadata() = f.metadata();
  const std::size_t n = a.count;
  const std::size_t inner = f.stride(axis);
  const std::size_t outer = static_cast<std::size_t>(f.size()) / (n * inner);
  const auto& v = f.values();
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * n * inner + i;
      cplx s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double wj = (!a.periodic && (j == 0 || j + 1 == n)) ? 0.5 : 1.0;
        s += wj * v[static_cast<Eigen::Index>(base + j * inner)];
      }
      out[static_cast<Eigen::Index>(o * inner + i)] = s * a.step;
    }
  return out;
}

Field integrate_x(const Field& f, AxisLabel label, std::uint8_t mode) {
  const std::size_t k = f.axis_index(label, mode);
  if (f.axis(k).periodic) throw DomainError("integrate_x: axis is periodic");
  return integrate_axis(f, k);
}

cplx integrate_all(const Field& f) {
  Field g = f;
  while (g.rank() > 0) g = integrate_axis(g, 0);
  return g[0];
}

}  // namespace tomolab
