#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "tomolab/field_io.hpp"
#include "tomolab/spectral.hpp"

using namespace tomolab;
using std::numbers::pi;

namespace {

Axis xaxis(double half = 8.0, std::size_t n = 256) { return Axis::uniform(AxisLabel::X, -half, half, n); }

Field line(const Axis& a, const std::function<cplx(double)>& fn) {
  return Field::sample({a}, [&](std::span<const double> c) { return fn(c[0]); });
}

Field optical(const std::function<cplx(double, double)>& fn, std::size_t nx = 256, std::size_t nt = 64) {
  return Field::sample({xaxis(8.0, nx), Axis::angle(nt)}, [&](std::span<const double> c) { return fn(c[0], c[1]); });
}

}  // namespace

TEST_CASE("axis invariants") {
  CHECK_THROWS_AS(Axis::uniform(AxisLabel::X, 0, 1, 3), DomainError);
  CHECK_THROWS_AS((Axis{AxisLabel::theta, 0.0, 0.1, 10, true}.validate()), DomainError);
  CHECK_THROWS_AS((Axis{AxisLabel::X, 0.0, -0.1, 10, false}.validate()), DomainError);
  Axis t = Axis::angle(64);
  CHECK(t.start + t.step * 64 == doctest::Approx(2 * pi));
  CHECK_THROWS_AS(Field({xaxis()}, Field::Values::Zero(3)), DomainError);
}

TEST_CASE("derivative of exact Fourier modes") {
  // sin(2X) is periodic on [-4pi, 4pi) but not on [-8, 8)
  Axis a = xaxis(4 * pi);
  Field f = line(a, [](double x) { return std::sin(2 * x); });
  Field want = line(a, [](double x) { return 2 * std::cos(2 * x); });
  CHECK(sup_diff(spectral_dx(f), want) <= 1e-10);
}

TEST_CASE("derivative of a Gaussian") {
  Axis a = xaxis();
  Field f = line(a, [](double x) { return std::exp(-x * x); });
  Field want = line(a, [](double x) { return -2 * x * std::exp(-x * x); });
  CHECK(sup_diff(spectral_dx(f), want) <= 1e-8);
  Field c = line(a, [](double) { return 3.0; });
  CHECK(sup_norm(spectral_dx(c)) <= 1e-12);
}

TEST_CASE("spectral_dx errors") {
  Field f = optical([](double x, double) { return std::exp(-x * x); });
  CHECK_THROWS_AS(spectral_dx(f, AxisLabel::mu), DomainError);
  CHECK_THROWS_AS(spectral_dx(f, AxisLabel::theta), ContractViolation);
  CHECK_THROWS_AS(spectral_dtheta(line(xaxis(), [](double) { return 1.0; })), DomainError);
}

TEST_CASE("antiderivative on plane waves") {
  Axis a = xaxis(4 * pi);
  Field f = line(a, [](double x) { return std::exp(cplx(0, 2 * x)); });
  Field want = line(a, [](double x) { return std::exp(cplx(0, 2 * x)) / cplx(0, 2); });
  CHECK(sup_diff(spectral_inv_dx(f), want) <= 1e-12);
  Field g = line(a, [](double x) { return std::cos(3 * x); });
  Field gw = line(a, [](double x) { return std::sin(3 * x) / 3; });
  CHECK(sup_diff(spectral_inv_dx(g), gw) <= 1e-12);
  CHECK(sup_norm(spectral_inv_dx(line(a, [](double) { return 2.0; }))) <= 1e-14);
}

TEST_CASE("antiderivative identities") {
  Axis a = xaxis();
  Field f = line(a, [](double x) { return std::exp(-(x - 1) * (x - 1)) * cplx(1 + x, 0.3 * x * x); });
  CHECK(sup_diff(spectral_dx(spectral_inv_dx(f)), f - [&] {
          // dx(inv_dx f) removes the mean and the Nyquist component
          Field m = f;
          m.mutable_values().setConstant(f.values().mean());
          return m;
        }()) <= 1e-9);
  Field g = spectral_dx(f);
  Field mean = f;
  mean.mutable_values().setConstant(f.values().mean());
  CHECK(sup_diff(spectral_inv_dx(g), f - mean) <= 1e-9);
}

TEST_CASE("decaying antiderivative vanishes at both ends") {
  Axis a = xaxis();
  // d/dX of a decaying function: the antiderivative is that function itself
  Field f = line(a, [](double x) { return (x - 0.5) * std::exp(-x * x / 2) * x; });
  Field df = spectral_dx(f);
  CHECK(sup_diff(decaying_inv_dx(df), f) <= 1e-10);
  Field g = line(a, [](double x) { return -2 * x * std::exp(-x * x); });
  Field gw = line(a, [](double x) { return std::exp(-x * x); });
  CHECK(sup_diff(decaying_inv_dx(g), gw) <= 1e-10);
}

TEST_CASE("theta derivative") {
  Field s = optical([](double, double t) { return std::sin(t); });
  Field c = optical([](double, double t) { return std::cos(t); });
  CHECK(sup_diff(spectral_dtheta(s), c) <= 1e-12);
  CHECK(sup_norm(spectral_dtheta(optical([](double x, double) { return std::exp(-x * x); }))) <= 1e-12);
  auto w = [](double x, double t) { return std::exp(-(x - std::cos(t)) * (x - std::cos(t))) / std::sqrt(pi); };
  Field f = optical(w);
  Field want = optical([&](double x, double t) { return 2 * (x - std::cos(t)) * (-std::sin(t)) * w(x, t); });
  CHECK(sup_diff(spectral_dtheta(f), want) <= 1e-8);
}

TEST_CASE("periodic shift") {
  Field f = optical([](double x, double t) { return std::exp(-(x - std::cos(t)) * (x - std::cos(t))); });
  Field want = optical([](double x, double t) { return std::exp(-(x - std::cos(t + 0.3)) * (x - std::cos(t + 0.3))); });
  CHECK(sup_diff(shift_periodic(f, 1, 0.3), want) <= 1e-10);
}

TEST_CASE("quadrature") {
  Field g = optical([](double x, double) { return std::exp(-x * x) / std::sqrt(pi); });
  Field tot = integrate_x(g);
  CHECK(tot.rank() == 1);
  for (Eigen::Index j = 0; j < tot.size(); ++j) CHECK(std::abs(tot[j] - 1.0) <= 1e-10);
  Field f1 = line(xaxis(), [](double x) { return 2 * x * x * std::exp(-x * x) / std::sqrt(pi); });
  CHECK(std::abs(integrate_x(f1)[0] - 1.0) <= 1e-10);
  Field d = spectral_dx(f1);
  CHECK(std::abs(integrate_x(d)[0]) <= 1e-10);
}

TEST_CASE("pointwise multiplication") {
  Field one = optical([](double, double) { return 1.0; }, 64, 16);
  Field xc = pointwise_mul(one, [](std::span<const double> c) { return c[0] * std::cos(c[1]); });
  for (std::size_t i : {0u, 7u, 63u})
    for (std::size_t j : {0u, 5u})
      CHECK(xc.at({i, j}).real() == doctest::Approx(one.axis(0)[i] * std::cos(one.axis(1)[j])));
  CHECK(sup_diff(pointwise_mul(xc, [](auto) { return 1.0; }), xc) == 0.0);
  Field s = pointwise_mul(one, [](std::span<const double> c) { return -0.5 * std::sin(2 * c[1]); });
  CHECK(sup_norm(integrate_axis(s, 1)) <= 1e-14);
}

TEST_CASE("linearity and commutation") {
  Field f = optical([](double x, double t) { return std::exp(-(x - std::sin(t)) * (x - std::sin(t))); });
  Field g = optical([](double x, double t) { return x * std::exp(-x * x) * std::cos(2 * t); });
  const cplx a(0.7, -0.2), b(-1.3, 0.0);
  CHECK(sup_diff(spectral_dx(a * f + b * g), a * spectral_dx(f) + b * spectral_dx(g)) <= 1e-12);
  CHECK(sup_diff(spectral_inv_dx(a * f + b * g), a * spectral_inv_dx(f) + b * spectral_inv_dx(g)) <= 1e-12);
  CHECK(sup_diff(spectral_dtheta(spectral_inv_dx(f)), spectral_inv_dx(spectral_dtheta(f))) <= 1e-12);
  CHECK(sup_diff(spectral_dtheta(spectral_dx(g)), spectral_dx(spectral_dtheta(g))) <= 1e-12);
}

TEST_CASE("fornberg weights and finite differences") {
  std::vector<double> nodes{-2, -1, 0, 1, 2};
  auto w = fornberg_weights(0.0, nodes, 2);
  CHECK(w[1][0] == doctest::Approx(1.0 / 12));
  CHECK(w[1][1] == doctest::Approx(-8.0 / 12));
  CHECK(w[2][2] == doctest::Approx(-30.0 / 12));
  Axis mu = Axis::uniform(AxisLabel::mu, 0.5, 1.1, 24);
  Field f = Field::sample({mu}, [](std::span<const double> c) { return std::sin(c[0]); });
  Field d1 = fd_derivative(f, AxisLabel::mu, 1);
  Field d2 = fd_derivative(f, AxisLabel::mu, 2);
  Field c1 = Field::sample({mu}, [](std::span<const double> c) { return std::cos(c[0]); });
  CHECK(sup_diff(d1, c1) <= 1e-6);
  CHECK(sup_diff(d2, -1.0 * f) <= 1e-4);
  // exact on quartics
  Field q = Field::sample({mu}, [](std::span<const double> c) { return std::pow(c[0], 4); });
  Field dq = Field::sample({mu}, [](std::span<const double> c) { return 4 * std::pow(c[0], 3); });
  CHECK(sup_diff(fd_derivative(q, AxisLabel::mu, 1), dq) <= 1e-10);
}

TEST_CASE("TOMF1 and CSV round trip") {
  Field f = optical([](double x, double t) { return cplx(std::exp(-x * x), std::sin(t)); }, 16, 8);
  f.metadata()["state"] = "x";
  std::stringstream ss;
  write_field(ss, f);
  Field g = read_field(ss);
  CHECK(g.same_grid(f, 0.0));
  CHECK(sup_diff(f, g) == 0.0);
  std::stringstream bad("TOMF2");
  CHECK_THROWS_AS(read_field(bad), DomainError);
  std::stringstream csv;
  write_csv(csv, f);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "X,theta,re,im");
  std::size_t rows = 0;
  for (std::string l; std::getline(csv, l);) ++rows;
  CHECK(rows == 16 * 8);
}
