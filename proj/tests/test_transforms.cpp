#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "tomolab/spectral.hpp"
#include "tomolab/states.hpp"
#include "tomolab/transforms.hpp"

using namespace tomolab;
using std::numbers::pi;

namespace {

const Axis kX = Axis::uniform(AxisLabel::X, -8, 8, 256);
const Axis kTheta = Axis::angle(64);
const Axis kQ = Axis::uniform(AxisLabel::q, -8, 8, 256);
const Axis kP = Axis::uniform(AxisLabel::p, -8, 8, 256);

Field wigner(const PacsState& s, double t = 0.0) { return wigner_of_wavefunction(pacs_wavefunction(s, t, kQ), kP); }

Field analytic_wigner(double (*fn)(double, double)) {
  return Field::sample({kQ, kP}, [&](std::span<const double> c) { return fn(c[0], c[1]); });
}

}  // namespace

TEST_CASE("radon transform of analytic Wigner functions") {
  Field w0 = radon_optical(analytic_wigner(oracle::vacuum_wigner), kX, kTheta);
  Field want = Field::sample({kX, kTheta}, [](std::span<const double> c) { return std::exp(-c[0] * c[0]) / std::sqrt(pi); });
  CHECK(sup_diff(w0, want) <= 1e-6);
  CHECK(is_probability(w0));

  Field w1 = radon_optical(analytic_wigner(oracle::fock1_wigner), kX, kTheta);
  Field want1 = Field::sample({kX, kTheta}, [](std::span<const double> c) { return oracle::fock_density(1, c[0]); });
  CHECK(sup_diff(w1, want1) <= 1e-5);
}

TEST_CASE("theta = 0 slice is the position marginal") {
  Field W = wigner(PacsState{cplx(1, 0.5), 1, {}});
  Field w = radon_optical(W, Axis::uniform(AxisLabel::X, -8, 8, 256), kTheta);
  Field marg = integrate_axis(W, 1);
  double err = 0.0;
  for (std::size_t i = 0; i < 256; ++i) err = std::max(err, std::abs(w.at({i, 0}) - marg[static_cast<Eigen::Index>(i)] / (2 * pi)));
  CHECK(err <= 1e-8);
}

TEST_CASE("radon output is symmetric and normalized") {
  for (const auto& s : catalog()) {
    Field w = radon_optical(wigner(s, 0.7), kX, kTheta);
    double sym = 0.0;
    for (std::size_t i = 1; i < 256; ++i)
      for (std::size_t j = 0; j < 64; ++j) sym = std::max(sym, std::abs(w.at({i, j}) - w.at({256 - i, (j + 32) % 64})));
    CHECK(sym <= 1e-10);
    Field tot = integrate_x(w);
    for (Eigen::Index j = 0; j < tot.size(); ++j) CHECK(std::abs(tot[j] - 1.0) <= 1e-8);
    CHECK(sup_diff(w, pacs_optical_tomogram(s, 0.7, kX, kTheta)) <= 1e-6);
  }
}

TEST_CASE("projection-slice identity") {
  Field W = wigner(PacsState{1.0, 2, {}});
  Field w = radon_optical(W, kX, kTheta);
  CharacteristicFunction chi = characteristic_fn(w);
  double err = 0.0;
  for (std::size_t j : {0u, 5u, 17u, 40u})
    for (std::size_t m : {100u, 120u, 128u, 131u, 150u}) {
      const double eta = chi.values.axis(0)[m];
      const double c = std::cos(kTheta[j]), s = std::sin(kTheta[j]);
      cplx direct = 0.0;
      for (std::size_t a = 0; a < 256; ++a)
        for (std::size_t b = 0; b < 256; ++b)
          direct += W.at({a, b}) * std::polar(1.0, eta * (c * kQ[a] + s * kP[b]));
      direct *= kQ.step * kP.step / (2 * pi);
      err = std::max(err, std::abs(direct - chi.values.at({m, j})));
    }
  CHECK(err <= 1e-7);
}

TEST_CASE("symplectic radon transform") {
  // 0.4 <= |(mu, nu)| <= 1.2: wide enough to resolve on the X grid, narrow enough to stay inside |X| < 8
  const Axis mu = Axis::uniform(AxisLabel::mu, 0.4, 1.0, 12);
  const Axis nu = Axis::uniform(AxisLabel::nu, -0.6, 0.6, 12);
  Field M = radon_symplectic(analytic_wigner(oracle::vacuum_wigner), kX, mu, nu);
  Field want = Field::sample({kX, mu, nu}, [](std::span<const double> c) {
    const double r2 = c[1] * c[1] + c[2] * c[2];
    return std::exp(-c[0] * c[0] / r2) / std::sqrt(pi * r2);
  });
  CHECK(sup_diff(M, want) <= 1e-6);

  Field Mc = radon_symplectic(wigner(PacsState{cplx(1, 0.5), 1, {}}), kX, mu, nu);
  Field tot = integrate_x(Mc);
  for (Eigen::Index j = 0; j < tot.size(); ++j) CHECK(std::abs(tot[j] - 1.0) <= 1e-8);
  Field exact = pacs_symplectic_field(PacsState{cplx(1, 0.5), 1, {}}, 0.0, kX, mu, nu);
  CHECK(sup_diff(Mc, exact) <= 1e-6);
}

TEST_CASE("symplectic homogeneity from the optical bridge") {
  Field w = pacs_optical_tomogram(PacsState{cplx(1, 0.5), 1, {}}, 0.0, kX, kTheta);
  TomogramInterpolant I(w);
  for (auto [X, mu, nu] : {std::tuple{0.7, 0.9, 0.4}, {-1.1, -0.3, 1.2}, {0.2, 0.5, -0.8}}) {
    const double base = optical_to_symplectic(I, X, mu, nu);
    for (double lam : {-1.0, 2.0}) {
      const double scaled = optical_to_symplectic(I, lam * X, lam * mu, lam * nu);
      CHECK(std::abs(scaled - base / std::abs(lam)) <= 1e-8 * base);
    }
  }
  const double m1 = optical_to_symplectic(I, 1.0, 1.0, 0.0);
  CHECK(std::abs(optical_to_symplectic(I, 3.0, 3.0, 0.0) - m1 / 3) <= 1e-9 * m1);
}

TEST_CASE("optical to symplectic bridge") {
  Field w = pacs_optical_tomogram(vacuum(), 0.0, kX, kTheta);
  TomogramInterpolant I(w);
  for (std::size_t j : {0u, 9u, 33u, 63u})
    for (std::size_t i : {20u, 128u, 200u})
      CHECK(std::abs(optical_to_symplectic(I, kX[i], std::cos(kTheta[j]), std::sin(kTheta[j])) - w.at({i, j}).real()) <= 1e-12);
  CHECK(optical_to_symplectic(w, 0.0, 1.0, 1.0) == doctest::Approx(1 / std::sqrt(2 * pi)).epsilon(1e-10));
  CHECK(I.value(9.0, 0.3) == 0.0);
  CHECK_THROWS_AS(optical_to_symplectic(I, 0.0, 0.0, 0.0), DomainError);
  // off-grid evaluation against the closed form
  Field wc = pacs_optical_tomogram(PacsState{1.0, 2, {}}, 0.0, kX, kTheta);
  TomogramInterpolant Ic(wc);
  double err = 0.0;
  for (double X = -4; X <= 4; X += 0.37)
    for (double mu : {-0.8, 0.33, 1.1})
      for (double nu : {-0.6, 0.71, 0.05})
        err = std::max(err, std::abs(optical_to_symplectic(Ic, X, mu, nu) - pacs_symplectic_tomogram(PacsState{1.0, 2, {}}, 0.0, X, mu, nu)));
  CHECK(err <= 1e-6);
}

TEST_CASE("inverse radon reconstruction") {
  Field W0 = analytic_wigner(oracle::vacuum_wigner);
  Field R0 = inverse_radon(radon_optical(W0, kX, kTheta), kQ, kP);
  CHECK(sup_diff(R0, W0) <= 1e-3);
  CHECK(R0.metadata().count("symmetry_residual") == 1);
  CHECK(R0.metadata().at("taper").find("0.8") != std::string::npos);

  Field Rc = inverse_radon(pacs_optical_tomogram(coherent(1.0), 0.0, kX, kTheta), kQ, kP);
  Eigen::Index arg;
  Rc.values().real().maxCoeff(&arg);
  auto c = Rc.coords_of(arg);
  CHECK(std::abs(c[0] - std::sqrt(2.0)) <= kQ.step);
  CHECK(std::abs(c[1]) <= kP.step);

  Field R1 = inverse_radon(pacs_optical_tomogram(fock(1), 0.0, kX, kTheta), kQ, kP);
  CHECK(R1.at({128, 128}).real() == doctest::Approx(-2.0).epsilon(0.01));

  Field bad = pacs_optical_tomogram(coherent(1.0), 0.0, kX, kTheta);
  bad.mutable_values()[1000] += 1e-3;
  CHECK_THROWS_AS(inverse_radon(bad, kQ, kP), ContractViolation);
}

TEST_CASE("characteristic functions") {
  Field w = pacs_optical_tomogram(vacuum(), 0.0, kX, kTheta);
  CharacteristicFunction chi = characteristic_fn(w);
  CHECK(chi.values.axis(0).label == AxisLabel::eta);
  for (std::size_t j = 0; j < 64; ++j) CHECK(std::abs(chi.values.at({128, j}) - 1.0) <= 1e-12);
  Field want = Field::sample(chi.values.axes(), [](std::span<const double> c) { return std::exp(-c[0] * c[0] / 4); });
  CHECK(sup_diff(chi.values, want) <= 1e-8);
  Field back = inverse_characteristic_fn(chi);
  CHECK(sup_diff(back, w) <= 1e-14);

  const PacsState s{cplx(1, 0.5), 1, {}};
  Field wc = pacs_optical_tomogram(s, 0.0, kX, kTheta);
  CharacteristicFunction cw = characteristic_fn(wc);
  // chi(-eta) = conj(chi(eta))
  double herm = 0.0;
  for (std::size_t m = 1; m < 256; ++m)
    for (std::size_t j = 0; j < 64; j += 7) herm = std::max(herm, std::abs(cw.values.at({m, j}) - std::conj(cw.values.at({256 - m, j}))));
  CHECK(herm <= 1e-12);
  // symplectic characteristic function on the unit circle
  const Axis mu = Axis::uniform(AxisLabel::mu, 0.5, 1.1, 8);
  const Axis nu = Axis::uniform(AxisLabel::nu, 0.2, 0.9, 8);
  CharacteristicFunction cm = characteristic_fn(pacs_symplectic_field(s, 0.0, kX, mu, nu));
  CHECK(cm.values.axis(0).label == AxisLabel::z);
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = 0; b < 8; ++b) {
      const double r = std::hypot(mu[a], nu[b]);
      const double th = std::atan2(nu[b], mu[a]);
      // chi_M(z, mu, nu) = chi_w(z r, theta)
      for (std::size_t m : {120u, 128u, 134u}) {
        const double z = cm.values.axis(0)[m];
        cplx direct = 0.0;
        for (std::size_t i = 0; i < 256; ++i)
          direct += pacs_symplectic_tomogram(s, 0.0, kX[i], std::cos(th), std::sin(th)) * std::polar(1.0, z * r * kX[i]);
        direct *= kX.step;
        CHECK(std::abs(cm.values.at({m, a, b}) - direct) <= 1e-8);
      }
    }
}

TEST_CASE("quadrature moments") {
  Field w0 = pacs_optical_tomogram(vacuum(), 0.0, kX, kTheta);
  Field m0 = quadrature_moment(w0, 0);
  Field m2 = quadrature_moment(w0, 2);
  for (Eigen::Index j = 0; j < 64; ++j) {
    CHECK(std::abs(m0[j] - 1.0) <= 1e-12);
    CHECK(std::abs(m2[j] - 0.5) <= 1e-8);
  }
  Field wc = pacs_optical_tomogram(coherent(1.0), 0.0, kX, kTheta);
  Field m1 = quadrature_moment(wc, 1);
  for (std::size_t j = 0; j < 64; ++j) CHECK(std::abs(m1[static_cast<Eigen::Index>(j)] - std::sqrt(2.0) * std::cos(kTheta[j])) <= 1e-7);
  CHECK_THROWS_AS(quadrature_moment(wc, 9), DomainError);
  for (const auto& s : catalog()) {
    Field w = pacs_optical_tomogram(s, 0.0, kX, kTheta);
    for (int n = 0; n <= 4; ++n) CHECK(sup_diff(quadrature_moment(w, n), characteristic_moment(w, n)) <= 1e-5);
  }
}

TEST_CASE("reconstruction round trip over the catalog") {
  for (const auto& s : catalog()) {
    Field W = wigner(s);
    Field R = inverse_radon(radon_optical(W, kX, kTheta), kQ, kP);
    const double err = sup_diff(R, W);
    INFO(s.id() << " err " << err);
    CHECK(err <= 1e-3);
  }
}
