#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "tomolab/spectral.hpp"
#include "tomolab/states.hpp"

using namespace tomolab;
using std::numbers::pi;

namespace {
Axis xgrid() { return Axis::uniform(AxisLabel::X, -8, 8, 256); }
}  // namespace

TEST_CASE("special polynomials") {
  const cplx z(1, 1);
  CHECK(std::abs(hermite(0, z) - 1.0) < 1e-15);
  CHECK(std::abs(hermite(1, z) - cplx(2, 2)) < 1e-15);
  CHECK(std::abs(hermite(2, z) - cplx(-2, 8)) < 1e-14);
  for (int m = 0; m <= 30; ++m) CHECK(laguerre(m, 0.0) == doctest::Approx(1.0));
  CHECK(laguerre(2, -1.0) == doctest::Approx(3.5).epsilon(1e-15));
  CHECK_THROWS_AS(hermite(31, z), DomainError);
  CHECK_THROWS_AS(laguerre(-1, 0.0), DomainError);
}

TEST_CASE("epsilon trajectories") {
  auto one = solve_epsilon(FrequencyProfile::constant(1.0), std::vector<double>{pi / 2});
  CHECK(std::abs(one.samples[0].eps - cplx(0, 1)) <= 1e-9);

  // Omega = 2 from t = 0 on; the profile starts at 1 just before.
  auto two = solve_epsilon(FrequencyProfile::piecewise(1.0, {{0.0, 2.0}}), std::vector<double>{pi / 4});
  CHECK(std::abs(two.samples[0].eps - cplx(0, 0.5)) <= 1e-8);
  CHECK(std::abs(two.samples[0].eps_dot - cplx(-2, 0)) <= 1e-8);

  auto free = solve_epsilon(FrequencyProfile::piecewise(1.0, {{0.0, 0.0}}), std::vector<double>{1.0});
  CHECK(std::abs(free.samples[0].eps - cplx(1, 1)) <= 1e-12);

  CHECK_THROWS_AS(solve_epsilon(FrequencyProfile::constant(2.0), std::vector<double>{1.0}), ContractViolation);
}

TEST_CASE("Wronskian is conserved over [0, 10]") {
  std::vector<double> times;
  for (int i = 0; i <= 100; ++i) times.push_back(0.1 * i);
  for (const auto& prof : {FrequencyProfile::constant(1.0), FrequencyProfile::piecewise(1.0, {{0.0, 2.0}, {3.3, 0.5}}),
                           FrequencyProfile::sinusoidal(1.0, 0.3, 2.1)}) {
    auto traj = solve_epsilon(prof, times);
    CHECK(traj.max_wronskian_drift() <= 1e-9);
    CHECK(traj.samples.size() == times.size());
  }
}

TEST_CASE("unwrapped phase is continuous") {
  std::vector<double> times{1.0, 2.0, 4.0, 7.0};
  auto traj = solve_epsilon(FrequencyProfile::constant(1.0), times);
  for (const auto& s : traj.samples) CHECK(s.phase == doctest::Approx(s.t).epsilon(1e-9));
}

TEST_CASE("wavefunction values and normalization") {
  const Axis q = oracle::fine_q();
  Field v = pacs_wavefunction(vacuum(), 0.0, Axis::uniform(AxisLabel::q, -2, 2, 8));
  CHECK(std::abs(v[4] - std::pow(pi, -0.25)) <= 1e-12);
  Field f1 = pacs_wavefunction(fock(1), 0.37, Axis::uniform(AxisLabel::q, -2, 2, 8));
  CHECK(std::abs(f1[4]) <= 1e-14);
  auto jump = FrequencyProfile::piecewise(1.0, {{0.0, 2.0}});
  for (auto s : catalog()) {
    for (double t : {0.0, 0.7}) {
      Field psi = pacs_wavefunction(s, t, q);
      CHECK(psi.values().squaredNorm() * q.step == doctest::Approx(1.0).epsilon(1e-8));
    }
    s.profile = jump;
    Field psi = pacs_wavefunction(s, 1.0, q);
    CHECK(psi.values().squaredNorm() * q.step == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("closed-form symplectic tomogram") {
  for (double t : {0.0, 0.4, 2.0})
    for (double th : {0.0, 0.9, 2.5})
      for (double X : {-1.3, 0.0, 0.8})
        CHECK(pacs_symplectic_tomogram(vacuum(), t, X, std::cos(th), std::sin(th)) ==
              doctest::Approx(std::exp(-X * X) / std::sqrt(pi)).epsilon(1e-12));
  for (const auto& s : catalog())
    for (double X : {-1.0, 0.3, 2.2}) {
      const double a = pacs_symplectic_tomogram(s, 0.7, X, 0.6, -0.4);
      const double b = pacs_symplectic_tomogram(s, 0.7, 2 * X, 1.2, -0.8);
      CHECK(std::abs(b - a / 2) <= 1e-10 * std::abs(a));
    }
  for (double X : {-1.5, 0.2, 1.1})
    CHECK(pacs_symplectic_tomogram(fock(1), 0.0, X, 1.0, 0.0) ==
          doctest::Approx(2 / std::sqrt(pi) * X * X * std::exp(-X * X)).epsilon(1e-12));
  CHECK_THROWS_AS(pacs_symplectic_tomogram(vacuum(), 0.0, 1.0, 0.0, 0.0), DomainError);
}

TEST_CASE("closed form agrees with wavefunction quadrature") {
  const Axis q = oracle::fine_q();
  auto jump = FrequencyProfile::piecewise(1.0, {{0.0, 2.0}});
  double worst = 0.0;
  for (auto s : catalog())
    for (int prof = 0; prof < 2; ++prof) {
      if (prof) s.profile = jump;
      for (double t : {0.0, 0.7, 1.0}) {
        const EpsilonSample e = epsilon_at(s.profile, t);
        Field psi = pacs_wavefunction(s, e, q);
        for (auto [mu, nu] : {std::pair{0.955, 0.296}, {0.2, 1.3}, {-0.7, 0.4}, {1.0, -0.5}})
          for (double X = -5; X <= 5; X += 0.25)
            worst = std::max(worst, std::abs(pacs_symplectic_tomogram(s, e, X, mu, nu) -
                                             oracle::symplectic_from_psi(psi, X, mu, nu)));
      }
    }
  CHECK(worst <= 1e-9);
}

TEST_CASE("optical tomograms") {
  const Axis x = xgrid();
  const Axis th = Axis::angle(64);
  Field w0 = pacs_optical_tomogram(vacuum(), 0.3, x, th);
  CHECK(is_probability(w0));
  for (std::size_t j = 0; j < 64; ++j) CHECK(w0.at({128, j}).real() == doctest::Approx(1 / std::sqrt(pi)).epsilon(1e-12));
  Field w1 = pacs_optical_tomogram(fock(1), 0.0, x, th);
  Field w1b = pacs_optical_tomogram(fock(1), 1.7, x, th);
  Field want = Field::sample({x, th}, [](std::span<const double> c) { return oracle::fock_density(1, c[0]); });
  CHECK(sup_diff(w1, want) <= 1e-12);
  CHECK(sup_diff(w1, w1b) <= 1e-9);
  Field w2 = pacs_optical_tomogram(fock(2), 2.9, x, th);
  Field want2 = Field::sample({x, th}, [](std::span<const double> c) { return oracle::fock_density(2, c[0]); });
  CHECK(sup_diff(w2, want2) <= 1e-9);
  Field wc = pacs_optical_tomogram(coherent(cplx(1, 0.5)), 0.0, x, th);
  Field wcw = Field::sample({x, th}, [](std::span<const double> c) { return oracle::coherent_optical(cplx(1, 0.5), c[0], c[1]); });
  CHECK(sup_diff(wc, wcw) <= 1e-12);
  for (const auto& s : catalog()) {
    Field w = pacs_optical_tomogram(s, 0.7, x, th);
    Field tot = integrate_x(w);
    for (Eigen::Index j = 0; j < tot.size(); ++j) CHECK(std::abs(tot[j] - 1.0) <= 1e-8);
    // w(-X, theta + pi) = w(X, theta); X_{256-i} = -X_i
    double sym = 0.0;
    for (std::size_t i = 1; i < 256; ++i)
      for (std::size_t j = 0; j < 64; ++j)
        sym = std::max(sym, std::abs(w.at({i, j}) - w.at({256 - i, (j + 32) % 64})));
    CHECK(sym <= 1e-10);
    CHECK(w.values().real().minCoeff() >= 0.0);
  }
}

TEST_CASE("Wigner function of a wavefunction") {
  const Axis q = Axis::uniform(AxisLabel::q, -8, 8, 256);
  const Axis p = Axis::uniform(AxisLabel::p, -8, 8, 256);
  Field w0 = wigner_of_wavefunction(pacs_wavefunction(vacuum(), 0.0, q), p);
  Field want = Field::sample({q, p}, [](std::span<const double> c) { return oracle::vacuum_wigner(c[0], c[1]); });
  CHECK(sup_diff(w0, want) <= 1e-7);
  CHECK(w0.metadata().count("accuracy_warning") == 0);
  Field w1 = wigner_of_wavefunction(pacs_wavefunction(fock(1), 0.0, q), p);
  CHECK(w1.at({128, 128}).real() == doctest::Approx(-2.0).epsilon(1e-6));
  Field w1w = Field::sample({q, p}, [](std::span<const double> c) { return oracle::fock1_wigner(c[0], c[1]); });
  CHECK(sup_diff(w1, w1w) <= 1e-7);
  Field wc = wigner_of_wavefunction(pacs_wavefunction(coherent(cplx(1, 0.5)), 0.0, q), p);
  Field wcw = Field::sample({q, p}, [](std::span<const double> c) { return oracle::coherent_wigner(cplx(1, 0.5), c[0], c[1]); });
  CHECK(sup_diff(wc, wcw) <= 1e-7);
  for (const auto& s : catalog()) {
    Field w = wigner_of_wavefunction(pacs_wavefunction(s, 0.7, q), p);
    CHECK(std::abs(integrate_all(w) / (2 * pi) - 1.0) <= 1e-8);
  }
  Field narrow = wigner_of_wavefunction(pacs_wavefunction(coherent(3.0), 0.0, Axis::uniform(AxisLabel::q, -2, 2, 64)), p);
  CHECK(narrow.metadata().count("accuracy_warning") == 1);
}

TEST_CASE("classical Gaussian densities") {
  const Axis q = Axis::uniform(AxisLabel::q, -8, 8, 128);
  const Axis p = Axis::uniform(AxisLabel::p, -8, 8, 128);
  Field f = classical_gaussian({}, q, p);
  Field want = Field::sample({q, p}, [](std::span<const double> c) { return oracle::vacuum_wigner(c[0], c[1]); });
  CHECK(sup_diff(f, want) <= 1e-15);
  ClassicalGaussianState s{1.0, 0.0, 0.5 * Eigen::Matrix2d::Identity()};
  Field g = classical_gaussian(s, q, p);
  Eigen::Index arg;
  g.values().real().maxCoeff(&arg);
  auto c = g.coords_of(arg);
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == doctest::Approx(0.0));
  ClassicalGaussianState t{0.3, -0.2, (Eigen::Matrix2d() << 0.7, 0.2, 0.2, 0.4).finished()};
  CHECK(std::abs(integrate_all(classical_gaussian(t, q, p)) / (2 * pi) - 1.0) <= 1e-10);
  ClassicalGaussianState bad{0, 0, (Eigen::Matrix2d() << 1.0, 2.0, 2.0, 1.0).finished()};
  CHECK_THROWS_AS(classical_gaussian(bad, q, p), DomainError);
}
