#include "tomolab/moyal.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "lines.hpp"
#include "tomolab/spectral.hpp"
#include "tomolab/transforms.hpp"

namespace tomolab {

namespace {

using std::numbers::pi;

struct PhaseAxes {
  std::size_t q, p;
};

std::vector<PhaseAxes> phase_axes(const Field& W) {
  std::vector<PhaseAxes> out;
  for (std::uint8_t s = 0;; ++s) {
    auto q = W.find_axis(AxisLabel::q, s);
    auto p = W.find_axis(AxisLabel::p, s);
    if (!q && !p) break;
    if (!q || !p) throw DomainError("phase-space field needs both q and p axes for mode " + std::to_string(s));
    out.push_back({*q, *p});
  }
  if (out.empty()) throw DomainError("phase-space field has no (q, p) axes");
  std::size_t pairs = 0;
  for (const auto& a : W.axes())
    if (a.label == AxisLabel::q) ++pairs;
  if (pairs != out.size()) throw DomainError("phase-space modes must be numbered 0..n-1");
  return out;
}

PolynomialPotential fit(const PolynomialPotential& U, std::size_t n) {
  if (U.modes() == n) return U;
  if (U.modes() > n) throw DomainError("potential has more modes than the field");
  return U.widened(n);
}

Field kinetic(const Field& W, const std::vector<PhaseAxes>& ax, const PolynomialPotential& U) {
  Field out(W.axes());
  out.metadata() = W.metadata();
  for (std::size_t s = 0; s < ax.size(); ++s) {
    const double m = U.constants(s).mass;
    const std::size_t kp = ax[s].p;
    out += pointwise_mul(spectral_derivative(W, ax[s].q, 1), [&](std::span<const double> c) { return -c[kp] / m; });
  }
  return out;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Next multi-index j with 0 <= j_s <= e_s; false after the last one.
bool next_index(std::vector<int>& j, const std::vector<int>& e) {
  for (std::size_t s = 0; s < j.size(); ++s) {
    if (++j[s] <= e[s]) return true;
    j[s] = 0;
  }
  return false;
}

Field momentum_derivative(const Field& W, const std::vector<PhaseAxes>& ax, const std::vector<int>& j,
                          std::map<std::vector<int>, Field>& cache) {
  if (auto it = cache.find(j); it != cache.end()) return it->second;
  Field d = W;
  for (std::size_t s = 0; s < j.size(); ++s)
    if (j[s] > 0) d = spectral_derivative(d, ax[s].p, j[s]);
  cache.emplace(j, d);
  return d;
}

Field potential_terms(const Field& W, const std::vector<PhaseAxes>& ax, const PolynomialPotential& U, double hbar,
                      int max_order) {
  Field out(W.axes());
  out.metadata() = W.metadata();
  std::map<std::vector<int>, Field> cache;
  const std::size_t n = ax.size();
  for (const auto& mono : U.monomials()) {
    std::vector<int> j(n, 0);
    while (next_index(j, mono.exponents)) {
      int order = 0;
      double coef = mono.coefficient;
      for (std::size_t s = 0; s < n; ++s) {
        order += j[s];
        coef *= binomial(mono.exponents[s], j[s]);
      }
      if (order % 2 == 0 || order > max_order) continue;
      coef *= ((order - 1) / 2 % 2 == 0 ? 1.0 : -1.0) * std::pow(0.5 * hbar, order - 1);
      if (coef == 0.0) continue;
      const Field d = momentum_derivative(W, ax, j, cache);
      out += pointwise_mul(d, [&](std::span<const double> c) {
        double v = coef;
        for (std::size_t s = 0; s < n; ++s)
          for (int r = 0; r < mono.exponents[s] - j[s]; ++r) v *= c[ax[s].q];
        return v;
      });
    }
  }
  return out;
}

// W(q_i, p) from rho without any Hermiticity check.
Field wigner_transform(const Field& rho, const Axis& p_axis, double hbar) {
  const Axis& xa = rho.axis(0);
  const auto N = static_cast<Eigen::Index>(xa.count);
  const Eigen::Index K = 2 * N - 1;
  const double h = xa.step;
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(N, K);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index k = -(N - 1); k <= N - 1; ++k) {
      const Eigen::Index a = i + k, b = i - k;
      if (a < 0 || b < 0 || a >= N || b >= N) continue;
      G(i, k + N - 1) = rho[a * N + b];
    }
  const auto Np = static_cast<Eigen::Index>(p_axis.count);
  Eigen::MatrixXcd E(K, Np);
  for (Eigen::Index k = 0; k < K; ++k) {
    const double u = 2.0 * static_cast<double>(k - (N - 1)) * h;
    for (Eigen::Index l = 0; l < Np; ++l) E(k, l) = 2.0 * h * std::exp(cplx(0.0, -p_axis[l] * u / hbar));
  }
  Eigen::MatrixXcd Wm = G * E;
  Axis q = xa;
  q.label = AxisLabel::q;
  q.mode = 0;
  Axis p = p_axis;
  p.label = AxisLabel::p;
  p.mode = 0;
  Field W({q, p});
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index l = 0; l < Np; ++l) W[i * Np + l] = Wm(i, l);
  return W;
}

void check_density_axes(const Field& rho) {
  if (rho.rank() != 2 || rho.axis(0).label != AxisLabel::x || rho.axis(1).label != AxisLabel::x_prime)
    throw DomainError("density matrix must have (x, x_prime) axes");
  const Axis& a = rho.axis(0);
  const Axis& b = rho.axis(1);
  if (a.count != b.count || a.start != b.start || a.step != b.step)
    throw DomainError("density matrix axes x and x_prime must coincide");
}

}  // namespace

Field moyal_generator(const Field& W, const PolynomialPotential& Uin, std::optional<double> hbar) {
  const auto ax = phase_axes(W);
  const PolynomialPotential U = fit(Uin, ax.size());
  const double h = hbar.value_or(U.hbar());
  if (h < 0) throw DomainError("moyal_generator: hbar must be nonnegative");
  return kinetic(W, ax, U) + potential_terms(W, ax, U, h, h == 0.0 ? 1 : PolynomialPotential::kMaxDegree);
}

Field liouville_generator(const Field& f, const PolynomialPotential& Uin) {
  const auto ax = phase_axes(f);
  const std::size_t n = ax.size();
  const PolynomialPotential U = fit(Uin, n);
  Field out = kinetic(f, ax, U);
  for (std::size_t s = 0; s < n; ++s) {
    out += pointwise_mul(spectral_derivative(f, ax[s].p, 1), [&](std::span<const double> c) {
      double g = 0.0;
      for (const auto& mono : U.monomials()) {
        const int e = mono.exponents[s];
        if (e == 0) continue;
        double v = mono.coefficient * e;
        for (std::size_t r = 0; r < n; ++r) v *= std::pow(c[ax[r].q], r == s ? e - 1 : mono.exponents[r]);
        g += v;
      }
      return g;
    });
  }
  return out;
}

double wigner_normalization(const Field& W) {
  const auto ax = phase_axes(W);
  return integrate_all(W).real() / std::pow(2.0 * pi, static_cast<double>(ax.size()));
}

Field density_from_wavefunction(const Field& psi) {
  if (psi.rank() != 1) throw DomainError("density_from_wavefunction: psi must be one-dimensional");
  Axis x = psi.axis(0);
  x.label = AxisLabel::x;
  x.mode = 0;
  Axis xp = x;
  xp.label = AxisLabel::x_prime;
  Field rho({x, xp});
  const auto N = static_cast<Eigen::Index>(x.count);
  for (Eigen::Index a = 0; a < N; ++a)
    for (Eigen::Index b = 0; b < N; ++b) rho[a * N + b] = psi[a] * std::conj(psi[b]);
  return rho;
}

Field wigner_from_density(const Field& rho, const Axis& p_axis, double hbar, double hermitian_tol) {
  check_density_axes(rho);
  if (!(hbar > 0)) throw DomainError("wigner_from_density: hbar must be positive");
  const std::size_t N = rho.axis(0).count;
  double defect = 0.0;
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = a; b < N; ++b) defect = std::max(defect, std::abs(rho.at({a, b}) - std::conj(rho.at({b, a}))));
  if (defect > hermitian_tol * std::max(1.0, sup_norm(rho)))
    throw ContractViolation("wigner_from_density: density matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  return wigner_transform(rho, p_axis, hbar);
}

Field density_from_wigner(const Field& W, double hbar) {
  if (W.rank() != 2 || W.axis(0).label != AxisLabel::q || W.axis(1).label != AxisLabel::p)
    throw DomainError("density_from_wigner: expected a single-mode (q, p) field");
  if (!(hbar > 0)) throw DomainError("density_from_wigner: hbar must be positive");
  const Axis& qa = W.axis(0);
  const Axis& pa = W.axis(1);
  const auto N = static_cast<Eigen::Index>(qa.count);
  const auto Np = static_cast<Eigen::Index>(pa.count);
  const double h = qa.step;

  // W at q + h/2 by Fourier translation along q.
  const Eigen::VectorXd k = wavenumbers(qa);
  Eigen::VectorXcd shift(N);
  for (Eigen::Index j = 0; j < N; ++j) shift[j] = std::exp(cplx(0.0, 0.5 * h * k[j]));
  if (N % 2 == 0) shift[N / 2] = std::cos(0.5 * h * k[N / 2]);
  const Field Wh = detail::apply_multiplier(W, 0, shift);

  const Eigen::Index K = 2 * N - 1;
  Eigen::MatrixXcd E(Np, K);
  for (Eigen::Index l = 0; l < Np; ++l)
    for (Eigen::Index m = 0; m < K; ++m)
      E(l, m) = pa.step / (2.0 * pi * hbar) * std::exp(cplx(0.0, pa[l] * static_cast<double>(m - (N - 1)) * h / hbar));
  const Eigen::MatrixXcd Wm = Eigen::Map<const Eigen::Matrix<cplx, -1, -1, Eigen::RowMajor>>(W.values().data(), N, Np);
  const Eigen::MatrixXcd Whm = Eigen::Map<const Eigen::Matrix<cplx, -1, -1, Eigen::RowMajor>>(Wh.values().data(), N, Np);
  const Eigen::MatrixXcd F = Wm * E;
  const Eigen::MatrixXcd Fh = Whm * E;

  Axis x = qa;
  x.label = AxisLabel::x;
  Axis xp = qa;
  xp.label = AxisLabel::x_prime;
  Field rho({x, xp});
  for (Eigen::Index a = 0; a < N; ++a)
    for (Eigen::Index b = 0; b < N; ++b) {
      const Eigen::Index m = a - b + N - 1;
      rho[a * N + b] = (a + b) % 2 == 0 ? F((a + b) / 2, m) : Fh((a + b - 1) / 2, m);
    }
  return rho;
}

TimePotential parametric_potential(const FrequencyProfile& profile, const ModeConstants& c) {
  return [profile, c](double t) {
    const double w = profile(t);
    return PolynomialPotential(1, {Monomial{{2}, 0.5 * c.mass * w * w}}, {c});
  };
}

std::vector<Snapshot> evolve_moyal(const Field& W0, const TimePotential& U, double dt, long steps, long snapshot_every,
                                   const MoyalOptions& opt) {
  if (!(dt > 0) || !std::isfinite(dt)) throw DomainError("evolve_moyal: dt must be positive");
  if (steps < 0) throw DomainError("evolve_moyal: steps must be nonnegative");
  if (snapshot_every <= 0) throw DomainError("evolve_moyal: snapshot cadence must be positive");
  phase_axes(W0);
  const auto rhs = [&](double t, const Field& W) {
    return opt.classical ? liouville_generator(W, U(t)) : moyal_generator(W, U(t));
  };
  const auto snap = [](const Field& W, double t, long n) {
    Snapshot s{t, n, W, std::abs(wigner_normalization(W) - 1.0), std::nullopt};
    std::ostringstream os;
    os.precision(17);
    os << t;
    s.field.metadata()["time"] = os.str();
    return s;
  };
  const double sup0 = sup_norm(W0);
  std::vector<Snapshot> out{snap(W0, 0.0, 0)};
  Field W = W0;
  for (long n = 1; n <= steps; ++n) {
    const double t = dt * static_cast<double>(n - 1);
    const Field k1 = rhs(t, W);
    const Field k2 = rhs(t + 0.5 * dt, W + (0.5 * dt) * k1);
    const Field k3 = rhs(t + 0.5 * dt, W + (0.5 * dt) * k2);
    const Field k4 = rhs(t + dt, W + dt * k3);
    W.mutable_values() += (dt / 6.0) * (k1.values() + 2.0 * k2.values() + 2.0 * k3.values() + k4.values());
    if (!W.values().real().allFinite() || !W.values().imag().allFinite())
      throw NumericalError("evolve_moyal: non-finite values at step " + std::to_string(n), n);
    if (sup_norm(W) > opt.blowup_factor * sup0)
      throw NumericalError("evolve_moyal: solution blew up at step " + std::to_string(n), n);
    if (n % snapshot_every == 0 || n == steps) out.push_back(snap(W, dt * static_cast<double>(n), n));
  }
  return out;
}

std::vector<Snapshot> evolve_moyal(const Field& W0, const PolynomialPotential& U, double dt, long steps,
                                   long snapshot_every, const MoyalOptions& opt) {
  return evolve_moyal(W0, [U](double) { return U; }, dt, steps, snapshot_every, opt);
}

Field wigner_of_state(const StateSpec& s, const Axis& q_axis, const Axis& p_axis) {
  if (const auto* g = std::get_if<ClassicalGaussianState>(&s)) return classical_gaussian(*g, q_axis, p_axis);
  const auto& ps = std::get<PacsState>(s);
  return wigner_of_wavefunction(pacs_wavefunction(ps, 0.0, q_axis), p_axis);
}

bool CorrespondenceReport::pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return generator.pass;
}

CorrespondenceReport correspondence_check(const StateSpec& state, const PolynomialPotential& U, double tolerance,
                                          const CorrespondenceGrids& g) {
  CorrespondenceReport rep;
  rep.state = std::visit([](const auto& s) { return s.id(); }, state);
  rep.potential = U.to_string();
  rep.tolerance = tolerance;
  const auto row = [&](std::string name, double norm) { return CorrespondenceRow{std::move(name), norm, norm <= tolerance}; };

  const Field W = wigner_of_state(state, g.q, g.p);
  const Field w = radon_optical(W, g.X, g.theta);
  const auto radon = [&](const Field& f) { return radon_optical(f, g.X, g.theta); };
  const Field dqW = spectral_dx(W, AxisLabel::q);
  const Field dpW = spectral_dx(W, AxisLabel::p);
  const Field qW = pointwise_mul(W, [](std::span<const double> c) { return c[0]; });
  const Field pW = pointwise_mul(W, [](std::span<const double> c) { return c[1]; });

  const Field rdq = radon(dqW), rdp = radon(dpW), rq = radon(qW), rp = radon(pW);
  rep.rows.push_back(row("dq", sup_diff(rdq, dq_operator_optical(w))));
  rep.rows.push_back(row("dp", sup_diff(rdp, dp_operator_optical(w))));
  rep.rows.push_back(row("q", sup_diff(rq, q_operator_optical(w))));
  rep.rows.push_back(row("p", sup_diff(rp, p_operator_optical(w))));

  {
    // symplectic tomograms of the same four fields through the optical bridge
    const double h = g.patch_step;
    const Axis mu = Axis::uniform(AxisLabel::mu, g.mu0 - 6 * h, g.mu0 + 7 * h, 13);
    const Axis nu = Axis::uniform(AxisLabel::nu, g.nu0 - 6 * h, g.nu0 + 7 * h, 13);
    const auto sym = [&](const Field& opt) { return optical_to_symplectic(opt, g.X, mu, nu); };
    const Field M = sym(w);
    double err = 0.0;
    const auto compare = [&](const Field& a, const Field& b) {
      for (std::size_t i = 0; i < g.X.count; ++i) err = std::max(err, std::abs(a.at({i, 6, 6}) - b.at({i, 6, 6})));
    };
    compare(sym(rq), q_operator_symplectic(M));
    compare(sym(rp), p_operator_symplectic(M));
    compare(sym(rdq), dq_operator_symplectic(M));
    compare(sym(rdp), dp_operator_symplectic(M));
    rep.rows.push_back(row("symplectic", err));
  }

  {
    Axis xa = g.q;
    xa.label = AxisLabel::x;
    const Field rho = std::holds_alternative<PacsState>(state)
                          ? density_from_wavefunction(pacs_wavefunction(std::get<PacsState>(state), 0.0, xa))
                          : density_from_wigner(W);
    const Field Wr = wigner_from_density(rho, g.p);
    const Field dq = spectral_dx(Wr, AxisLabel::q);
    const Field dp = spectral_dx(Wr, AxisLabel::p);
    const cplx I(0.0, 1.0);
    const auto x_of = [&](bool prime) {
      return pointwise_mul(rho, [prime](std::span<const double> c) { return prime ? c[1] : c[0]; });
    };
    const auto bridge = [&](const Field& r) { return wigner_transform(r, g.p, 1.0); };
    const Field qWr = pointwise_mul(Wr, [](std::span<const double> c) { return c[0]; });
    const Field pWr = pointwise_mul(Wr, [](std::span<const double> c) { return c[1]; });
    double err = 0.0;
    err = std::max(err, sup_diff(bridge(x_of(false)), qWr + (0.5 * I) * dp));
    err = std::max(err, sup_diff(bridge(x_of(true)), qWr - (0.5 * I) * dp));
    err = std::max(err, sup_diff(bridge(spectral_derivative(rho, 0, 1)), 0.5 * dq + I * pWr));
    err = std::max(err, sup_diff(bridge(spectral_derivative(rho, 1, 1)), 0.5 * dq - I * pWr));
    rep.rows.push_back(row("density", err));
  }

  rep.generator = row("generator", sup_diff(radon(moyal_generator(W, U)), optical_generator(w, U)));
  return rep;
}

}  // namespace tomolab
