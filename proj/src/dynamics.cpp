#include "tomolab/dynamics.hpp"

#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "tomolab/spectral.hpp"

namespace tomolab {

namespace {

std::set<std::uint8_t> modes_with(const Field& f, AxisLabel label) {
  std::set<std::uint8_t> m;
  for (const auto& a : f.axes())
    if (a.label == label) m.insert(a.mode);
  return m;
}

std::size_t count_modes(const Field& f, AxisLabel label) {
  auto m = modes_with(f, label);
  if (m.empty()) throw DomainError("field has no '" + std::string(to_string(label)) + "' axis");
  std::uint8_t expect = 0;
  for (auto x : m)
    if (x != expect++) throw DomainError("field modes must be numbered 0..n-1");
  return m.size();
}

std::uint8_t mode_id(std::size_t mode) {
  if (mode > 15) throw DomainError("at most 16 modes are supported");
  return static_cast<std::uint8_t>(mode);
}

// f * g(coordinate along axis k1, coordinate along axis k2)
template <typename G>
Field scale2(const Field& f, std::size_t k1, std::size_t k2, G&& g) {
  return pointwise_mul(f, [&](std::span<const double> c) { return g(c[k1], c[k2]); });
}

Eigen::VectorXd along(const Field& f, std::size_t k, const std::function<double(double)>& g) {
  return f.axis(k).coords().unaryExpr(g);
}

// f * a(coordinate along k1) * b(coordinate along k2)
Field scale_sep(const Field& f, std::size_t k1, const Eigen::VectorXd& a, std::size_t k2, const Eigen::VectorXd& b) {
  Field out(f.axes());
  out.metadata() = f.metadata();
  const auto& in = f.values();
  auto& v = out.mutable_values();
  const std::size_t r = f.rank();
  std::vector<Eigen::Index> idx(r, 0);
  for (Eigen::Index n = 0; n < in.size(); ++n) {
    v[n] = in[n] * (a[idx[k1]] * b[idx[k2]]);
    for (std::size_t d = r; d-- > 0;) {
      if (++idx[d] < static_cast<Eigen::Index>(f.axis(d).count)) break;
      idx[d] = 0;
    }
  }
  return out;
}

PolynomialPotential fit_modes(const PolynomialPotential& U, std::size_t n) {
  if (U.modes() == n) return U;
  if (U.modes() > n) throw DomainError("potential has more modes than the field");
  return U.widened(n);
}

struct OpticalAxes {
  std::size_t x, t;
};

OpticalAxes optical_axes(const Field& f, std::size_t mode) {
  const auto id = mode_id(mode);
  auto t = f.find_axis(AxisLabel::theta, id);
  if (!t || !f.axis(*t).periodic) throw DomainError("optical operator needs a periodic theta axis for mode " + std::to_string(mode));
  return {f.axis_index(AxisLabel::X, id), *t};
}

struct SymplecticAxes {
  std::size_t x, mu, nu;
};

SymplecticAxes symplectic_axes(const Field& f, std::size_t mode, AxisLabel dual = AxisLabel::X) {
  const auto id = mode_id(mode);
  return {f.axis_index(dual, id), f.axis_index(AxisLabel::mu, id), f.axis_index(AxisLabel::nu, id)};
}

// (d/dX)^{-1} d/dtheta f
Field inv_dx_dtheta(const Field& f, std::size_t mode) {
  return decaying_inv_dx(spectral_dtheta(f, mode_id(mode)), AxisLabel::X, mode_id(mode));
}

Field inv_dx_fd(const Field& f, AxisLabel along, std::size_t mode) {
  return decaying_inv_dx(fd_derivative(f, along, 1, mode_id(mode)), AxisLabel::X, mode_id(mode));
}

std::vector<ModeOperators> optical_ops(const PolynomialPotential& U, std::size_t n) {
  std::vector<ModeOperators> ops;
  for (std::size_t s = 0; s < n; ++s) {
    const ModeConstants c = U.constants(s);
    ops.push_back({[s](const Field& f) { return q_operator_optical(f, s); },
                   [s, c](const Field& f) { return dp_operator_optical(f, s, c); }});
  }
  return ops;
}

std::vector<ModeOperators> symplectic_ops(std::size_t n) {
  std::vector<ModeOperators> ops;
  for (std::size_t s = 0; s < n; ++s)
    ops.push_back({[s](const Field& f) { return q_operator_symplectic(f, s); },
                   [s](const Field& f) { return dp_operator_symplectic(f, s); }});
  return ops;
}

}  // namespace

std::size_t mode_count(const Field& f) { return count_modes(f, AxisLabel::X); }

Field q_operator_optical(const Field& f, std::size_t mode) {
  const auto ax = optical_axes(f, mode);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(f.axis(ax.x).count));
  const Eigen::VectorXd x = f.axis(ax.x).coords();
  Field out = scale_sep(inv_dx_dtheta(f, mode), ax.x, one, ax.t, along(f, ax.t, [](double t) { return std::sin(t); }));
  out += scale_sep(f, ax.x, x, ax.t, along(f, ax.t, [](double t) { return std::cos(t); }));
  return out;
}

Field p_operator_optical(const Field& f, std::size_t mode, const ModeConstants& c) {
  const auto ax = optical_axes(f, mode);
  const double mw = c.mass * c.frequency;
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(f.axis(ax.x).count));
  const Eigen::VectorXd x = f.axis(ax.x).coords();
  Field out = scale_sep(inv_dx_dtheta(f, mode), ax.x, one, ax.t, along(f, ax.t, [mw](double t) { return -mw * std::cos(t); }));
  out += scale_sep(f, ax.x, x, ax.t, along(f, ax.t, [mw](double t) { return mw * std::sin(t); }));
  return out;
}

Field dq_operator_optical(const Field& f, std::size_t mode) {
  const auto ax = optical_axes(f, mode);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(f.axis(ax.x).count));
  return scale_sep(spectral_dx(f, AxisLabel::X, mode_id(mode)), ax.x, one, ax.t,
                   along(f, ax.t, [](double t) { return std::cos(t); }));
}

Field dp_operator_optical(const Field& f, std::size_t mode, const ModeConstants& c) {
  const auto ax = optical_axes(f, mode);
  const double mw = c.mass * c.frequency;
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(f.axis(ax.x).count));
  return scale_sep(spectral_dx(f, AxisLabel::X, mode_id(mode)), ax.x, one, ax.t,
                   along(f, ax.t, [mw](double t) { return std::sin(t) / mw; }));
}

Field q_operator_symplectic(const Field& f, std::size_t mode) {
  symplectic_axes(f, mode);
  return -inv_dx_fd(f, AxisLabel::mu, mode);
}

Field p_operator_symplectic(const Field& f, std::size_t mode) {
  symplectic_axes(f, mode);
  return -inv_dx_fd(f, AxisLabel::nu, mode);
}

Field dq_operator_symplectic(const Field& f, std::size_t mode) {
  const auto ax = symplectic_axes(f, mode);
  return scale2(spectral_dx(f, AxisLabel::X, mode_id(mode)), ax.x, ax.mu, [](double, double mu) { return mu; });
}

Field dp_operator_symplectic(const Field& f, std::size_t mode) {
  const auto ax = symplectic_axes(f, mode);
  return scale2(spectral_dx(f, AxisLabel::X, mode_id(mode)), ax.x, ax.nu, [](double, double nu) { return nu; });
}

Field optical_free_part(const Field& f, const PolynomialPotential& Uin) {
  const std::size_t n = mode_count(f);
  const PolynomialPotential U = fit_modes(Uin, n);
  Field out(f.axes());
  out.metadata() = f.metadata();
  for (std::size_t s = 0; s < n; ++s) {
    const auto ax = optical_axes(f, s);
    const double w = U.constants(s).frequency;
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(f.axis(ax.x).count));
    const Eigen::VectorXd x = f.axis(ax.x).coords();
    const Eigen::VectorXd half_sin2 = along(f, ax.t, [w](double t) { return -0.5 * w * std::sin(2 * t); });
    out += scale_sep(spectral_dtheta(f, mode_id(s)), ax.x, one, ax.t,
                     along(f, ax.t, [w](double t) { return w * std::cos(t) * std::cos(t); }));
    out += scale_sep(f, ax.x, one, ax.t, half_sin2);
    out += scale_sep(spectral_dx(f, AxisLabel::X, mode_id(s)), ax.x, x, ax.t, half_sin2);
  }
  return out;
}

Field optical_potential_part(const Field& f, const PolynomialPotential& Uin, int max_b_order) {
  const std::size_t n = mode_count(f);
  const PolynomialPotential U = fit_modes(Uin, n);
  for (std::size_t s = 0; s < n; ++s) optical_axes(f, s);
  return apply_series(expand_series(U, SeriesPart::imaginary, max_b_order), f, optical_ops(U, n));
}

Field symplectic_free_part(const Field& f, const PolynomialPotential& Uin) {
  const std::size_t n = mode_count(f);
  const PolynomialPotential U = fit_modes(Uin, n);
  Field out(f.axes());
  out.metadata() = f.metadata();
  for (std::size_t s = 0; s < n; ++s) {
    const auto ax = symplectic_axes(f, s);
    const double m = U.constants(s).mass;
    out += scale2(fd_derivative(f, AxisLabel::nu, 1, mode_id(s)), ax.x, ax.mu, [m](double, double mu) { return mu / m; });
  }
  return out;
}

Field symplectic_potential_part(const Field& f, const PolynomialPotential& Uin, int max_b_order) {
  const std::size_t n = mode_count(f);
  const PolynomialPotential U = fit_modes(Uin, n);
  for (std::size_t s = 0; s < n; ++s) symplectic_axes(f, s);
  return apply_series(expand_series(U, SeriesPart::imaginary, max_b_order), f, symplectic_ops(n));
}

Field optical_generator(const Field& f, const PolynomialPotential& U) {
  return optical_free_part(f, U) + optical_potential_part(f, U);
}

Field symplectic_generator(const Field& f, const PolynomialPotential& U) {
  return symplectic_free_part(f, U) + symplectic_potential_part(f, U);
}

Field classical_optical_generator(const Field& f, const PolynomialPotential& U) {
  return optical_free_part(f, U) + optical_potential_part(f, U, 1);
}

Field classical_symplectic_generator(const Field& f, const PolynomialPotential& U) {
  return symplectic_free_part(f, U) + symplectic_potential_part(f, U, 1);
}

namespace {

// (i / eta) g along the dual axis k; the eta = 0 node takes the limit i dg/deta.
Field i_over_dual(const Field& g, std::size_t k) {
  const Field dg = spectral_derivative(g, k, 1);
  Field out(g.axes());
  out.metadata() = g.metadata();
  auto& v = out.mutable_values();
  const Axis& a = g.axis(k);
  for_each_node(g.axes(), [&](Eigen::Index n, std::span<const double> c) {
    const double eta = c[k];
    v[n] = std::abs(eta) < 1e-12 * a.step ? cplx(0.0, 1.0) * dg[n] : cplx(0.0, 1.0) / eta * g[n];
  });
  return out;
}

Field characteristic_optical(const Field& chi, const PolynomialPotential& Uin) {
  const std::size_t n = count_modes(chi, AxisLabel::eta);
  const PolynomialPotential U = fit_modes(Uin, n);
  std::vector<ModeOperators> ops;
  Field out(chi.axes());
  out.metadata() = chi.metadata();
  for (std::size_t s = 0; s < n; ++s) {
    const auto id = mode_id(s);
    const std::size_t ke = chi.axis_index(AxisLabel::eta, id);
    const std::size_t kt = chi.axis_index(AxisLabel::theta, id);
    const double w = U.constants(s).frequency;
    const double mw = U.constants(s).mass * w;
    // X -> -i d/deta, d/dX -> -i eta, (d/dX)^{-1} -> i / eta
    ops.push_back({[ke, kt](const Field& f) {
                     Field a = scale2(i_over_dual(spectral_derivative(f, kt, 1), ke), ke, kt,
                                      [](double, double t) { return std::sin(t); });
                     a += scale2(spectral_derivative(f, ke, 1), ke, kt,
                                 [](double, double t) { return cplx(0.0, -1.0) * std::cos(t); });
                     return a;
                   },
                   [ke, kt, mw](const Field& f) {
                     return scale2(f, ke, kt, [mw](double eta, double t) { return cplx(0.0, -1.0) * eta * std::sin(t) / mw; });
                   }});
    // free part: omega [cos^2 d/dtheta + sin(2 theta)/2 eta d/deta]
    out += scale2(spectral_derivative(chi, kt, 1), ke, kt, [w](double, double t) { return w * std::cos(t) * std::cos(t); });
    out += scale2(spectral_derivative(chi, ke, 1), ke, kt,
                  [w](double eta, double t) { return 0.5 * w * std::sin(2 * t) * eta; });
  }
  out += apply_series(expand_series(U, SeriesPart::imaginary), chi, ops);
  return out;
}

Field characteristic_symplectic(const Field& chi, const PolynomialPotential& Uin) {
  const std::size_t n = count_modes(chi, AxisLabel::z);
  const PolynomialPotential U = fit_modes(Uin, n);
  std::vector<ModeOperators> ops;
  Field out(chi.axes());
  out.metadata() = chi.metadata();
  for (std::size_t s = 0; s < n; ++s) {
    const auto id = mode_id(s);
    const auto ax = symplectic_axes(chi, s, AxisLabel::z);
    const double m = U.constants(s).mass;
    ops.push_back({[ax, id](const Field& f) { return -i_over_dual(fd_derivative(f, AxisLabel::mu, 1, id), ax.x); },
                   [ax](const Field& f) {
                     return scale2(f, ax.x, ax.nu, [](double z, double nu) { return cplx(0.0, -1.0) * z * nu; });
                   }});
    out += scale2(fd_derivative(chi, AxisLabel::nu, 1, id), ax.x, ax.mu, [m](double, double mu) { return mu / m; });
  }
  out += apply_series(expand_series(U, SeriesPart::imaginary), chi, ops);
  return out;
}

}  // namespace

CharacteristicFunction characteristic_generator(const CharacteristicFunction& chi, const PolynomialPotential& U) {
  const bool symplectic = chi.values.find_axis(AxisLabel::z).has_value();
  Field g = symplectic ? characteristic_symplectic(chi.values, U) : characteristic_optical(chi.values, U);
  return {std::move(g), chi.dual_axis, chi.source_axis};
}

EnergyResidual energy_residual_optical(const Field& w, double E, const PolynomialPotential& Uin) {
  const std::size_t n = mode_count(w);
  const PolynomialPotential U = fit_modes(Uin, n);
  const double hbar = U.hbar();
  Field rhs = apply_series(expand_series(U, SeriesPart::real), w, optical_ops(U, n));
  for (std::size_t s = 0; s < n; ++s) {
    const auto ax = optical_axes(w, s);
    const ModeConstants c = U.constants(s);
    const Field pp = p_operator_optical(p_operator_optical(w, s, c), s, c);
    rhs += (1.0 / (2.0 * c.mass)) * pp;
    rhs += scale2(spectral_dx2(w, AxisLabel::X, mode_id(s)), ax.x, ax.t, [&](double, double t) {
      return -hbar * hbar / (8.0 * c.mass) * std::cos(t) * std::cos(t);
    });
  }
  Field res = rhs - E * w;
  return {res, l2_norm(res)};
}

EnergyResidual energy_residual_symplectic(const Field& M, double E, const PolynomialPotential& Uin) {
  const std::size_t n = mode_count(M);
  const PolynomialPotential U = fit_modes(Uin, n);
  const double hbar = U.hbar();
  Field rhs = apply_series(expand_series(U, SeriesPart::real), M, symplectic_ops(n));
  for (std::size_t s = 0; s < n; ++s) {
    const auto ax = symplectic_axes(M, s);
    const double m = U.constants(s).mass;
    rhs += (1.0 / (2.0 * m)) * p_operator_symplectic(p_operator_symplectic(M, s), s);
    rhs += scale2(spectral_dx2(M, AxisLabel::X, mode_id(s)), ax.x, ax.mu,
                  [&](double, double mu) { return -mu * mu * hbar * hbar / (8.0 * m); });
  }
  Field res = rhs - E * M;
  return {res, l2_norm(res)};
}

std::string to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::optical_quantum: return "optical-quantum";
    case GeneratorKind::symplectic_quantum: return "symplectic-quantum";
    case GeneratorKind::optical_classical: return "optical-classical";
    case GeneratorKind::symplectic_classical: return "symplectic-classical";
    case GeneratorKind::characteristic_symplectic: return "characteristic-symplectic";
    case GeneratorKind::characteristic_optical: return "characteristic-optical";
  }
  return "?";
}

GeneratorKind generator_kind_from_string(const std::string& s) {
  for (auto k : {GeneratorKind::optical_quantum, GeneratorKind::symplectic_quantum, GeneratorKind::optical_classical,
                 GeneratorKind::symplectic_classical, GeneratorKind::characteristic_symplectic,
                 GeneratorKind::characteristic_optical})
    if (to_string(k) == s) return k;
  throw DomainError("unknown generator kind '" + s + "'");
}

Field apply_generator(const GeneratorSpec& spec, const Field& f) {
  switch (spec.kind) {
    case GeneratorKind::optical_quantum: return optical_generator(f, spec.potential);
    case GeneratorKind::symplectic_quantum: return symplectic_generator(f, spec.potential);
    case GeneratorKind::optical_classical: return classical_optical_generator(f, spec.potential);
    case GeneratorKind::symplectic_classical: return classical_symplectic_generator(f, spec.potential);
    case GeneratorKind::characteristic_optical: return characteristic_optical(f, spec.potential);
    case GeneratorKind::characteristic_symplectic: return characteristic_symplectic(f, spec.potential);
  }
  throw DomainError("unknown generator kind");
}

double stationarity_residual(const Field& f, const GeneratorSpec& spec) { return l2_norm(apply_generator(spec, f)); }

std::optional<double> optical_symmetry_residual(const Field& w) {
  if (w.rank() != 2 || w.axis(0).label != AxisLabel::X || w.axis(1).label != AxisLabel::theta) return std::nullopt;
  const Axis& xa = w.axis(0);
  const Axis& ta = w.axis(1);
  if (!ta.periodic || ta.count % 2 != 0 || std::abs(xa.start + 0.5 * xa.length()) > 1e-12 * xa.length())
    return std::nullopt;
  const auto nx = static_cast<Eigen::Index>(xa.count), nt = static_cast<Eigen::Index>(ta.count);
  double r = 0.0;
  for (Eigen::Index i = 1; i < nx; ++i)
    for (Eigen::Index j = 0; j < nt; ++j) r = std::max(r, std::abs(w[i * nt + j] - w[(nx - i) * nt + (j + nt / 2) % nt]));
  return r;
}

namespace {

bool is_characteristic(GeneratorKind k) {
  return k == GeneratorKind::characteristic_optical || k == GeneratorKind::characteristic_symplectic;
}

double normalization_drift(const Field& f, bool characteristic) {
  if (characteristic) {
    // chi at the origin of every dual axis
    double d = 0.0;
    for_each_node(f.axes(), [&](Eigen::Index n, std::span<const double> c) {
      for (std::size_t k = 0; k < f.rank(); ++k) {
        const Axis& a = f.axis(k);
        if ((a.label == AxisLabel::eta || a.label == AxisLabel::z) && std::abs(c[k]) > 1e-12 * a.step) return;
      }
      d = std::max(d, std::abs(f[n] - 1.0));
    });
    return d;
  }
  Field g = f;
  for (bool found = true; found;) {
    found = false;
    for (std::size_t k = 0; k < g.rank(); ++k)
      if (g.axis(k).label == AxisLabel::X) {
        g = integrate_axis(g, k);
        found = true;
        break;
      }
  }
  return (g.values().array() - cplx(1.0)).abs().maxCoeff();
}

Snapshot make_snapshot(const Field& f, double t, long step, bool characteristic, const EvolveOptions& opt) {
  Snapshot s{t, step, f, normalization_drift(f, characteristic), characteristic ? std::nullopt : optical_symmetry_residual(f)};
  auto& md = s.field.metadata();
  std::ostringstream os;
  os.precision(17);
  os << t;
  md["time"] = os.str();
  os.str("");
  os << s.normalization_drift;
  md["normalization_drift"] = os.str();
  if (s.symmetry_residual) {
    os.str("");
    os << *s.symmetry_residual;
    md["symmetry_residual"] = os.str();
  }
  if (s.normalization_drift > opt.normalization_warning) md["warning"] = "normalization drift above tolerance";
  return s;
}

}  // namespace

std::vector<Snapshot> evolve(const Field& f0, const GeneratorSpec& spec, double dt, long steps, long snapshot_every,
                             const EvolveOptions& opt) {
  if (!(dt > 0) || !std::isfinite(dt)) throw DomainError("evolve: dt must be positive");
  if (steps < 0) throw DomainError("evolve: steps must be nonnegative");
  if (snapshot_every <= 0) throw DomainError("evolve: snapshot cadence must be positive");
  const bool chi = is_characteristic(spec.kind);
  if (opt.require_probability && !chi && !is_probability(f0))
    throw ContractViolation("evolve: initial field must be tagged as a probability distribution");
  const double sup0 = sup_norm(f0);
  std::vector<Snapshot> out;
  out.push_back(make_snapshot(f0, 0.0, 0, chi, opt));
  Field f = f0;
  for (long n = 1; n <= steps; ++n) {
    const Field k1 = apply_generator(spec, f);
    const Field k2 = apply_generator(spec, f + (0.5 * dt) * k1);
    const Field k3 = apply_generator(spec, f + (0.5 * dt) * k2);
    const Field k4 = apply_generator(spec, f + dt * k3);
    f.mutable_values() += (dt / 6.0) * (k1.values() + 2.0 * k2.values() + 2.0 * k3.values() + k4.values());
    if (!f.values().real().allFinite() || !f.values().imag().allFinite())
      throw NumericalError("evolve: non-finite values at step " + std::to_string(n), n);
    if (sup_norm(f) > opt.blowup_factor * sup0)
      throw NumericalError("evolve: solution blew up at step " + std::to_string(n), n);
    if (n % snapshot_every == 0 || n == steps) out.push_back(make_snapshot(f, dt * static_cast<double>(n), n, chi, opt));
  }
  return out;
}

}  // namespace tomolab
