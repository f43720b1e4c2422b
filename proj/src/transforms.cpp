#include "tomolab/transforms.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "lines.hpp"
#include "tomolab/parallel.hpp"
#include "tomolab/spectral.hpp"

namespace tomolab {

using std::numbers::pi;

namespace {

void require_spectral_x(const Axis& xa) {
  if (xa.periodic || !is_power_of_two(xa.count))
    throw DomainError("X axis must be non-periodic with a power-of-two count");
}

void require_theta(const Axis& ta) {
  if (ta.label != AxisLabel::theta || !ta.periodic || ta.count % 2 != 0)
    throw DomainError("theta axis must be periodic with an even count");
}

bool symmetric_x(const Axis& xa) { return std::abs(xa.start + 0.5 * xa.length()) <= 1e-12 * xa.length(); }

// Marks fields whose values do not decay at the edges of every axis.
void check_decay(const Field& W, Metadata& meta) {
  const double peak = sup_norm(W);
  double edge = 0.0;
  for_each_node(W.axes(), [&](Eigen::Index n, std::span<const double>) {
    auto idx = W.unravel(n);
    for (std::size_t k = 0; k < idx.size(); ++k)
      if (idx[k] == 0 || idx[k] + 1 == W.axis(k).count) edge = std::max(edge, std::abs(W[n]));
  });
  if (edge > 1e-7 * peak) meta["accuracy_warning"] = "input does not decay at the grid edge";
}

}  // namespace

Field radon_optical(const Field& W, const Axis& xa, const Axis& ta) {
  if (W.rank() != 2) throw DomainError("radon_optical: expected a (q, p) field");
  require_spectral_x(xa);
  require_theta(ta);
  const Axis& qa = W.axis(0);
  const Axis& pa = W.axis(1);
  const auto nq = static_cast<Eigen::Index>(qa.count), np = static_cast<Eigen::Index>(pa.count);
  const auto nx = static_cast<Eigen::Index>(xa.count), nt = static_cast<Eigen::Index>(ta.count);
  Eigen::MatrixXd Wm(nq, np);
  for (Eigen::Index i = 0; i < nq; ++i)
    for (Eigen::Index l = 0; l < np; ++l) Wm(i, l) = W[i * np + l].real();
  const Eigen::VectorXd eta = wavenumbers(xa);
  const Eigen::VectorXd q = qa.coords(), p = pa.coords();
  const double measure = qa.step * pa.step / (2.0 * pi);
  const bool mirror = symmetric_x(xa);
  const Eigen::Index computed = mirror ? nt / 2 : nt;
  Eigen::MatrixXd out(nx, nt);

  parallel_for(static_cast<std::size_t>(computed), [&](std::size_t jj) {
    const auto j = static_cast<Eigen::Index>(jj);
    const double c = std::cos(ta[jj]), s = std::sin(ta[jj]);
    Eigen::MatrixXd Cp(np, nx), Sp(np, nx);
    for (Eigen::Index k = 0; k < nx; ++k)
      for (Eigen::Index l = 0; l < np; ++l) {
        const double a = eta[k] * s * p[l];
        Cp(l, k) = std::cos(a);
        Sp(l, k) = std::sin(a);
      }
    const Eigen::MatrixXd Gr = Wm * Cp, Gi = Wm * Sp;
    Eigen::VectorXcd coef(nx);
    for (Eigen::Index k = 0; k < nx; ++k) {
      cplx chi = 0.0;
      for (Eigen::Index i = 0; i < nq; ++i) chi += cplx(Gr(i, k), Gi(i, k)) * std::polar(1.0, eta[k] * c * q[i]);
      coef[k] = chi * measure * std::polar(1.0, -eta[k] * xa.start) / xa.length();
    }
    coef[nx / 2] = coef[nx / 2].real();
    Eigen::VectorXcd line;
    detail::fft_engine().fwd(line, coef);
    out.col(j) = line.real();
  });
  if (mirror)
    for (Eigen::Index j = 0; j < nt / 2; ++j)
      for (Eigen::Index i = 0; i < nx; ++i) out(i, j + nt / 2) = out((nx - i) % nx, j);

  Field w({xa, ta});
  auto& v = w.mutable_values();
  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = 0; j < nt; ++j) v[i * nt + j] = out(i, j);
  w.metadata() = W.metadata();
  w.metadata().erase("accuracy_warning");
  check_decay(W, w.metadata());
  tag_probability(w);
  return w;
}

TomogramInterpolant::TomogramInterpolant(const Field& w) {
  if (w.rank() != 2) throw DomainError("TomogramInterpolant: expected an (X, theta) field");
  xa_ = w.axis(0);
  ta_ = w.axis(1);
  require_spectral_x(xa_);
  require_theta(ta_);
  const auto nx = static_cast<Eigen::Index>(xa_.count), nt = static_cast<Eigen::Index>(ta_.count);
  auto& engine = detail::fft_engine();
  coef_.resize(nx, nt);
  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = 0; j < nt; ++j) coef_(i, j) = w[i * nt + j];
  Eigen::VectorXcd in, out;
  for (Eigen::Index j = 0; j < nt; ++j) {
    in = coef_.col(j);
    engine.fwd(out, in);
    coef_.col(j) = out;
  }
  for (Eigen::Index i = 0; i < nx; ++i) {
    in = coef_.row(i).transpose();
    engine.fwd(out, in);
    coef_.row(i) = out.transpose();
  }
  coef_ /= static_cast<double>(nx * nt);
  eta_ = wavenumbers(xa_);
  harmonics_ = wavenumbers(ta_);
}

Eigen::VectorXd TomogramInterpolant::ray(double phi, const Eigen::VectorXd& xs) const {
  const auto nx = coef_.rows(), nt = coef_.cols();
  Eigen::VectorXcd basis(nt);
  for (Eigen::Index n = 0; n < nt; ++n)
    basis[n] = (n == nt / 2) ? cplx(std::cos(harmonics_[n] * (phi - ta_.start)))
                             : std::polar(1.0, harmonics_[n] * (phi - ta_.start));
  const Eigen::VectorXcd d = coef_ * basis;
  const double dk = eta_[1];
  const double xlast = xa_[xa_.count - 1];
  Eigen::VectorXd res(xs.size());
  std::vector<cplx> pw(static_cast<std::size_t>(nx / 2 + 1));
  for (Eigen::Index m = 0; m < xs.size(); ++m) {
    const double x = xs[m];
    if (x < xa_.start - 1e-12 || x > xlast + 1e-12) {
      res[m] = 0.0;
      continue;
    }
    const double u = x - xa_.start;
    const cplx z = std::polar(1.0, dk * u);
    pw[0] = 1.0;
    for (std::size_t k = 1; k < pw.size(); ++k) pw[k] = pw[k - 1] * z;
    cplx acc = d[0];
    for (Eigen::Index k = 1; k < nx / 2; ++k)
      acc += d[k] * pw[static_cast<std::size_t>(k)] + d[nx - k] * std::conj(pw[static_cast<std::size_t>(k)]);
    acc += d[nx / 2] * pw[static_cast<std::size_t>(nx / 2)].real();
    res[m] = acc.real();
  }
  return res;
}

double TomogramInterpolant::value(double x, double phi) const {
  Eigen::VectorXd xs(1);
  xs[0] = x;
  return ray(phi, xs)[0];
}

namespace {

std::pair<double, double> polar_of(double mu, double nu) {
  if (mu == 0.0 && nu == 0.0) throw DomainError("symplectic tomogram is undefined at mu = nu = 0");
  const double r = std::hypot(mu, nu);
  double phi = std::atan2(nu, mu);
  if (phi < 0) phi += 2.0 * pi;
  return {r, phi};
}

Field bridge(const TomogramInterpolant& interp, const Axis& xa, const Axis& mua, const Axis& nua) {
  Field M({xa, mua, nua});
  const auto nx = static_cast<Eigen::Index>(xa.count);
  const std::size_t nmu = mua.count, nnu = nua.count;
  const Eigen::VectorXd X = xa.coords();
  auto& v = M.mutable_values();
  parallel_for(nmu * nnu, [&](std::size_t idx) {
    const std::size_t a = idx / nnu, b = idx % nnu;
    const auto [r, phi] = polar_of(mua[a], nua[b]);
    const Eigen::VectorXd vals = interp.ray(phi, X / r) / r;
    for (Eigen::Index i = 0; i < nx; ++i)
      v[i * static_cast<Eigen::Index>(nmu * nnu) + static_cast<Eigen::Index>(idx)] = vals[i];
  });
  return M;
}

}  // namespace

double optical_to_symplectic(const TomogramInterpolant& w, double X, double mu, double nu) {
  const auto [r, phi] = polar_of(mu, nu);
  return w.value(X / r, phi) / r;
}

double optical_to_symplectic(const Field& w, double X, double mu, double nu) {
  return optical_to_symplectic(TomogramInterpolant(w), X, mu, nu);
}

Field optical_to_symplectic(const Field& w, const Axis& xa, const Axis& mua, const Axis& nua) {
  Field M = bridge(TomogramInterpolant(w), xa, mua, nua);
  M.metadata() = w.metadata();
  return M;
}

Field radon_symplectic(const Field& W, const Axis& xa, const Axis& mua, const Axis& nua, std::size_t theta_count) {
  Field w = radon_optical(W, xa, Axis::angle(theta_count));
  Field M = bridge(TomogramInterpolant(w), xa, mua, nua);
  M.metadata() = w.metadata();
  M.metadata().erase(kProbabilityTag);
  return M;
}

namespace {

Field back_project(const Field& w, const Axis& q_axis, const Axis& p_axis, const InverseRadonOptions& opt,
                   double residual);

// Trigonometric interpolation of an (X, theta) field onto factor * count angles.
Field upsample_theta(const Field& w, int factor) {
  const Axis& ta = w.axis(1);
  const auto nx = static_cast<Eigen::Index>(w.axis(0).count), nt = static_cast<Eigen::Index>(ta.count);
  const Eigen::Index nu = nt * factor;
  Axis tu = Axis::angle(static_cast<std::size_t>(nu), ta.mode);
  tu.start = ta.start;
  Field out({w.axis(0), tu});
  out.metadata() = w.metadata();
  auto& engine = detail::fft_engine();
  Eigen::VectorXcd row(nt), spec, up, res;
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index j = 0; j < nt; ++j) row[j] = w[i * nt + j];
    engine.fwd(spec, row);
    up = Eigen::VectorXcd::Zero(nu);
    for (Eigen::Index k = 0; k < nt / 2; ++k) up[k] = spec[k];
    for (Eigen::Index k = nt / 2 + 1; k < nt; ++k) up[nu - (nt - k)] = spec[k];
    up[nt / 2] = 0.5 * spec[nt / 2];
    up[nu - nt / 2] = 0.5 * spec[nt / 2];
    engine.inv(res, up);
    for (Eigen::Index j = 0; j < nu; ++j) out[i * nu + j] = res[j].real() * static_cast<double>(factor);
  }
  return out;
}

}  // namespace

Field inverse_radon(const Field& w, const Axis& q_axis, const Axis& p_axis, const InverseRadonOptions& opt) {
  if (w.rank() != 2) throw DomainError("inverse_radon: expected an (X, theta) field");
  const Axis& xa = w.axis(0);
  const Axis& ta = w.axis(1);
  require_spectral_x(xa);
  require_theta(ta);
  if (!symmetric_x(xa)) throw DomainError("inverse_radon: X axis must be symmetric about 0");
  const auto nx = static_cast<Eigen::Index>(xa.count), nt = static_cast<Eigen::Index>(ta.count);
  const Eigen::Index half = nt / 2;

  double residual = 0.0;
  for (Eigen::Index i = 1; i < nx; ++i)
    for (Eigen::Index j = 0; j < nt; ++j)
      residual = std::max(residual, std::abs(w[i * nt + j] - w[(nx - i) * nt + (j + half) % nt]));
  if (residual > opt.symmetry_tol)
    throw ContractViolation("inverse_radon: tomogram violates w(-X, theta + pi) = w(X, theta) (residual " +
                            std::to_string(residual) + ")");

  if (opt.angular_upsampling < 1) throw DomainError("inverse_radon: angular upsampling must be >= 1");
  const Field wu = opt.angular_upsampling > 1 ? upsample_theta(w, opt.angular_upsampling) : w;
  return back_project(wu, q_axis, p_axis, opt, residual);
}

namespace {

Field back_project(const Field& w, const Axis& q_axis, const Axis& p_axis, const InverseRadonOptions& opt,
                   double residual) {
  const Axis& xa = w.axis(0);
  const Axis& ta = w.axis(1);
  const auto nx = static_cast<Eigen::Index>(xa.count), nt = static_cast<Eigen::Index>(ta.count);
  const Eigen::Index half = nt / 2;
  constexpr Eigen::Index kPad = 8, kUp = 8;
  const Eigen::Index m = kPad * nx, mu = kUp * m;
  const double tau = xa.step;
  // band-limited ramp kernel sampled at spacing tau
  Eigen::VectorXcd kernel = Eigen::VectorXcd::Zero(m);
  for (Eigen::Index n = -m / 2; n < m / 2; ++n) {
    double h = 0.0;
    if (n == 0)
      h = 1.0 / (4.0 * tau * tau);
    else if (n % 2 != 0)
      h = -1.0 / (static_cast<double>(n * n) * pi * pi * tau * tau);
    kernel[(n + m) % m] = h;
  }
  Eigen::VectorXcd H;
  detail::fft_engine().fwd(H, kernel);
  H *= tau;
  for (Eigen::Index k = 0; k < m; ++k) {
    const double f = static_cast<double>(std::min(k, m - k)) / static_cast<double>(m / 2);
    if (f > opt.taper_start) H[k] *= 0.5 * (1.0 + std::cos(pi * (f - opt.taper_start) / (1.0 - opt.taper_start)));
  }

  // filtered projections, sampled every tau / kUp over one padded period
  std::vector<Eigen::VectorXd> table(static_cast<std::size_t>(half));
  parallel_for(static_cast<std::size_t>(half), [&](std::size_t j) {
    auto& engine = detail::fft_engine();
    Eigen::VectorXcd buf = Eigen::VectorXcd::Zero(m), spec, up = Eigen::VectorXcd::Zero(mu), out;
    for (Eigen::Index i = 0; i < nx; ++i) buf[i] = w[i * nt + static_cast<Eigen::Index>(j)].real();
    engine.fwd(spec, buf);
    spec.array() *= H.array();
    for (Eigen::Index k = 0; k < m / 2; ++k) up[k] = spec[k];
    for (Eigen::Index k = m / 2 + 1; k < m; ++k) up[mu - (m - k)] = spec[k];
    up[m / 2] = 0.5 * spec[m / 2];
    up[mu - m / 2] = 0.5 * spec[m / 2];
    engine.inv(out, up);
    table[j] = out.real() * static_cast<double>(kUp);
  });

  const double du = tau / static_cast<double>(kUp);
  const double dtheta = ta.step;
  Field W({Axis{AxisLabel::q, q_axis.start, q_axis.step, q_axis.count, false, q_axis.mode},
           Axis{AxisLabel::p, p_axis.start, p_axis.step, p_axis.count, false, p_axis.mode}});
  auto& v = W.mutable_values();
  const auto np = static_cast<Eigen::Index>(p_axis.count);
  std::vector<double> cs(static_cast<std::size_t>(half)), sn(static_cast<std::size_t>(half));
  for (Eigen::Index j = 0; j < half; ++j) {
    cs[static_cast<std::size_t>(j)] = std::cos(ta[static_cast<std::size_t>(j)]);
    sn[static_cast<std::size_t>(j)] = std::sin(ta[static_cast<std::size_t>(j)]);
  }
  parallel_for(q_axis.count, [&](std::size_t a) {
    const double q = q_axis[a];
    for (Eigen::Index b = 0; b < np; ++b) {
      const double p = p_axis[static_cast<std::size_t>(b)];
      double acc = 0.0;
      for (std::size_t j = 0; j < cs.size(); ++j) {
        const double u = (q * cs[j] + p * sn[j] - xa.start) / du;
        const double fl = std::floor(u);
        const double t = u - fl;
        const auto i0 = static_cast<Eigen::Index>(fl);
        const auto& T = table[j];
        auto at = [&](Eigen::Index i) { return T[((i % mu) + mu) % mu]; };
        const double y0 = at(i0 - 1), y1 = at(i0), y2 = at(i0 + 1), y3 = at(i0 + 2);
        // cubic Lagrange through four neighbours
        acc += -t * (t - 1) * (t - 2) / 6 * y0 + (t + 1) * (t - 1) * (t - 2) / 2 * y1 -
               (t + 1) * t * (t - 2) / 2 * y2 + (t + 1) * t * (t - 1) / 6 * y3;
      }
      v[static_cast<Eigen::Index>(a) * np + b] = 2.0 * pi * dtheta * acc;
    }
  });
  W.metadata() = w.metadata();
  W.metadata().erase(kProbabilityTag);
  std::ostringstream os;
  os << residual;
  W.metadata()["symmetry_residual"] = os.str();
  os.str("");
  os << "hann above " << opt.taper_start << " of nyquist";
  W.metadata()["taper"] = os.str();
  W.metadata()["angles"] = std::to_string(nt);
  return W;
}

}  // namespace

CharacteristicFunction characteristic_fn(const Field& f) {
  const std::size_t k = f.axis_index(AxisLabel::X);
  const Axis& xa = f.axis(k);
  require_spectral_x(xa);
  const auto n = static_cast<Eigen::Index>(xa.count);
  const double deta = 2.0 * pi / xa.length();
  auto& engine = detail::fft_engine();
  Eigen::VectorXcd spec;
  Field out = detail::map_lines(f, k, [&](Eigen::VectorXcd& line, std::size_t, std::size_t) {
    engine.inv(spec, line);  // (1/N) sum_j f_j exp(+2 pi i jk/N)
    for (Eigen::Index m = 0; m < n; ++m) {
      const double eta = deta * static_cast<double>(m - n / 2);
      line[m] = spec[(m + n / 2) % n] * static_cast<double>(n) * xa.step * std::polar(1.0, eta * xa.start);
    }
  });
  std::vector<Axis> axes = f.axes();
  const bool symplectic = f.find_axis(AxisLabel::mu, xa.mode).has_value();
  axes[k] = Axis{symplectic ? AxisLabel::z : AxisLabel::eta, -pi / xa.step, deta, xa.count, false, xa.mode};
  Field chi(axes, out.values());
  chi.metadata() = f.metadata();
  chi.metadata().erase(kProbabilityTag);
  return {std::move(chi), k, xa};
}

Field inverse_characteristic_fn(const CharacteristicFunction& chi) {
  const std::size_t k = chi.dual_axis;
  const Axis& xa = chi.source_axis;
  const auto n = static_cast<Eigen::Index>(xa.count);
  const double deta = chi.values.axis(k).step;
  auto& engine = detail::fft_engine();
  Eigen::VectorXcd spec(n), out;
  Field res = detail::map_lines(chi.values, k, [&](Eigen::VectorXcd& line, std::size_t, std::size_t) {
    for (Eigen::Index m = 0; m < n; ++m) {
      const double eta = deta * static_cast<double>(m - n / 2);
      spec[(m + n / 2) % n] = line[m] * std::polar(1.0, -eta * xa.start);
    }
    engine.fwd(out, spec);  // sum_k c_k exp(-2 pi i jk/N)
    line = out / xa.length();
  });
  std::vector<Axis> axes = res.axes();
  axes[k] = xa;
  Field f(axes, res.values());
  f.metadata() = chi.values.metadata();
  return f;
}

cplx characteristic_at(const Field& w, double eta, std::size_t theta_index) {
  const std::size_t kx = w.axis_index(AxisLabel::X);
  if (w.rank() != 2 || kx != 0) throw DomainError("characteristic_at: expected an (X, theta) field");
  const Axis& xa = w.axis(0);
  const std::size_t nt = w.axis(1).count;
  cplx s = 0.0;
  for (std::size_t i = 0; i < xa.count; ++i)
    s += w[static_cast<Eigen::Index>(i * nt + theta_index)] * std::polar(1.0, eta * xa[i]);
  return s * xa.step;
}

Field quadrature_moment(const Field& w, int n) {
  if (n < 0 || n > kMaxMoment) throw DomainError("quadrature_moment: order must lie in [0, 8]");
  const std::size_t k = w.axis_index(AxisLabel::X);
  Field xn = pointwise_mul(w, [&](std::span<const double> c) { return std::pow(c[k], n); });
  Field m = integrate_axis(xn, k);
  m.metadata().erase(kProbabilityTag);
  return m;
}

Field characteristic_moment(const Field& w, int n, double delta) {
  if (n < 0 || n > kMaxMoment) throw DomainError("characteristic_moment: order must lie in [0, 8]");
  const std::size_t k = w.axis_index(AxisLabel::X);
  const Axis& xa = w.axis(k);
  const int half = 4 + n / 2;
  std::vector<double> nodes;
  for (int i = -half; i <= half; ++i) nodes.push_back(i * delta);
  const std::vector<double> c = fornberg_weights(0.0, nodes, n)[static_cast<std::size_t>(n)];
  const Eigen::VectorXd X = xa.coords();
  const cplx unit = std::pow(cplx(0.0, 1.0), -n);
  Field m = detail::reduce_lines(w, k, [&](const Eigen::VectorXcd& line) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      cplx chi = 0.0;
      for (Eigen::Index j = 0; j < X.size(); ++j) chi += line[j] * std::polar(1.0, nodes[i] * X[j]);
      acc += c[i] * chi * xa.step;
    }
    return unit * acc;
  });
  m.metadata().erase(kProbabilityTag);
  return m;
}

}  // namespace tomolab
