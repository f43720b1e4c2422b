#include "tomolab/states.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>


namespace tomolab {

using std::numbers::pi;

void ModeConstants::validate() const {
  if (!(mass > 0) || !(frequency > 0) || !(hbar > 0) || !std::isfinite(mass) || !std::isfinite(frequency) ||
      !std::isfinite(hbar))
    throw DomainError("mode constants must be positive and finite");
}

FrequencyProfile FrequencyProfile::constant(double omega0) {
  FrequencyProfile p;
  p.kind_ = Kind::constant;
  p.omega0_ = omega0;
  return p;
}

FrequencyProfile FrequencyProfile::piecewise(double initial, std::vector<std::pair<double, double>> jumps) {
  FrequencyProfile p;
  p.kind_ = Kind::piecewise;
  p.omega0_ = initial;
  std::sort(jumps.begin(), jumps.end());
  p.jumps_ = std::move(jumps);
  return p;
}

FrequencyProfile FrequencyProfile::sinusoidal(double omega0, double depth, double drive) {
  FrequencyProfile p;
  p.kind_ = Kind::sinusoidal;
  p.omega0_ = omega0;
  p.depth_ = depth;
  p.drive_ = drive;
  return p;
}

double FrequencyProfile::operator()(double t) const {
  switch (kind_) {
    case Kind::constant:
      return omega0_;
    case Kind::piecewise: {
      double w = omega0_;
      for (const auto& [tj, wj] : jumps_)
        if (t >= tj) w = wj;
      return w;
    }
    case Kind::sinusoidal:
      return omega0_ * (1.0 + depth_ * std::sin(drive_ * t));
  }
  return omega0_;
}

double FrequencyProfile::initial_value() const { return omega0_; }

std::vector<double> FrequencyProfile::breakpoints(double lo, double hi) const {
  std::vector<double> b;
  if (kind_ == Kind::piecewise)
    for (const auto& j : jumps_)
      if (j.first > lo && j.first < hi) b.push_back(j.first);
  return b;
}

std::string FrequencyProfile::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::constant:
      os << "constant:" << omega0_;
      break;
    case Kind::piecewise:
      os << "piecewise:" << omega0_;
      for (const auto& [t, w] : jumps_) os << ";" << t << "->" << w;
      break;
    case Kind::sinusoidal:
      os << "sinusoidal:" << omega0_ << ":" << depth_ << ":" << drive_;
      break;
  }
  return os.str();
}

double EpsilonSample::wronskian_defect() const {
  return std::abs(eps * std::conj(eps_dot) - std::conj(eps) * eps_dot + cplx(0.0, 2.0));
}

double EpsilonTrajectory::max_wronskian_drift() const {
  double d = 0.0;
  for (const auto& s : samples) d = std::max(d, s.wronskian_defect());
  return d;
}

const EpsilonSample& EpsilonTrajectory::at(double t, double tol) const {
  for (const auto& s : samples)
    if (std::abs(s.t - t) <= tol) return s;
  throw DomainError("epsilon trajectory has no sample at t = " + std::to_string(t));
}

namespace {

struct Segment {
  double a, b;
  bool output;  // record a sample at b
};

EpsilonTrajectory integrate(const FrequencyProfile& profile, const std::vector<double>& times, double dt) {
  EpsilonTrajectory traj;
  traj.dt = dt;
  std::vector<Segment> segs;
  double cur = 0.0;
  for (double t : times) {
    for (double b : profile.breakpoints(cur, t)) {
      segs.push_back({cur, b, false});
      cur = b;
    }
    segs.push_back({cur, t, true});
    cur = t;
  }
  cplx e(1.0, 0.0), ed(0.0, 1.0);
  double phase = 0.0;
  const bool piecewise = profile.kind() == FrequencyProfile::Kind::piecewise;
  for (const auto& s : segs) {
    const double len = s.b - s.a;
    if (len > 0) {
      const auto n = static_cast<long>(std::ceil(len / dt - 1e-9));
      const double h = len / static_cast<double>(n);
      const double wmid = profile(0.5 * (s.a + s.b));
      auto w2 = [&](double t) {
        const double w = piecewise ? wmid : profile(t);
        return w * w;
      };
      for (long i = 0; i < n; ++i) {
        const double t = s.a + h * static_cast<double>(i);
        const cplx k1e = ed, k1d = -w2(t) * e;
        const cplx k2e = ed + 0.5 * h * k1d, k2d = -w2(t + 0.5 * h) * (e + 0.5 * h * k1e);
        const cplx k3e = ed + 0.5 * h * k2d, k3d = -w2(t + 0.5 * h) * (e + 0.5 * h * k2e);
        const cplx k4e = ed + h * k3d, k4d = -w2(t + h) * (e + h * k3e);
        const cplx en = e + h / 6.0 * (k1e + 2.0 * k2e + 2.0 * k3e + k4e);
        ed += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        phase += std::arg(en / e);
        e = en;
      }
    }
    if (s.output) traj.samples.push_back({s.b, e, ed, phase});
  }
  return traj;
}

}  // namespace

EpsilonTrajectory solve_epsilon(const FrequencyProfile& profile, const std::vector<double>& times, double dt,
                                double drift_tol) {
  if (std::abs(profile.initial_value() - 1.0) > 1e-12)
    throw ContractViolation("frequency profile must start at Omega(0) = 1");
  if (!(dt > 0)) throw DomainError("solve_epsilon: dt must be positive");
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] < 0 || (i > 0 && times[i] < times[i - 1]))
      throw DomainError("solve_epsilon: times must be nonnegative and increasing");
  for (int halvings = 0; halvings <= 12; ++halvings) {
    EpsilonTrajectory traj = integrate(profile, times, dt);
    if (traj.max_wronskian_drift() <= drift_tol) return traj;
    dt *= 0.5;
  }
  throw NumericalError("solve_epsilon: Wronskian drift stays above tolerance after step halving");
}

EpsilonTrajectory solve_epsilon(const FrequencyProfile& profile, const Axis& time_axis, double dt, double drift_tol) {
  std::vector<double> times;
  for (std::size_t i = 0; i < time_axis.count; ++i) times.push_back(time_axis[i]);
  return solve_epsilon(profile, times, dt, drift_tol);
}

EpsilonSample epsilon_at(const FrequencyProfile& profile, double t, double dt) {
  if (profile.kind() == FrequencyProfile::Kind::constant && std::abs(profile.omega0() - 1.0) <= 1e-15) {
    // closed form for the unperturbed oscillator
    return {t, std::polar(1.0, t), cplx(0.0, 1.0) * std::polar(1.0, t), t};
  }
  return solve_epsilon(profile, std::vector<double>{t}, dt).samples.front();
}

cplx hermite(int m, cplx z) {
  if (m < 0 || m > kMaxQuanta) throw DomainError("hermite: order out of range");
  cplx h0 = 1.0, h1 = 2.0 * z;
  if (m == 0) return h0;
  for (int k = 1; k < m; ++k) {
    const cplx h2 = 2.0 * z * h1 - 2.0 * static_cast<double>(k) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double laguerre(int m, double x) {
  if (m < 0 || m > kMaxQuanta) throw DomainError("laguerre: order out of range");
  double l0 = 1.0, l1 = 1.0 - x;
  if (m == 0) return l0;
  for (int k = 1; k < m; ++k) {
    const double l2 = ((2.0 * k + 1.0 - x) * l1 - k * l0) / (k + 1.0);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

void PacsState::validate() const {
  if (m < 0 || m > kMaxQuanta) throw DomainError("photon number m must lie in [0, 30]");
  if (!(std::abs(alpha) <= kMaxAlpha)) throw DomainError("|alpha| must not exceed 4");
}

double PacsState::norm_factor() const {
  return 1.0 / (std::tgamma(m + 1.0) * laguerre(m, -std::norm(alpha)));
}

std::string PacsState::id() const {
  std::ostringstream os;
  os << "pacs(alpha=" << alpha.real() << (alpha.imag() < 0 ? "" : "+") << alpha.imag() << "i,m=" << m << ")";
  return os.str();
}

void ClassicalGaussianState::validate() const {
  if (std::abs(cov(0, 1) - cov(1, 0)) > 1e-12 * cov.cwiseAbs().maxCoeff())
    throw DomainError("covariance must be symmetric");
  Eigen::LLT<Eigen::Matrix2d> llt(cov);
  if (llt.info() != Eigen::Success || !(cov.determinant() > 0))
    throw DomainError("covariance must be positive definite");
}

std::string ClassicalGaussianState::id() const {
  std::ostringstream os;
  os << "gaussian(q=" << mean_q << ",p=" << mean_p << ",cov=[" << cov(0, 0) << "," << cov(0, 1) << ";" << cov(1, 0)
     << "," << cov(1, 1) << "])";
  return os.str();
}

PacsState fock(int m, FrequencyProfile profile) { return PacsState{0.0, m, std::move(profile)}; }
PacsState coherent(cplx alpha, FrequencyProfile profile) { return PacsState{alpha, 0, std::move(profile)}; }
PacsState vacuum(FrequencyProfile profile) { return PacsState{0.0, 0, std::move(profile)}; }

std::vector<PacsState> catalog() {
  return {fock(0), fock(1), fock(2), coherent(1.0), PacsState{1.0, 2, {}}, PacsState{cplx(1.0, 0.5), 1, {}}};
}

namespace {

void check_sample(const EpsilonSample& e) {
  if (e.wronskian_defect() > 1e-7) throw ContractViolation("epsilon sample violates the Wronskian invariant");
}

}  // namespace

Field pacs_wavefunction(const PacsState& s, const EpsilonSample& e, const Axis& q_axis) {
  s.validate();
  check_sample(e);
  const cplx a = s.alpha;
  const double ae = std::abs(e.eps);
  const cplx beta = std::polar(1.0 / std::sqrt(2.0), -e.phase);
  const cplx pre = std::sqrt(s.norm_factor()) * std::pow(beta, s.m) * std::pow(pi, -0.25) *
                   std::polar(1.0 / std::sqrt(ae), -0.5 * e.phase);
  const cplx c2 = cplx(0.0, 1.0) * e.eps_dot / (2.0 * e.eps);
  const cplx c1 = std::sqrt(2.0) * a / e.eps;
  const cplx c0 = -a * a * std::conj(e.eps) / (2.0 * e.eps) - 0.5 * std::norm(a);
  Axis qa = q_axis;
  qa.label = AxisLabel::q;
  Field psi = Field::sample({qa}, [&](std::span<const double> c) {
    const double q = c[0];
    return pre * hermite(s.m, q / ae - beta * a) * std::exp(c2 * q * q + c1 * q + c0);
  });
  psi.metadata()["state"] = s.id();
  psi.metadata()["time"] = std::to_string(e.t);
  return psi;
}

Field pacs_wavefunction(const PacsState& s, double t, const Axis& q_axis) {
  return pacs_wavefunction(s, epsilon_at(s.profile, t), q_axis);
}

double pacs_symplectic_tomogram(const PacsState& s, const EpsilonSample& e, double X, double mu, double nu) {
  const cplx Z = mu * e.eps + nu * e.eps_dot;
  const double az = std::abs(Z);
  if (mu == 0.0 && nu == 0.0) throw DomainError("symplectic tomogram is singular on the ray mu = nu = 0");
  if (!(az > 0)) throw NumericalError("mu*eps + nu*eps_dot vanished; epsilon violates the Wronskian invariant");
  const cplx a = s.alpha;
  const double ae = std::abs(e.eps);
  const cplx beta = std::polar(1.0 / std::sqrt(2.0), -e.phase);
  const double pre = s.norm_factor() / (std::sqrt(pi) * std::pow(2.0, s.m) * az);
  // unit-modulus factor; its sign does not matter since |H_m(-z)| = |H_m(z)|
  const cplx ph = std::sqrt(ae * ae * Z / (e.eps * e.eps * std::conj(Z)));
  const cplx arg = ((X * e.eps + cplx(0.0, std::sqrt(2.0)) * a * nu) / (ae * Z) - beta * a) * ph;
  const cplx ex = -0.5 * std::norm(a) - X * X / (2.0 * az * az) + std::sqrt(2.0) * a * X / Z -
                  a * a * std::conj(e.eps) / (2.0 * e.eps) + cplx(0.0, 1.0) * nu * a * a / (e.eps * Z);
  return pre * std::norm(hermite(s.m, arg)) * std::exp(2.0 * ex.real());
}

double pacs_symplectic_tomogram(const PacsState& s, double t, double X, double mu, double nu) {
  s.validate();
  return pacs_symplectic_tomogram(s, epsilon_at(s.profile, t), X, mu, nu);
}

Field pacs_symplectic_field(const PacsState& s, double t, const Axis& x_axis, const Axis& mu_axis,
                            const Axis& nu_axis) {
  s.validate();
  const EpsilonSample e = epsilon_at(s.profile, t);
  Field f = Field::sample({x_axis, mu_axis, nu_axis}, [&](std::span<const double> c) {
    return pacs_symplectic_tomogram(s, e, c[0], c[1], c[2]);
  });
  f.metadata()["state"] = s.id();
  f.metadata()["time"] = std::to_string(t);
  return f;
}

Field pacs_optical_tomogram(const PacsState& s, const EpsilonSample& e, const Axis& x_axis, const Axis& theta_axis) {
  s.validate();
  Field f = Field::sample({x_axis, theta_axis}, [&](std::span<const double> c) {
    return pacs_symplectic_tomogram(s, e, c[0], std::cos(c[1]), std::sin(c[1]));
  });
  f.metadata()["state"] = s.id();
  f.metadata()["time"] = std::to_string(e.t);
  tag_probability(f);
  return f;
}

Field pacs_optical_tomogram(const PacsState& s, double t, const Axis& x_axis, const Axis& theta_axis) {
  return pacs_optical_tomogram(s, epsilon_at(s.profile, t), x_axis, theta_axis);
}

Field wigner_of_wavefunction(const Field& psi, const Axis& p_axis) {
  if (psi.rank() != 1) throw DomainError("wigner_of_wavefunction: psi must be rank 1");
  const Axis& qa = psi.axis(0);
  const auto n = static_cast<Eigen::Index>(qa.count);
  const double h = qa.step;
  const auto np = static_cast<Eigen::Index>(p_axis.count);
  const Eigen::Index nk = 2 * n - 1;  // shifts k = -(n-1) .. n-1
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, nk);
  const auto& v = psi.values();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = -(n - 1); k <= n - 1; ++k) {
      const Eigen::Index a = j + k, b = j - k;
      if (a >= 0 && a < n && b >= 0 && b < n) C(j, k + n - 1) = v[a] * std::conj(v[b]);
    }
  Eigen::MatrixXcd E(nk, np);
  for (Eigen::Index k = 0; k < nk; ++k)
    for (Eigen::Index l = 0; l < np; ++l)
      E(k, l) = std::polar(1.0, -2.0 * p_axis[static_cast<std::size_t>(l)] * static_cast<double>(k - (n - 1)) * h);
  Eigen::MatrixXcd W = (2.0 * h) * (C * E);
  Axis q = qa;
  q.label = AxisLabel::q;
  Axis p = p_axis;
  p.label = AxisLabel::p;
  Field out({q, p});
  auto& out_v = out.mutable_values();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index l = 0; l < np; ++l) out_v[j * np + l] = W(j, l).real();
  out.metadata() = psi.metadata();
  const double peak = v.cwiseAbs().maxCoeff();
  const double edge = std::max(std::abs(v[0]), std::abs(v[n - 1]));
  if (edge > 1e-7 * peak) out.metadata()["accuracy_warning"] = "wavefunction does not decay at the q grid edge";
  // the u-sum resolves |p| < pi / (2h)
  const double pmax = std::max(std::abs(p_axis.start), std::abs(p_axis[p_axis.count - 1]));
  if (pmax > pi / (2.0 * h)) out.metadata()["accuracy_warning"] = "p axis exceeds the resolvable band of the q grid";
  return out;
}

Field classical_gaussian(const ClassicalGaussianState& s, const Axis& q_axis, const Axis& p_axis) {
  s.validate();
  const Eigen::Matrix2d inv = s.cov.inverse();
  const double norm = 1.0 / std::sqrt(s.cov.determinant());
  Axis q = q_axis, p = p_axis;
  q.label = AxisLabel::q;
  p.label = AxisLabel::p;
  Field f = Field::sample({q, p}, [&](std::span<const double> c) {
    const Eigen::Vector2d d(c[0] - s.mean_q, c[1] - s.mean_p);
    return norm * std::exp(-0.5 * d.dot(inv * d));
  });
  f.metadata()["state"] = s.id();
  return f;
}

}  // namespace tomolab
