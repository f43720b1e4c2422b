#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <numbers>
#include <ostream>

#include "config.hpp"
#include "tomolab/cli.hpp"
#include "tomolab/field_io.hpp"
#include "tomolab/moyal.hpp"
#include "tomolab/spectral.hpp"

namespace tomolab {

namespace {

using nlohmann::json;
using namespace cli;
namespace fs = std::filesystem;

// Raised after a manifest has been written for a numerical failure.
struct NumericalFailure {
  std::string message;
};

json axis_json(const Axis& a) {
  return {{"label", std::string(to_string(a.label))}, {"mode", a.mode},   {"start", a.start},
          {"step", a.step},                            {"count", a.count}, {"periodic", a.periodic}};
}

json grid_json(const Field& f) {
  json g = json::array();
  for (const auto& a : f.axes()) g.push_back(axis_json(a));
  return g;
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  os << doc.dump(2) << '\n';
}

struct Output {
  fs::path dir;
  bool csv = false;
  json files = json::array();

  std::string save(const std::string& stem, const Field& f) {
    fs::create_directories(dir);
    save_field(dir / (stem + ".tomf"), f);
    files.push_back(stem + ".tomf");
    if (csv) {
      save_csv(dir / (stem + ".csv"), f);
      files.push_back(stem + ".csv");
    }
    return stem + ".tomf";
  }
  void manifest(const json& doc, const std::string& name = "manifest.json") {
    fs::create_directories(dir);
    json d = doc;
    d["files"] = files;
    write_json(dir / name, d);
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

PolynomialPotential potential_of(const RunConfig& cfg) {
  PolynomialPotential U(1);
  try {
    U = PolynomialPotential::parse(cfg.potential);
    for (auto& c : U.constants()) c = cfg.constants;
    U = PolynomialPotential(U.modes(), U.monomials(), U.constants());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
  return U;
}

GeneratorKind kind_of(const RunConfig& cfg) {
  try {
    return generator_kind_from_string(cfg.generator);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("generator: ") + e.what());
  }
}

StateSpec state_of(const RunConfig& cfg) { return parse_state(cfg.state, parse_profile(cfg.profile)); }

void check_time(const RunConfig& cfg, const StateSpec& s) {
  if (!std::isfinite(cfg.t) || cfg.t < 0) throw ConfigError("t: must be nonnegative");
  if (cfg.t != 0.0 && std::holds_alternative<ClassicalGaussianState>(s))
    throw ConfigError("t: gaussian states are only available at t = 0");
}

// Gaussian tomogram with mean q0 cos + p0 sin and variance c^T cov c.
Field gaussian_optical(const ClassicalGaussianState& g, const Axis& X, const Axis& theta) {
  Field w = Field::sample({X, theta}, [&](std::span<const double> c) {
    const double cs = std::cos(c[1]), sn = std::sin(c[1]);
    const double m = g.mean_q * cs + g.mean_p * sn;
    const double v = g.cov(0, 0) * cs * cs + 2 * g.cov(0, 1) * cs * sn + g.cov(1, 1) * sn * sn;
    return std::exp(-(c[0] - m) * (c[0] - m) / (2 * v)) / std::sqrt(2 * std::numbers::pi * v);
  });
  tag_probability(w);
  return w;
}

Field analytic_optical(const StateSpec& s, const RunConfig& cfg) {
  if (const auto* g = std::get_if<ClassicalGaussianState>(&s)) return gaussian_optical(*g, cfg.grid.x(), cfg.grid.theta());
  return pacs_optical_tomogram(std::get<PacsState>(s), cfg.t, cfg.grid.x(), cfg.grid.theta());
}

Field wigner_at(const StateSpec& s, const RunConfig& cfg) {
  if (const auto* g = std::get_if<ClassicalGaussianState>(&s)) return classical_gaussian(*g, cfg.grid.q(), cfg.grid.p());
  return wigner_of_wavefunction(pacs_wavefunction(std::get<PacsState>(s), cfg.t, cfg.grid.q()), cfg.grid.p());
}

Field symplectic_field(const StateSpec& s, const RunConfig& cfg) {
  Field M;
  if (std::holds_alternative<ClassicalGaussianState>(s))
    M = radon_symplectic(wigner_at(s, cfg), cfg.grid.x(), cfg.grid.mu(), cfg.grid.nu());
  else
    M = pacs_symplectic_field(std::get<PacsState>(s), cfg.t, cfg.grid.x(), cfg.grid.mu(), cfg.grid.nu());
  tag_probability(M);
  return M;
}

double normalization_residual(const Field& f) {
  const Field n = integrate_x(f);
  return (n.values().array() - cplx(1.0)).abs().maxCoeff();
}

json state_json(const StateSpec& s, const RunConfig& cfg) {
  return {{"state", std::visit([](const auto& x) { return x.id(); }, s)}, {"spec", cfg.state}, {"profile", cfg.profile}, {"t", cfg.t}};
}

int cmd_tomogram(const RunConfig& cfg, std::ostream& out) {
  const StateSpec s = state_of(cfg);
  check_time(cfg, s);
  const bool analytic = cfg.analytic || !cfg.radon;
  Output o{cfg.out_dir, cfg.csv};
  json m = state_json(s, cfg);
  m["command"] = "tomogram";
  std::optional<Field> wa, wr;
  if (analytic) {
    wa = analytic_optical(s, cfg);
    o.save("tomogram_analytic", *wa);
    m["analytic"] = {{"grid", grid_json(*wa)},
                     {"normalization_residual", normalization_residual(*wa)},
                     {"symmetry_residual", optical_symmetry_residual(*wa).value_or(-1.0)}};
    out << "analytic tomogram: normalization residual " << fmt(normalization_residual(*wa)) << "\n";
  }
  if (cfg.radon) {
    const Field W = wigner_at(s, cfg);
    wr = radon_optical(W, cfg.grid.x(), cfg.grid.theta());
    o.save("tomogram_radon", *wr);
    m["radon"] = {{"grid", grid_json(*wr)},
                  {"normalization_residual", normalization_residual(*wr)},
                  {"symmetry_residual", optical_symmetry_residual(*wr).value_or(-1.0)},
                  {"wigner_normalization", wigner_normalization(W)}};
    if (W.metadata().count("accuracy_warning")) m["radon"]["warning"] = W.metadata().at("accuracy_warning");
    out << "radon tomogram: normalization residual " << fmt(normalization_residual(*wr)) << "\n";
  }
  if (cfg.symplectic) {
    const Field M = symplectic_field(s, cfg);
    o.save("tomogram_symplectic", M);
    m["symplectic"] = {{"grid", grid_json(M)}, {"normalization_residual", normalization_residual(M)}};
    out << "symplectic tomogram: normalization residual " << fmt(normalization_residual(M)) << "\n";
  }
  int code = kExitOk;
  if (cfg.compare) {
    if (!wa || !wr) throw ConfigError("compare: needs both the analytic and the radon path");
    const double sup = sup_diff(*wa, *wr), l2 = l2_diff(*wa, *wr);
    const bool pass = sup <= cfg.tol.compare;
    m["compare"] = {{"sup_diff", sup}, {"l2_diff", l2}, {"tolerance", cfg.tol.compare}, {"pass", pass}};
    out << "analytic vs radon: sup " << fmt(sup) << "  l2 " << fmt(l2) << "  " << (pass ? "PASS" : "FAIL") << "\n";
    if (!pass) code = kExitNumerical;
  }
  m["status"] = code == kExitOk ? "ok" : "numerical_failure";
  o.manifest(m);
  return code;
}

bool is_harmonic(const PolynomialPotential& U) {
  if (U.modes() != 1 || U.monomials().size() != 1) return false;
  const auto& mono = U.monomials()[0];
  const auto& c = U.constants(0);
  return mono.exponents[0] == 2 && std::abs(mono.coefficient - 0.5 * c.mass * c.frequency * c.frequency) <= 1e-14;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& out) {
  const StateSpec s = state_of(cfg);
  check_time(cfg, s);
  const PolynomialPotential U = potential_of(cfg);
  const GeneratorKind kind = kind_of(cfg);
  const long steps = resolved_steps(cfg);
  const long every = cfg.snapshot_every.value_or(std::max(steps, 1L));
  if (every <= 0) throw ConfigError("snapshot_every: must be positive");

  const bool optical = kind == GeneratorKind::optical_quantum || kind == GeneratorKind::optical_classical;
  Field f0;
  switch (kind) {
    case GeneratorKind::optical_quantum:
    case GeneratorKind::optical_classical: f0 = analytic_optical(s, cfg); break;
    case GeneratorKind::symplectic_quantum:
    case GeneratorKind::symplectic_classical: f0 = symplectic_field(s, cfg); break;
    case GeneratorKind::characteristic_optical: f0 = characteristic_fn(analytic_optical(s, cfg)).values; break;
    case GeneratorKind::characteristic_symplectic: f0 = characteristic_fn(symplectic_field(s, cfg)).values; break;
  }

  Output o{cfg.out_dir, cfg.csv};
  json m = state_json(s, cfg);
  m["command"] = "evolve";
  m["generator"] = to_string(kind);
  m["potential"] = U.to_string();
  m["dt"] = cfg.dt;
  m["steps"] = steps;
  m["snapshot_every"] = every;
  m["grid"] = grid_json(f0);

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Snapshot> traj;
  try {
    traj = evolve(f0, {kind, U}, cfg.dt, steps, every);
  } catch (const NumericalError& e) {
    m["status"] = "numerical_failure";
    m["error"] = e.what();
    if (e.step()) m["failed_step"] = *e.step();
    o.manifest(m);
    throw NumericalFailure{e.what()};
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json snaps = json::array();
  double max_dev = 0.0, max_drift = 0.0;
  for (const auto& sn : traj) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "snapshot_%06ld", sn.step);
    json j = {{"t", sn.t}, {"step", sn.step}, {"file", o.save(stem, sn.field)}, {"normalization_drift", sn.normalization_drift}};
    if (sn.symmetry_residual) j["symmetry_residual"] = *sn.symmetry_residual;
    if (sn.field.metadata().count("warning")) j["warning"] = sn.field.metadata().at("warning");
    snaps.push_back(j);
    max_dev = std::max(max_dev, sup_diff(sn.field, f0));
    max_drift = std::max(max_drift, sn.normalization_drift);
  }
  m["snapshots"] = snaps;
  m["max_snapshot_deviation"] = max_dev;
  m["max_normalization_drift"] = max_drift;
  const Snapshot& last = traj.back();
  out << "evolved " << steps << " steps to t = " << last.t << "; max deviation from initial " << fmt(max_dev)
      << ", max normalization drift " << fmt(max_drift) << "\n";
  if (optical && is_harmonic(U) && f0.rank() == 2) {
    const double angle = U.constants(0).frequency * last.t;
    const double err = sup_diff(last.field, shift_periodic(f0, 1, angle));
    m["final_vs_rotated_initial"] = err;
    out << "final vs rotated initial: " << fmt(err) << "\n";
  }
  if (cfg.timing) m["wall_time_seconds"] = wall;
  m["status"] = "ok";
  o.manifest(m);
  return kExitOk;
}

CorrespondenceGrids correspondence_grids(const RunConfig& cfg) {
  CorrespondenceGrids g;
  g.q = cfg.grid.q();
  g.p = cfg.grid.p();
  g.X = cfg.grid.x();
  g.theta = cfg.grid.theta();
  return g;
}

int cmd_check(const std::string& what, const RunConfig& cfg, std::ostream& out) {
  const StateSpec s = state_of(cfg);
  check_time(cfg, s);
  const PolynomialPotential U = potential_of(cfg);
  json m = state_json(s, cfg);
  m["command"] = "check";
  m["check"] = what;
  m["potential"] = U.to_string();
  json rows = json::array();
  const auto add = [&](const std::string& name, double value, double tol) {
    const bool pass = value <= tol;
    rows.push_back({{"name", name}, {"value", value}, {"tolerance", tol}, {"pass", pass}});
    out << std::left << std::setw(28) << name << std::setw(12) << fmt(value) << "tol " << std::setw(12) << fmt(tol)
        << (pass ? "PASS" : "FAIL") << "\n";
  };
  if (what == "energy") {
    if (!cfg.energy) throw ConfigError("E: energy check needs --E");
    m["E"] = *cfg.energy;
    if (cfg.symplectic)
      add("energy (symplectic)", energy_residual_symplectic(symplectic_field(s, cfg), *cfg.energy, U).norm,
          cfg.tol.energy_symplectic);
    else
      add("energy (optical)", energy_residual_optical(analytic_optical(s, cfg), *cfg.energy, U).norm, cfg.tol.energy);
  } else if (what == "stationarity") {
    const GeneratorKind kind = kind_of(cfg);
    m["generator"] = to_string(kind);
    Field f;
    switch (kind) {
      case GeneratorKind::optical_quantum:
      case GeneratorKind::optical_classical: f = analytic_optical(s, cfg); break;
      case GeneratorKind::symplectic_quantum:
      case GeneratorKind::symplectic_classical: f = symplectic_field(s, cfg); break;
      case GeneratorKind::characteristic_optical: f = characteristic_fn(analytic_optical(s, cfg)).values; break;
      case GeneratorKind::characteristic_symplectic: f = characteristic_fn(symplectic_field(s, cfg)).values; break;
    }
    add("stationarity (" + to_string(kind) + ")", stationarity_residual(f, {kind, U}), cfg.tol.stationarity);
  } else if (what == "correspondence") {
    if (cfg.t != 0.0) throw ConfigError("t: correspondence check runs at t = 0");
    const auto rep = correspondence_check(s, U, cfg.tol.correspondence, correspondence_grids(cfg));
    for (const auto& r : rep.rows) add(r.rule, r.norm, rep.tolerance);
    m["generator_diagram"] = {{"value", rep.generator.norm}, {"tolerance", rep.tolerance}, {"pass", rep.generator.pass}};
    out << "generator diagram (" << rep.potential << "): " << fmt(rep.generator.norm) << " "
        << (rep.generator.pass ? "PASS" : "FAIL") << "\n";
  } else {
    throw ConfigError("check: unknown check '" + what + "' (expected energy, stationarity or correspondence)");
  }
  m["rows"] = rows;
  bool all = true;
  for (const auto& r : rows) all = all && r["pass"].get<bool>();
  m["pass"] = all;
  Output o{cfg.out_dir, false};
  o.manifest(m, "check.json");
  return kExitOk;
}

Field input_or_state(const RunConfig& cfg, json& m, std::optional<StateSpec>& state) {
  if (!cfg.input.empty()) {
    m["input"] = cfg.input;
    try {
      return load_field(cfg.input);
    } catch (const std::exception& e) {
      throw ConfigError("input: " + std::string(e.what()));
    }
  }
  state = state_of(cfg);
  check_time(cfg, *state);
  m.update(state_json(*state, cfg));
  return analytic_optical(*state, cfg);
}

int cmd_reconstruct(const RunConfig& cfg, std::ostream& out) {
  json m = {{"command", "reconstruct"}};
  std::optional<StateSpec> state;
  const Field w = input_or_state(cfg, m, state);
  Output o{cfg.out_dir, cfg.csv};
  const Field W = inverse_radon(w, cfg.grid.q(), cfg.grid.p());
  o.save("wigner_reconstructed", W);
  m["grid"] = grid_json(W);
  for (const auto& [k, v] : W.metadata()) m["metadata"][k] = v;
  m["wigner_normalization"] = wigner_normalization(W);
  double wmin = 0.0;
  for (Eigen::Index n = 0; n < W.size(); ++n) wmin = std::min(wmin, W[n].real());
  m["min_value"] = wmin;
  out << "reconstructed Wigner function: normalization " << wigner_normalization(W) << ", minimum " << wmin << "\n";
  if (state) {
    const Field ref = wigner_at(*state, cfg);
    o.save("wigner_reference", ref);
    m["sup_vs_reference"] = sup_diff(W, ref);
    out << "sup difference to the reference Wigner function: " << fmt(sup_diff(W, ref)) << "\n";
  }
  m["status"] = "ok";
  o.manifest(m);
  return kExitOk;
}

int cmd_moments(const RunConfig& cfg, std::ostream& out) {
  if (cfg.max_moment < 1 || cfg.max_moment > kMaxMoment)
    throw ConfigError("max_moment: must be between 1 and " + std::to_string(kMaxMoment));
  json m = {{"command", "moments"}};
  std::optional<StateSpec> state;
  const Field w = input_or_state(cfg, m, state);
  if (w.rank() != 2 || w.axis(1).label != AxisLabel::theta) throw ConfigError("input: moments need an (X, theta) tomogram");
  fs::create_directories(cfg.out_dir);
  std::ofstream csv(cfg.out_dir / "moments.csv");
  csv << "theta,n,quadrature,characteristic\n";
  csv << std::setprecision(17);
  json per_n = json::array();
  for (int n = 1; n <= cfg.max_moment; ++n) {
    const Field a = quadrature_moment(w, n);
    const Field b = characteristic_moment(w, n);
    double diff = 0.0;
    for (std::size_t j = 0; j < w.axis(1).count; ++j) {
      const auto k = static_cast<Eigen::Index>(j);
      csv << w.axis(1)[j] << ',' << n << ',' << a[k].real() << ',' << b[k].real() << '\n';
      diff = std::max(diff, std::abs(a[k] - b[k]));
    }
    per_n.push_back({{"n", n}, {"max_consistency_diff", diff}, {"at_theta0", a[0].real()}});
    out << "n = " << n << ": <X^n>(0) = " << a[0].real() << ", quadrature vs characteristic " << fmt(diff) << "\n";
  }
  m["moments"] = per_n;
  m["files"] = {"moments.csv"};
  m["status"] = "ok";
  write_json(cfg.out_dir / "manifest.json", m);
  return kExitOk;
}

int cmd_compare(const std::string& a, const std::string& b, std::ostream& out) {
  Field fa, fb;
  try {
    fa = load_field(a);
    fb = load_field(b);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("compare: ") + e.what());
  }
  bool same = fa.rank() == fb.rank();
  for (std::size_t k = 0; same && k < fa.rank(); ++k) same = same_axis(fa.axis(k), fb.axis(k));
  if (!same) throw ConfigError("compare: grid mismatch between '" + a + "' and '" + b + "'");
  const json r = {{"sup_diff", sup_diff(fa, fb)}, {"l2_diff", l2_diff(fa, fb)}};
  out << r.dump() << "\n";
  return kExitOk;
}

// Options shared by the subcommands; each records how to overlay itself onto a RunConfig.
struct Binder {
  CLI::App* app;
  std::vector<std::function<void(RunConfig&)>> overlay;
  std::string config_path;

  template <typename T, typename Set>
  void option(const std::string& name, const std::string& desc, Set set) {
    auto v = std::make_shared<T>();
    CLI::Option* o = app->add_option(name, *v, desc);
    overlay.push_back([o, v, set](RunConfig& c) {
      if (o->count() > 0) set(c, *v);
    });
  }
  void flag(const std::string& name, const std::string& desc, bool RunConfig::*member) {
    auto v = std::make_shared<bool>(false);
    CLI::Option* o = app->add_flag(name, *v, desc);
    overlay.push_back([o, v, member](RunConfig& c) {
      if (o->count() > 0) c.*member = *v;
    });
  }

  void common() {
    app->add_option("--config", config_path, "JSON run configuration (flags take precedence)");
    option<std::string>("--out", "output directory", [](RunConfig& c, const std::string& v) { c.out_dir = v; });
    flag("--csv", "also write CSV files", &RunConfig::csv);
    option<std::size_t>("--x-count", "X grid points", [](RunConfig& c, std::size_t v) { c.grid.x_count = v; });
    option<double>("--x-extent", "X grid spans [-L, L)", [](RunConfig& c, double v) { c.grid.x_extent = v; });
    option<std::size_t>("--theta-count", "theta grid points", [](RunConfig& c, std::size_t v) { c.grid.theta_count = v; });
    option<std::size_t>("--pq-count", "q and p grid points", [](RunConfig& c, std::size_t v) { c.grid.pq_count = v; });
    option<double>("--pq-extent", "q and p span [-L, L)", [](RunConfig& c, double v) { c.grid.pq_extent = v; });
  }
  void state() {
    option<std::string>("--state", "vacuum | fock:M | coherent:A | pacs:A:M | gaussian:q0,p0[,vq,vp,cqp]",
                        [](RunConfig& c, const std::string& v) { c.state = v; });
    option<std::string>("--profile", "constant:W | piecewise:W0;t1:W1 | sinusoidal:W0,depth,drive",
                        [](RunConfig& c, const std::string& v) { c.profile = v; });
    option<double>("--t", "time of the state", [](RunConfig& c, double v) { c.t = v; });
  }
  void dynamics() {
    option<std::string>("--potential", "polynomial potential, e.g. 0.5*q^2", [](RunConfig& c, const std::string& v) { c.potential = v; });
    option<std::string>("--generator", "optical-quantum | symplectic-quantum | optical-classical | ...",
                        [](RunConfig& c, const std::string& v) { c.generator = v; });
    option<double>("--mass", "mode mass", [](RunConfig& c, double v) { c.constants.mass = v; });
    option<double>("--frequency", "mode frequency", [](RunConfig& c, double v) { c.constants.frequency = v; });
    option<double>("--hbar", "Planck constant", [](RunConfig& c, double v) { c.constants.hbar = v; });
  }
  void symplectic_grid() {
    flag("--symplectic", "use the symplectic tomogram", &RunConfig::symplectic);
    option<std::size_t>("--mu-count", "mu grid points", [](RunConfig& c, std::size_t v) { c.grid.mu_count = v; });
    option<std::size_t>("--nu-count", "nu grid points", [](RunConfig& c, std::size_t v) { c.grid.nu_count = v; });
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    for (const auto& f : overlay) f(cfg);
    return cfg;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tomographic probability representation toolkit", "tomolab"};
  app.require_subcommand(1);

  auto make = [&](const std::string& name, const std::string& desc) {
    auto b = std::make_unique<Binder>(Binder{app.add_subcommand(name, desc), {}, {}});
    b->common();
    return b;
  };

  auto tomogram = make("tomogram", "optical and symplectic tomograms of a state");
  tomogram->state();
  tomogram->symplectic_grid();
  tomogram->flag("--analytic", "closed-form path", &RunConfig::analytic);
  tomogram->flag("--radon", "Wigner function and Radon transform path", &RunConfig::radon);
  tomogram->flag("--compare", "compare the analytic and Radon paths", &RunConfig::compare);
  tomogram->option<double>("--tol", "comparison tolerance", [](RunConfig& c, double v) { c.tol.compare = v; });

  auto ev = make("evolve", "time evolution of a tomogram");
  ev->state();
  ev->dynamics();
  ev->symplectic_grid();
  ev->option<double>("--dt", "time step", [](RunConfig& c, double v) { c.dt = v; });
  ev->option<long>("--steps", "number of steps", [](RunConfig& c, long v) { c.steps = v; });
  ev->option<double>("--horizon", "final time (steps = horizon / dt)", [](RunConfig& c, double v) { c.horizon = v; });
  ev->option<long>("--snapshot-every", "snapshot cadence in steps", [](RunConfig& c, long v) { c.snapshot_every = v; });
  ev->flag("--timing", "record wall time in the manifest", &RunConfig::timing);

  std::string check_kind;
  auto check = make("check", "energy, stationarity and correspondence residuals");
  check->app->add_option("kind", check_kind, "energy | stationarity | correspondence")->required();
  check->state();
  check->dynamics();
  check->symplectic_grid();
  check->option<double>("--E", "energy eigenvalue", [](RunConfig& c, double v) { c.energy = v; });
  check->option<double>("--tol", "pass threshold", [](RunConfig& c, double v) {
    c.tol.energy = c.tol.energy_symplectic = c.tol.stationarity = c.tol.correspondence = v;
  });

  auto rec = make("reconstruct", "filtered back-projection to a Wigner function");
  rec->state();
  rec->option<std::string>("--input", "optical tomogram file", [](RunConfig& c, const std::string& v) { c.input = v; });

  auto mom = make("moments", "quadrature moments and their characteristic-function estimates");
  mom->state();
  mom->option<std::string>("--input", "optical tomogram file", [](RunConfig& c, const std::string& v) { c.input = v; });
  mom->option<int>("--max-moment", "highest moment", [](RunConfig& c, int v) { c.max_moment = v; });

  std::vector<std::string> files;
  auto cmp = app.add_subcommand("compare", "sup and L2 distance between two field files");
  cmp->add_option("files", files, "two field files")->required()->expected(2);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (cmp->parsed()) return cmd_compare(files[0], files[1], out);
    if (tomogram->app->parsed()) return cmd_tomogram(tomogram->resolve(), out);
    if (ev->app->parsed()) return cmd_evolve(ev->resolve(), out);
    if (check->app->parsed()) return cmd_check(check_kind, check->resolve(), out);
    if (rec->app->parsed()) return cmd_reconstruct(rec->resolve(), out);
    if (mom->app->parsed()) return cmd_moments(mom->resolve(), out);
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.message << "\n";
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ContractViolation& e) {
    err << "contract violation: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  err << "error: no subcommand\n";
  return kExitConfig;
}

}  // namespace tomolab
