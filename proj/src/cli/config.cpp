#include "config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace tomolab::cli {

namespace {

using nlohmann::json;
using Setter = std::function<void(const json&)>;

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

template <typename T>
Setter number(const std::string& key, T& dst) {
  return [&dst, key](const json& v) {
    if (!v.is_number()) bad(key, "expected a number");
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) bad(key, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.get<long long>() < 0) bad(key, "must be nonnegative");
      }
    }
    dst = v.get<T>();
  };
}

template <typename T>
Setter optional_number(const std::string& key, std::optional<T>& dst) {
  return [&dst, key](const json& v) {
    T x{};
    number(key, x)(v);
    dst = x;
  };
}

Setter text(const std::string& key, std::string& dst) {
  return [&dst, key](const json& v) {
    if (!v.is_string()) bad(key, "expected a string");
    dst = v.get<std::string>();
  };
}

Setter flag(const std::string& key, bool& dst) {
  return [&dst, key](const json& v) {
    if (!v.is_boolean()) bad(key, "expected true or false");
    dst = v.get<bool>();
  };
}

void apply_object(const std::string& prefix, const json& doc, const std::map<std::string, Setter>& setters) {
  if (!doc.is_object()) bad(prefix.empty() ? "<root>" : prefix, "expected an object");
  for (const auto& [k, v] : doc.items()) {
    const std::string name = prefix.empty() ? k : prefix + "." + k;
    auto it = setters.find(k);
    if (it == setters.end()) bad(name, "unknown key");
    it->second(v);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(field + ": cannot parse number '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw ConfigError(field + ": cannot parse number '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const std::string& field) {
  const double v = parse_double(s, field);
  if (v != std::floor(v) || v < 0 || v > 1e6) throw ConfigError(field + ": expected a nonnegative integer, got '" + s + "'");
  return static_cast<int>(v);
}

}  // namespace

void apply_json(RunConfig& cfg, const json& doc) {
  GridConfig& g = cfg.grid;
  Tolerances& t = cfg.tol;
  std::string out_dir;
  bool have_out = false;
  const std::map<std::string, Setter> grid{
      {"x_extent", number("grid.x_extent", g.x_extent)},     {"x_count", number("grid.x_count", g.x_count)},
      {"theta_count", number("grid.theta_count", g.theta_count)}, {"pq_extent", number("grid.pq_extent", g.pq_extent)},
      {"pq_count", number("grid.pq_count", g.pq_count)},       {"mu_min", number("grid.mu_min", g.mu_min)},
      {"mu_max", number("grid.mu_max", g.mu_max)},             {"mu_count", number("grid.mu_count", g.mu_count)},
      {"nu_min", number("grid.nu_min", g.nu_min)},             {"nu_max", number("grid.nu_max", g.nu_max)},
      {"nu_count", number("grid.nu_count", g.nu_count)},
  };
  const std::map<std::string, Setter> tol{
      {"compare", number("tolerances.compare", t.compare)},
      {"energy", number("tolerances.energy", t.energy)},
      {"energy_symplectic", number("tolerances.energy_symplectic", t.energy_symplectic)},
      {"stationarity", number("tolerances.stationarity", t.stationarity)},
      {"correspondence", number("tolerances.correspondence", t.correspondence)},
  };
  const std::map<std::string, Setter> constants{
      {"mass", number("constants.mass", cfg.constants.mass)},
      {"frequency", number("constants.frequency", cfg.constants.frequency)},
      {"hbar", number("constants.hbar", cfg.constants.hbar)},
  };
  const std::map<std::string, Setter> output{
      {"dir",
       [&](const json& v) {
         text("output.dir", out_dir)(v);
         have_out = true;
       }},
      {"csv", flag("output.csv", cfg.csv)},
  };
  const std::map<std::string, Setter> root{
      {"state", text("state", cfg.state)},
      {"profile", text("profile", cfg.profile)},
      {"t", number("t", cfg.t)},
      {"potential", text("potential", cfg.potential)},
      {"generator", text("generator", cfg.generator)},
      {"constants", [&](const json& v) { apply_object("constants", v, constants); }},
      {"dt", number("dt", cfg.dt)},
      {"steps", optional_number("steps", cfg.steps)},
      {"horizon", optional_number("horizon", cfg.horizon)},
      {"snapshot_every", optional_number("snapshot_every", cfg.snapshot_every)},
      {"grid", [&](const json& v) { apply_object("grid", v, grid); }},
      {"tolerances", [&](const json& v) { apply_object("tolerances", v, tol); }},
      {"output", [&](const json& v) { apply_object("output", v, output); }},
      {"analytic", flag("analytic", cfg.analytic)},
      {"radon", flag("radon", cfg.radon)},
      {"compare", flag("compare", cfg.compare)},
      {"symplectic", flag("symplectic", cfg.symplectic)},
      {"timing", flag("timing", cfg.timing)},
      {"E", optional_number("E", cfg.energy)},
      {"input", text("input", cfg.input)},
      {"max_moment", number("max_moment", cfg.max_moment)},
  };
  apply_object("", doc, root);
  if (have_out) cfg.out_dir = out_dir;
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  apply_json(cfg, doc);
}

cplx parse_complex(const std::string& s0) {
  std::string s;
  for (char c : s0)
    if (c != ' ') s += c;
  if (s.empty()) throw ConfigError("empty complex number");
  if (s.back() != 'i') return {parse_double(s, "complex"), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not an exponent sign or the leading sign
  std::size_t cut = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;)
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      cut = k;
      break;
    }
  const auto imag = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_double(t, "complex");
  };
  if (cut == std::string::npos) return {0.0, imag(body)};
  return {parse_double(body.substr(0, cut), "complex"), imag(body.substr(cut))};
}

FrequencyProfile parse_profile(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("profile: expected kind:parameters, got '" + text + "'");
  const std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
  try {
    if (kind == "constant") return FrequencyProfile::constant(parse_double(rest, "profile"));
    if (kind == "piecewise") {
      auto parts = split(rest, ';');
      if (parts.empty()) throw ConfigError("profile: piecewise needs an initial frequency");
      std::vector<std::pair<double, double>> jumps;
      for (std::size_t k = 1; k < parts.size(); ++k) {
        auto tw = split(parts[k], ':');
        if (tw.size() != 2) throw ConfigError("profile: jump '" + parts[k] + "' must be time:frequency");
        jumps.emplace_back(parse_double(tw[0], "profile"), parse_double(tw[1], "profile"));
      }
      return FrequencyProfile::piecewise(parse_double(parts[0], "profile"), std::move(jumps));
    }
    if (kind == "sinusoidal") {
      auto parts = split(rest, ',');
      if (parts.size() != 3) throw ConfigError("profile: sinusoidal needs omega0,depth,drive");
      return FrequencyProfile::sinusoidal(parse_double(parts[0], "profile"), parse_double(parts[1], "profile"),
                                          parse_double(parts[2], "profile"));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("profile: ") + e.what());
  }
  throw ConfigError("profile: unknown kind '" + kind + "'");
}

StateSpec parse_state(const std::string& text, const FrequencyProfile& profile) {
  const auto parts = split(text, ':');
  const std::string kind = parts.empty() ? "" : parts[0];
  const auto need = [&](std::size_t n) {
    if (parts.size() != n) throw ConfigError("state: '" + kind + "' expects " + std::to_string(n - 1) + " parameter(s)");
  };
  StateSpec s;
  try {
    if (kind == "vacuum") {
      need(1);
      s = vacuum(profile);
    } else if (kind == "fock") {
      need(2);
      s = fock(parse_int(parts[1], "state"), profile);
    } else if (kind == "coherent") {
      need(2);
      s = coherent(parse_complex(parts[1]), profile);
    } else if (kind == "pacs") {
      need(3);
      s = PacsState{parse_complex(parts[1]), parse_int(parts[2], "state"), profile};
    } else if (kind == "gaussian") {
      need(2);
      auto v = split(parts[1], ',');
      if (v.size() != 2 && v.size() != 5) throw ConfigError("state: gaussian expects q0,p0 or q0,p0,var_q,var_p,cov_qp");
      ClassicalGaussianState g;
      g.mean_q = parse_double(v[0], "state");
      g.mean_p = parse_double(v[1], "state");
      if (v.size() == 5) {
        g.cov << parse_double(v[2], "state"), parse_double(v[4], "state"), parse_double(v[4], "state"),
            parse_double(v[3], "state");
      }
      s = g;
    } else {
      throw ConfigError("state: unknown kind '" + kind + "' (expected vacuum, fock, coherent, pacs or gaussian)");
    }
    std::visit([](const auto& x) { x.validate(); }, s);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("state: ") + e.what());
  }
  return s;
}

long resolved_steps(const RunConfig& cfg) {
  if (!(cfg.dt > 0) || !std::isfinite(cfg.dt)) throw ConfigError("dt: must be positive");
  if (cfg.steps && cfg.horizon) throw ConfigError("steps: give either steps or horizon, not both");
  if (cfg.steps) {
    if (*cfg.steps < 0) throw ConfigError("steps: must be nonnegative");
    return *cfg.steps;
  }
  if (cfg.horizon) {
    if (*cfg.horizon < 0) throw ConfigError("horizon: must be nonnegative");
    return std::lround(*cfg.horizon / cfg.dt);
  }
  throw ConfigError("steps: evolve needs steps or horizon");
}

}  // namespace tomolab::cli
