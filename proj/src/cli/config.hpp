#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "tomolab/dynamics.hpp"
#include "tomolab/states.hpp"

namespace tomolab::cli {

// Invalid configuration or flags; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridConfig {
  double x_extent = 8.0;
  std::size_t x_count = 256;
  std::size_t theta_count = 64;
  double pq_extent = 8.0;
  std::size_t pq_count = 256;
  double mu_min = 0.6, mu_max = 1.0;
  std::size_t mu_count = 40;
  double nu_min = -0.4, nu_max = 0.4;
  std::size_t nu_count = 80;

  Axis x() const { return Axis::uniform(AxisLabel::X, -x_extent, x_extent, x_count); }
  Axis theta() const { return Axis::angle(theta_count); }
  Axis q() const { return Axis::uniform(AxisLabel::q, -pq_extent, pq_extent, pq_count); }
  Axis p() const { return Axis::uniform(AxisLabel::p, -pq_extent, pq_extent, pq_count); }
  Axis mu() const { return Axis::uniform(AxisLabel::mu, mu_min, mu_max, mu_count); }
  Axis nu() const { return Axis::uniform(AxisLabel::nu, nu_min, nu_max, nu_count); }
};

struct Tolerances {
  double compare = 1e-5;
  double energy = 1e-6;
  double energy_symplectic = 1e-4;
  double stationarity = 1e-8;
  double correspondence = 1e-5;
};

struct RunConfig {
  std::string state = "vacuum";
  std::string profile = "constant:1";
  double t = 0.0;
  std::string potential = "0.5*q^2";
  std::string generator = "optical-quantum";
  ModeConstants constants;
  double dt = 1e-3;
  std::optional<long> steps;
  std::optional<double> horizon;
  std::optional<long> snapshot_every;
  GridConfig grid;
  std::filesystem::path out_dir = ".";
  bool csv = false;
  bool analytic = false;
  bool radon = false;
  bool compare = false;
  bool symplectic = false;
  bool timing = false;
  std::optional<double> energy;
  std::string input;
  int max_moment = 4;
  Tolerances tol;
};

// Overlays a JSON document onto `cfg`. Unknown keys and wrong types raise ConfigError naming the key.
void apply_json(RunConfig& cfg, const nlohmann::json& doc);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

// "vacuum", "fock:M", "coherent:A", "pacs:A:M", "gaussian:q0,p0[,var_q,var_p,cov_qp]".
// Complex numbers are written "1", "0.5i", "1+0.5i", "1-2i".
StateSpec parse_state(const std::string& text, const FrequencyProfile& profile);
// "constant:W", "piecewise:W0;t1:W1;t2:W2", "sinusoidal:W0,depth,drive"
FrequencyProfile parse_profile(const std::string& text);
cplx parse_complex(const std::string& text);

// Resolved evolution length: steps, or round(horizon / dt).
long resolved_steps(const RunConfig& cfg);

}  // namespace tomolab::cli
