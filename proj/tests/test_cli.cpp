#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "config.hpp"
#include "tomolab/cli.hpp"

using namespace tomolab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("tomolab_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& leaf) const { return (path / leaf).string(); }
};

json read_json(const std::string& path) {
  std::ifstream is(path);
  REQUIRE(is);
  return json::parse(is);
}

std::string read_bytes(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("config parsing") {
  using namespace tomolab::cli;
  const auto p = parse_profile("constant:1");
  CHECK(parse_complex("1") == cplx(1, 0));
  CHECK(parse_complex("1+0i") == cplx(1, 0));
  CHECK(parse_complex("0.5i") == cplx(0, 0.5));
  CHECK(parse_complex("1-2i") == cplx(1, -2));
  CHECK(parse_complex("-i") == cplx(0, -1));
  CHECK(parse_complex("1e-3+2e+1i") == cplx(1e-3, 20));
  CHECK_THROWS_AS(parse_complex("1+x"), ConfigError);

  CHECK(std::holds_alternative<PacsState>(parse_state("fock:3", p)));
  CHECK(std::holds_alternative<PacsState>(parse_state("pacs:1+0.5i:2", p)));
  CHECK(std::holds_alternative<ClassicalGaussianState>(parse_state("gaussian:1,0", p)));
  CHECK(std::holds_alternative<ClassicalGaussianState>(parse_state("gaussian:1,0,0.5,0.5,0", p)));
  CHECK_THROWS_AS(parse_state("squeezed:1", p), ConfigError);
  CHECK_THROWS_AS(parse_state("fock:-1", p), ConfigError);
  CHECK_THROWS_AS(parse_state("fock:1.5", p), ConfigError);
  CHECK_THROWS_AS(parse_state("fock", p), ConfigError);
  CHECK_THROWS_AS(parse_state("gaussian:1,0,-1,1,0", p), ConfigError);

  CHECK_NOTHROW(parse_profile("piecewise:1;0:2"));
  CHECK_NOTHROW(parse_profile("sinusoidal:1,0.1,2"));
  CHECK_THROWS_AS(parse_profile("piecewise:1;0"), ConfigError);
  CHECK_THROWS_AS(parse_profile("ramp:1"), ConfigError);

  RunConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 1.0;
  CHECK(resolved_steps(cfg) == 100);
  cfg.steps = 5;
  CHECK_THROWS_AS(resolved_steps(cfg), ConfigError);
  cfg.horizon.reset();
  CHECK(resolved_steps(cfg) == 5);
  cfg.dt = 0.0;
  CHECK_THROWS_AS(resolved_steps(cfg), ConfigError);

  RunConfig c2;
  apply_json(c2, json::parse(R"({"state": "fock:2", "grid": {"x_count": 128}, "tolerances": {"energy": 1e-7},
                                 "constants": {"mass": 2.0}, "output": {"dir": "out"}})"));
  CHECK(c2.state == "fock:2");
  CHECK(c2.grid.x_count == 128);
  CHECK(c2.tol.energy == 1e-7);
  CHECK(c2.constants.mass == 2.0);
  CHECK(c2.out_dir == fs::path("out"));
  try {
    apply_json(c2, json::parse(R"({"grid": {"x_cnt": 1}})"));
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("grid.x_cnt") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_json(c2, json::parse(R"({"dt": "small"})")), ConfigError);
  CHECK_THROWS_AS(apply_json(c2, json::parse(R"({"grid": {"x_count": -4}})")), ConfigError);
  CHECK_THROWS_AS(apply_json(c2, json::parse(R"({"grid": {"x_count": 1.5}})")), ConfigError);
}

TEST_CASE("tomogram command") {
  TempDir dir("tomogram");
  auto r = run({"tomogram", "--state", "fock:1", "--analytic", "--radon", "--compare", "--out", dir / "fock"});
  CHECK(r.code == kExitOk);
  auto m = read_json(dir / "fock/manifest.json");
  CHECK(m["compare"]["sup_diff"].get<double>() <= 1e-5);
  CHECK(m["compare"]["pass"].get<bool>());
  CHECK(fs::exists(dir / "fock/tomogram_analytic.tomf"));
  CHECK(fs::exists(dir / "fock/tomogram_radon.tomf"));

  r = run({"tomogram", "--state", "coherent:1+0i", "--out", dir / "coh", "--csv"});
  CHECK(r.code == kExitOk);
  m = read_json(dir / "coh/manifest.json");
  CHECK(m["analytic"]["normalization_residual"].get<double>() <= 1e-8);
  CHECK(m["analytic"]["symmetry_residual"].get<double>() <= 1e-8);
  CHECK(fs::exists(dir / "coh/tomogram_analytic.csv"));

  r = run({"tomogram", "--state", "cat:1", "--out", dir / "bad"});
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("state") != std::string::npos);
  CHECK(r.err.find("cat") != std::string::npos);

  r = run({"tomogram", "--state", "vacuum", "--radon", "--x-count", "200", "--out", dir / "bad"});
  CHECK(r.code == kExitConfig);

  r = run({"tomogram", "--state", "vacuum", "--symplectic", "--out", dir / "sym"});
  CHECK(r.code == kExitOk);
  m = read_json(dir / "sym/manifest.json");
  CHECK(m["symplectic"]["normalization_residual"].get<double>() <= 1e-8);

  // a coarse grid cannot resolve a high Fock state: the comparison fails with exit 3 and a manifest
  r = run({"tomogram", "--state", "fock:12", "--analytic", "--radon", "--compare", "--pq-count", "32", "--out",
           dir / "coarse"});
  CHECK(r.code == kExitNumerical);
  m = read_json(dir / "coarse/manifest.json");
  CHECK(m["status"] == "numerical_failure");
  CHECK_FALSE(m["compare"]["pass"].get<bool>());

  CHECK(run({"tomogram", "--bogus"}).code == kExitConfig);
  CHECK(run({}).code == kExitConfig);
}

TEST_CASE("config file and flag precedence") {
  TempDir dir("config");
  {
    std::ofstream os(dir / "run.json");
    os << R"({"state": "fock:2", "grid": {"x_count": 128, "theta_count": 32}, "output": {"dir": ")" << (dir / "from_config")
       << R"("}})";
  }
  auto r = run({"tomogram", "--config", dir / "run.json", "--theta-count", "16"});
  CHECK(r.code == kExitOk);
  auto m = read_json(dir / "from_config/manifest.json");
  CHECK(m["spec"] == "fock:2");
  CHECK(m["analytic"]["grid"][0]["count"] == 128);
  CHECK(m["analytic"]["grid"][1]["count"] == 16);

  {
    std::ofstream os(dir / "bogus.json");
    os << R"({"state": "vacuum", "bogus": 1})";
  }
  r = run({"tomogram", "--config", dir / "bogus.json", "--out", dir / "x"});
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("bogus") != std::string::npos);

  {
    std::ofstream os(dir / "broken.json");
    os << "{ not json";
  }
  CHECK(run({"tomogram", "--config", dir / "broken.json"}).code == kExitConfig);
  CHECK(run({"tomogram", "--config", dir / "missing.json"}).code == kExitConfig);
}

TEST_CASE("evolve command") {
  TempDir dir("evolve");
  auto r = run({"evolve", "--state", "coherent:1", "--potential", "0.5*q^2", "--horizon", "0.25", "--dt", "1e-3",
                "--snapshot-every", "125", "--out", dir / "rot"});
  CHECK(r.code == kExitOk);
  auto m = read_json(dir / "rot/manifest.json");
  CHECK(m["steps"] == 250);
  CHECK(m["final_vs_rotated_initial"].get<double>() <= 1e-4);
  CHECK(m["max_normalization_drift"].get<double>() <= 1e-6);
  CHECK(m["snapshots"].size() == 3);
  CHECK_FALSE(m.contains("wall_time_seconds"));
  CHECK(fs::exists(dir / "rot/snapshot_000250.tomf"));

  r = run({"evolve", "--state", "fock:1", "--steps", "100", "--dt", "1e-2", "--snapshot-every", "50", "--timing", "--out",
           dir / "fock"});
  CHECK(r.code == kExitOk);
  m = read_json(dir / "fock/manifest.json");
  CHECK(m["max_snapshot_deviation"].get<double>() <= 1e-6);
  CHECK(m.contains("wall_time_seconds"));

  r = run({"evolve", "--state", "vacuum", "--potential", "0.25*q^4", "--steps", "10", "--dt", "0.5", "--out",
           dir / "blowup"});
  CHECK(r.code == kExitNumerical);
  m = read_json(dir / "blowup/manifest.json");
  CHECK(m["status"] == "numerical_failure");
  CHECK(m.contains("failed_step"));

  CHECK(run({"evolve", "--state", "vacuum", "--dt", "1e-3", "--out", dir / "x"}).code == kExitConfig);
  CHECK(run({"evolve", "--state", "vacuum", "--steps", "1", "--potential", "q^5", "--out", dir / "x"}).code ==
        kExitConfig);
  CHECK(run({"evolve", "--state", "vacuum", "--steps", "1", "--generator", "wrong", "--out", dir / "x"}).code ==
        kExitConfig);
}

TEST_CASE("check command") {
  TempDir dir("check");
  auto r = run({"check", "energy", "--state", "fock:2", "--E", "2.5", "--out", dir / "e1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("PASS") != std::string::npos);
  auto m = read_json(dir / "e1/check.json");
  CHECK(m["pass"].get<bool>());
  CHECK(m["rows"][0]["value"].get<double>() <= 1e-6);

  r = run({"check", "energy", "--state", "fock:2", "--E", "2.6", "--out", dir / "e2"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("FAIL") != std::string::npos);
  m = read_json(dir / "e2/check.json");
  CHECK_FALSE(m["pass"].get<bool>());
  CHECK(m["rows"][0]["value"].get<double>() >= 1e-2);

  r = run({"check", "correspondence", "--state", "vacuum", "--out", dir / "c"});
  CHECK(r.code == kExitOk);
  m = read_json(dir / "c/check.json");
  CHECK(m["rows"].size() == 6);
  for (const auto& row : m["rows"]) CHECK(row["pass"].get<bool>());
  CHECK(m["generator_diagram"]["pass"].get<bool>());

  r = run({"check", "stationarity", "--state", "fock:3", "--out", dir / "s"});
  CHECK(r.code == kExitOk);
  CHECK(read_json(dir / "s/check.json")["pass"].get<bool>());

  r = run({"check", "stationarity", "--state", "coherent:1", "--out", dir / "s2"});
  CHECK(r.code == kExitOk);
  CHECK_FALSE(read_json(dir / "s2/check.json")["pass"].get<bool>());

  CHECK(run({"check", "energy", "--state", "fock:2", "--out", dir / "x"}).code == kExitConfig);
  CHECK(run({"check", "nonsense", "--state", "fock:2", "--out", dir / "x"}).code == kExitConfig);
}

TEST_CASE("reconstruct, moments and compare commands") {
  TempDir dir("recon");
  auto r = run({"reconstruct", "--state", "vacuum", "--out", dir / "rec"});
  CHECK(r.code == kExitOk);
  r = run({"compare", dir / "rec/wigner_reconstructed.tomf", dir / "rec/wigner_reference.tomf"});
  CHECK(r.code == kExitOk);
  const auto d = json::parse(r.out);
  CHECK(d["sup_diff"].get<double>() <= 1e-3);

  r = run({"compare", dir / "rec/wigner_reference.tomf", dir / "rec/wigner_reference.tomf"});
  CHECK(r.code == kExitOk);
  CHECK(json::parse(r.out)["sup_diff"].get<double>() == 0.0);
  CHECK(json::parse(r.out)["l2_diff"].get<double>() == 0.0);

  REQUIRE(run({"tomogram", "--state", "vacuum", "--out", dir / "t"}).code == kExitOk);
  r = run({"compare", dir / "t/tomogram_analytic.tomf", dir / "rec/wigner_reference.tomf"});
  CHECK(r.code == kExitConfig);
  CHECK(run({"compare", dir / "t/tomogram_analytic.tomf", dir / "nothing.tomf"}).code == kExitConfig);

  r = run({"reconstruct", "--input", dir / "t/tomogram_analytic.tomf", "--out", dir / "rec2"});
  CHECK(r.code == kExitOk);
  CHECK(read_json(dir / "rec2/manifest.json")["wigner_normalization"].get<double>() == doctest::Approx(1.0).epsilon(1e-3));

  r = run({"moments", "--state", "vacuum", "--max-moment", "2", "--out", dir / "mom"});
  CHECK(r.code == kExitOk);
  CHECK(fs::exists(dir / "mom/moments.csv"));
}

TEST_CASE("outputs are deterministic") {
  TempDir dir("determinism");
  for (const char* leaf : {"a", "b"}) {
    REQUIRE(run({"tomogram", "--state", "pacs:0.5+0.5i:1", "--analytic", "--radon", "--csv", "--out", dir / leaf}).code ==
            kExitOk);
    REQUIRE(run({"evolve", "--state", "coherent:1", "--steps", "20", "--dt", "1e-3", "--snapshot-every", "10", "--out",
                 dir / (std::string(leaf) + "_ev")})
                .code == kExitOk);
  }
  for (const auto& [a, b] : {std::pair{"a", "b"}, std::pair{"a_ev", "b_ev"}}) {
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir.path / a)) {
      const fs::path other = dir.path / b / e.path().filename();
      REQUIRE(fs::exists(other));
      CHECK(read_bytes(e.path()) == read_bytes(other));
      ++files;
    }
    CHECK(files >= 3);
  }
}
