#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qshyp/checkpoint.hpp"
#include "qshyp/cli.hpp"
#include "qshyp/config.hpp"
#include "qshyp/csv.hpp"
#include "qshyp/errors.hpp"
#include "qshyp/initial_data.hpp"
#include "qshyp/resample.hpp"
#include "support.hpp"

using namespace qshyp;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "qshyp_io_tests";
  fs::create_directories(d);
  return d;
}

std::string write_text(const std::string& name, const std::string& text) {
  const fs::path p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> config_issues(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool any_contains(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

double max_state_diff(const SpectralState& a, const SpectralState& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < 3; ++c) m = std::max(m, testing::max_abs_diff(a.v[c], b.v[c]));
  for (std::size_t c = 0; c < 5; ++c) {
    m = std::max(m, testing::max_abs_diff(a.q[c], b.q[c]));
    m = std::max(m, testing::max_abs_diff(a.p[c], b.p[c]));
  }
  return m;
}

int dispatch(const std::vector<std::string>& args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli_dispatch(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("config: defaults, comments and echo round trip") {
  const RunConfig cfg = parse_config_text("# comment\ngrid.n = 16\npotential.a = 1  # trailing\n");
  CHECK(cfg.n == 16);
  CHECK(cfg.dims == 2);
  CHECK(cfg.potential.a == 1.0);
  const std::string echo = echo_config(cfg);
  CHECK(echo.find("grid.n = 16") != std::string::npos);
  const RunConfig again = parse_config_text(echo);
  CHECK(echo_config(again) == echo);
}

TEST_CASE("config: every problem is reported together") {
  const auto issues = config_issues("grid.n = 15\npotential.c = -1\nbogus.key = 3\ntime.t_end = abc\nno equals sign\n");
  CHECK(issues.size() >= 5u);
  CHECK(any_contains(issues, "grid.n"));
  CHECK(any_contains(issues, "potential.c"));
  CHECK(any_contains(issues, "convexity"));
  CHECK(any_contains(issues, "bogus.key"));
  CHECK(any_contains(issues, "time.t_end"));
}

TEST_CASE("config: duplicates and ranges") {
  CHECK(any_contains(config_issues("grid.n = 16\ngrid.n = 32\n"), "grid.n"));
  CHECK(any_contains(config_issues("grid.dims = 4\n"), "grid.dims"));
  CHECK(any_contains(config_issues("time.cfl_safety = 0\n"), "time.cfl_safety"));
  CHECK(any_contains(config_issues("potential.lambda = -1\n"), "potential.lambda"));
  CHECK(config_issues("potential.lambda = auto\n").empty());
}

TEST_CASE("config: lambda auto and overrides") {
  RunConfig cfg = parse_config_text("potential.a = -1\npotential.b = 0\npotential.lambda = auto\n");
  CHECK(cfg.lambda_auto);
  CHECK(cfg.potential.lambda == doctest::Approx(default_lambda(-1.0, 0.0, cfg.audit.radius)));
  apply_overrides(cfg, {"grid.n=24", "time.t_end = 0.5"});
  CHECK(cfg.n == 24);
  CHECK(cfg.time.t_end == 0.5);
  CHECK_THROWS_AS(apply_overrides(cfg, {"grid.n=7"}), ConfigError);
  CHECK_THROWS_AS(apply_overrides(cfg, {"no_equals"}), ConfigError);
  CHECK_THROWS_AS(parse_config_file((scratch_dir() / "missing.cfg").string()), ConfigError);
}

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23}) CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(INFINITY) == "inf");
}

TEST_CASE("initial data presets") {
  const Grid g(16, 3);
  const SpectralOps ops(g);
  const PotentialParams p;
  const SpectralState z = taylor_green_state(g, p, 0.0, 0.0, 0.0);
  CHECK(max_state_diff(z, SpectralState::zero(g, p)) == 0.0);

  const SpectralState tg = taylor_green_state(g, p, 0.1, 0.05, 0.05);
  CHECK(ops.divergence_ratio(ops.forward(tg.v)) < 1e-13);

  const SpectralState r1 = random_bandlimited_state(g, p, 0.1, 0.05, 0.05, 3, 9);
  const SpectralState r2 = random_bandlimited_state(g, p, 0.1, 0.05, 0.05, 3, 9);
  CHECK(max_state_diff(r1, r2) == 0.0);
  const SpectralState r3 = random_bandlimited_state(g, p, 0.1, 0.05, 0.05, 3, 10);
  CHECK(max_state_diff(r1, r3) > 0.0);
  CHECK(ops.divergence_ratio(ops.forward(r1.v)) < 1e-13);
  for (const auto& c : r1.v) CHECK(std::abs(ops.forward(c)[0]) < 1e-16);
  double ms = 0.0;
  for (const auto& c : r1.v) {
    const auto h = ops.forward(c);
    ms += ops.mean_product(h, h);
  }
  CHECK(std::sqrt(ms) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("random data does not depend on the grid size") {
  const PotentialParams p;
  const Grid g24(24, 2), g48(48, 2);
  const SpectralState a = random_bandlimited_state(g24, p, 0.1, 0.05, 0.05, 4, 3);
  const SpectralState b = random_bandlimited_state(g48, p, 0.1, 0.05, 0.05, 4, 3);
  CHECK(max_state_diff(prolong_state(a, g48), b) < 1e-14);
}

TEST_CASE("manufactured solution solves the forced system") {
  const Grid g(16, 2);
  PotentialParams p;
  p.a = 1.0;
  p.b = 0.5;
  p.c = 1.0;
  p.lambda = 0.3;
  const ManufacturedSolution ms(g, p, 0.1, 0.05, 0.05);
  DynamicsOptions opt;
  opt.forcing = ms.forcing();
  const Dynamics dyn(g, opt);
  // rhs at the exact state equals the exact time derivative
  for (double t : {0.0, 0.37}) {
    const RhsBundle r = dyn.rhs(ms.exact(t));
    const SpectralState d = ms.time_derivative(t);
    for (std::size_t c = 0; c < 3; ++c) CHECK(testing::max_abs_diff(r.v_dot[c], d.v[c]) < 1e-14);
    for (std::size_t c = 0; c < 5; ++c) {
      CHECK(testing::max_abs_diff(r.q_dot[c], d.q[c]) < 1e-14);
      CHECK(testing::max_abs_diff(r.p_dot[c], d.p[c]) < 1e-14);
    }
  }
  const Trajectory tr = integrate(dyn, ms.exact(0.0), IntegrationSettings{0.5, 0.5, 0.5, 0.01});
  CHECK(max_state_diff(tr.snapshots.back(), ms.exact(0.5)) < 1e-9);
}

TEST_CASE("restriction and prolongation") {
  const Grid c(16, 3), f(32, 3);
  auto rng = testing::make_rng(601);
  const SpectralState s = testing::random_state(c, rng, 5, 0.3);
  const SpectralState up = prolong_state(s, f);
  CHECK(max_state_diff(restrict_state(up, c), s) < 1e-14);
  const SpectralOps fops(f);
  CHECK(fops.divergence_ratio(fops.forward(up.v)) < 1e-14);
  CHECK_THROWS_AS(restrict_state(s, f), InvalidInput);
  CHECK_THROWS_AS(prolong_state(up, c), InvalidInput);
  CHECK_THROWS_AS(prolong_state(s, Grid(32, 2)), InvalidInput);

  // a mode beyond the coarse band is removed by restriction
  SpectralState hi = SpectralState::zero(f, {});
  for (std::size_t i = 0; i < f.points(); ++i) hi.q[0][i] = std::cos(9.0 * f.point(i)[0]);
  for (const auto& comp : restrict_state(hi, c).q) CHECK(testing::max_abs(comp) < 1e-14);
}

TEST_CASE("checkpoint round trip is bit exact") {
  const Grid g(8, 3);
  auto rng = testing::make_rng(602);
  PotentialParams p;
  p.lambda = 0.25;
  SpectralState s = testing::random_state(g, rng, 2, 0.3, p);
  s.t = 0.125 + 1e-17;
  const auto bytes = checkpoint_encode(s);
  CHECK(bytes.size() == kCheckpointHeaderBytes + 13 * 8 * 512);
  const SpectralState r = checkpoint_decode(bytes);
  CHECK(r.t == s.t);
  CHECK(r.params == s.params);
  CHECK(r.grid == s.grid);
  CHECK(max_state_diff(r, s) == 0.0);
  CHECK(checkpoint_encode(r) == bytes);

  const std::string path = (scratch_dir() / "state.ckpt").string();
  checkpoint_save(s, path);
  CHECK(max_state_diff(checkpoint_load(path), s) == 0.0);
  CHECK_FALSE(fs::exists(path + ".tmp"));
}

TEST_CASE("checkpoint corruption is reported") {
  const Grid g(8, 2);
  const SpectralState s = SpectralState::zero(g, {});
  const auto bytes = checkpoint_encode(s);

  auto truncated = bytes;
  truncated.resize(bytes.size() - 8);
  try {
    checkpoint_decode(truncated);
    FAIL("truncated checkpoint accepted");
  } catch (const CheckpointError& e) {
    const std::string msg = e.what();
    CHECK(msg.find(std::to_string(bytes.size())) != std::string::npos);
    CHECK(msg.find(std::to_string(truncated.size())) != std::string::npos);
  }
  auto magic = bytes;
  magic[0] = 'X';
  CHECK_THROWS_AS(checkpoint_decode(magic), CheckpointError);
  auto version = bytes;
  version[6] = 2;
  CHECK_THROWS_AS(checkpoint_decode(version), CheckpointError);
  auto basis = bytes;
  basis[kCheckpointHeaderBytes - 4] = 7;
  CHECK_THROWS_AS(checkpoint_decode(basis), CheckpointError);
  CHECK_THROWS_AS(checkpoint_decode(std::vector<unsigned char>(10, 0)), CheckpointError);
  CHECK_THROWS_AS(checkpoint_load((scratch_dir() / "nope.ckpt").string()), CheckpointError);
}

TEST_CASE("diagnostics table") {
  DiagnosticsRecord r;
  r.t = 0.5;
  r.E_kin = 1.0 / 3.0;
  const std::vector<DiagnosticsRecord> one{r};
  const std::string text = format_diagnostics(one);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.rfind(diagnostics_header() + "\n", 0) == 0);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  CHECK(text.find("nan") != std::string::npos);
  CHECK_THROWS_AS(format_diagnostics(std::vector<DiagnosticsRecord>{}), InvalidInput);
  const std::vector<DiagnosticsRecord> three{r, r, r};
  const std::string t3 = format_diagnostics(three);
  CHECK(std::count(t3.begin(), t3.end(), '\n') == 4);
  CHECK(format_diagnostics(three) == t3);
}

TEST_CASE("command line: usage errors") {
  CHECK(dispatch({}) == kExitUsage);
  CHECK(dispatch({"frobnicate"}) == kExitUsage);
  CHECK(dispatch({"run"}) == kExitUsage);
  CHECK(dispatch({"--help"}) == kExitOk);
}

TEST_CASE("command line: config errors are validation failures") {
  const std::string bad = write_text("bad.cfg", "grid.n = 15\n");
  std::string err;
  CHECK(dispatch({"run", bad}, nullptr, &err) == kExitValidation);
  CHECK(err.find("grid.n") != std::string::npos);
}

TEST_CASE("command line: run, info and compare") {
  const std::string csv = (scratch_dir() / "zero.csv").string();
  const std::string ckpt = (scratch_dir() / "zero.ckpt").string();
  const std::string cfg = write_text("zero.cfg", "grid.n = 16\ntime.t_end = 0.2\ntime.snapshot_interval = 0.1\n"
                                                 "potential.a = 1\npotential.b = 0\npotential.c = 1\n"
                                                 "initial.amp_v = 0\ninitial.amp_q = 0\ninitial.amp_p = 0\n"
                                                 "output.diagnostics = " + csv + "\noutput.checkpoint = " + ckpt + "\n");
  std::string out;
  REQUIRE(dispatch({"run", cfg}, &out) == kExitOk);
  const std::string table = read_text(csv);
  CHECK(std::count(table.begin(), table.end(), '\n') == 4);
  const SpectralState last = checkpoint_load(ckpt);
  for (const auto& c : last.v) CHECK(testing::max_abs(c) == 0.0);
  CHECK(last.t == doctest::Approx(0.2));

  CHECK(dispatch({"info", ckpt}, &out) == kExitOk);
  CHECK(out.find("n") != std::string::npos);
  CHECK(dispatch({"info", (scratch_dir() / "nope.ckpt").string()}) != kExitOk);

  const std::string tg = write_text("tg.cfg", "grid.n = 32\ntime.t_end = 0.2\ntime.snapshot_interval = 0.1\n"
                                             "potential.a = 1\npotential.b = 0\npotential.c = 1\n"
                                             "output.diagnostics = " + csv + "\n");
  REQUIRE(dispatch({"compare", tg, tg}, &out) == kExitOk);
  CHECK(out.find("t,rel_energy\n0,0\n") != std::string::npos);
}

TEST_CASE("command line: potential audit exit status") {
  const std::string good = write_text("good.cfg", "potential.a = 1\npotential.b = 0\npotential.c = 1\npotential.audit_samples = 2000\n");
  const std::string bad = write_text("dw.cfg", "potential.a = -1\npotential.b = 0\npotential.c = 1\npotential.lambda = 0\n"
                                               "potential.audit_samples = 2000\n");
  std::string out;
  CHECK(dispatch({"check-potential", bad}, &out) == kExitValidation);
  CHECK(out.find("convexity") != std::string::npos);
  CHECK(dispatch({"check-potential", good}, &out) == kExitOk);
}
