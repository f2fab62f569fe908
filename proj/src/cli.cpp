#include "qshyp/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "field_util.hpp"
#include "qshyp/checkpoint.hpp"
#include "qshyp/csv.hpp"
#include "qshyp/defects.hpp"
#include "qshyp/errors.hpp"
#include "qshyp/initial_data.hpp"
#include "qshyp/relative_energy.hpp"
#include "qshyp/report.hpp"
#include "qshyp/resample.hpp"

namespace qshyp {

namespace {

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  RunConfig cfg = parse_config_file(path);
  if (!overrides.empty()) apply_overrides(cfg, overrides);
  return cfg;
}

Dynamics make_dynamics(const RunConfig& cfg, const Forcing& forcing) {
  DynamicsOptions o = cfg.dynamics_options();
  o.forcing = forcing;
  return Dynamics(cfg.grid(), std::move(o));
}

// L2 distance over all three fields.
double state_distance(const SpectralOps& ops, const SpectralState& a, const SpectralState& b) {
  Real d(ops.grid().points());
  for (std::size_t i = 0; i < d.size(); ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < 3; ++c) acc += (a.v[c][i] - b.v[c][i]) * (a.v[c][i] - b.v[c][i]);
    for (std::size_t c = 0; c < 5; ++c)
      acc += (a.q[c][i] - b.q[c][i]) * (a.q[c][i] - b.q[c][i]) + (a.p[c][i] - b.p[c][i]) * (a.p[c][i] - b.p[c][i]);
    d[i] = acc;
  }
  return std::sqrt(ops.integrate(d));
}

int cmd_run(const std::string& path, const std::vector<std::string>& overrides, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(path, overrides);
  out << echo_config(cfg);
  const RunResult r = run_simulation(cfg);
  write_diagnostics(r.records, cfg.diagnostics_path);
  if (!cfg.checkpoint_path.empty()) checkpoint_save(r.trajectory.snapshots.back(), cfg.checkpoint_path);
  const auto& first = r.records.front();
  const auto& last = r.records.back();
  out << "steps: " << r.trajectory.steps << '\n'
      << "snapshots: " << r.records.size() << '\n'
      << "final_time: " << format_double(last.t) << '\n'
      << "energy_F_change: " << format_double(last.E_total_F - first.E_total_F) << '\n'
      << "balance_residual: " << format_double(last.balance_residual) << '\n';
  if (r.loop) {
    out << "loop_spacing_ratio: " << format_double(r.loop->worst_spacing_ratio) << '\n';
    if (r.loop->under_resolved) err << "warning: loop markers under-resolved (spacing ratio above 50)\n";
  }
  if (r.trajectory.blew_up) {
    err << "blow-up: " << r.trajectory.blowup_message << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_check_potential(const std::string& path, const std::vector<std::string>& overrides, std::ostream& out) {
  const RunConfig cfg = load_config(path, overrides);
  const auto rep = check_assumptions(cfg.potential, cfg.audit.samples, cfg.audit.radius, cfg.audit.seed);
  out << format_assumption_report(rep, cfg.potential);
  return rep.all_ok() ? kExitOk : kExitValidation;
}

int cmd_compare(const std::string& path_a, const std::string& path_b, const std::vector<std::string>& overrides,
                std::ostream& out, std::ostream& err) {
  const RunConfig a = load_config(path_a, overrides);
  const RunConfig b = load_config(path_b, overrides);
  if (a.dims != b.dims) throw InvalidInput("compare: the two configs use different dims");
  if (a.n > b.n) throw InvalidInput("compare: the second config must use a grid at least as fine as the first");
  if (!(a.potential == b.potential)) throw InvalidInput("compare: the two configs use different potentials");
  const RunResult ra = run_simulation(a);
  const RunResult rb = run_simulation(b);
  if (ra.trajectory.blew_up || rb.trajectory.blew_up) {
    err << "compare: a run blew up: " << (ra.trajectory.blew_up ? ra.trajectory.blowup_message : rb.trajectory.blowup_message)
        << '\n';
    return kExitRuntime;
  }
  const auto& sa = ra.trajectory.snapshots;
  const auto& sb = rb.trajectory.snapshots;

  const SpectralOps ops(b.grid());
  out << "t,rel_energy\n";
  detail::require_times(sa, sb, "compare");
  for (std::size_t j = 0; j < sb.size(); ++j)
    out << format_double(sb[j].t) << ',' << format_double(relative_energy(ops, resample_state(sa[j], b.grid()), sb[j]))
        << '\n';

  try {
    out << format_defect_report(defect_estimate(sa, sb));
  } catch (const InvalidInput& e) {
    out << "defect_estimate: not applicable (" << e.what() << ")\n";
  }
  if (sa.size() >= 2) out << format_weak_residuals(weak_residuals(sa, a.weak_cutoff), a.weak_cutoff);

  GronwallOptions go;
  go.c = a.gronwall_c;
  try {
    out << format_gronwall(gronwall_check(sa, sb, go));
  } catch (const UnresolvedError& e) {
    out << "gronwall: refused\n";
    err << "gronwall_check: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

int cmd_convergence(const std::string& path, const std::vector<std::string>& overrides, int levels, std::ostream& out) {
  RunConfig cfg = load_config(path, overrides);
  if (levels < 2) throw InvalidInput("convergence: at least two levels are needed");
  if (!(cfg.time.t_end > 0.0)) throw InvalidInput("convergence: time.t_end must be positive");
  out << echo_config(cfg);
  const InitialData init = make_initial_data(cfg);
  const Dynamics dyn = make_dynamics(cfg, init.forcing);
  const double dt0 = cfg.time.dt_fixed > 0.0 ? cfg.time.dt_fixed : dyn.cfl_dt(init.state, cfg.time.cfl_safety);
  const std::size_t m0 = steps_for_interval(cfg.time.t_end - init.state.t, dt0);

  auto final_state = [&](std::size_t steps) {
    IntegrationSettings s = cfg.time;
    s.snapshot_interval = cfg.time.t_end - init.state.t;
    s.dt_fixed = s.snapshot_interval / static_cast<double>(steps);
    Trajectory tr = integrate(dyn, init.state, s);
    if (tr.blew_up) throw BlowUpError(tr.blowup_time, tr.blowup_message);
    return tr.snapshots.back();
  };

  const bool manufactured = cfg.initial.kind == "manufactured";
  const SpectralState reference =
      manufactured ? ManufacturedSolution(cfg.grid(), cfg.potential, cfg.initial.amp_v, cfg.initial.amp_q,
                                          cfg.initial.amp_p, cfg.dynamics_options())
                         .exact(cfg.time.t_end)
                   : final_state(m0 << (levels + 2));
  out << "reference: " << (manufactured ? "exact manufactured solution" : "self-convergence against dt/2^(levels+2)")
      << '\n'
      << "level,dt,error,ratio,order\n";
  double prev = 0.0;
  for (int l = 0; l < levels; ++l) {
    const std::size_t m = m0 << l;
    const double err_l = state_distance(dyn.ops(), final_state(m), reference);
    out << l << ',' << format_double((cfg.time.t_end - init.state.t) / static_cast<double>(m)) << ','
        << format_double(err_l);
    if (l > 0 && err_l > 0.0)
      out << ',' << format_double(prev / err_l) << ',' << format_double(std::log2(prev / err_l));
    else
      out << ",nan,nan";
    out << '\n';
    prev = err_l;
  }
  return kExitOk;
}

int cmd_info(const std::string& path, std::ostream& out) {
  const SpectralState s = checkpoint_load(path);
  const SpectralOps ops(s.grid);
  const auto e = energy_breakdown(ops, s);
  out << "n: " << s.grid.n() << '\n'
      << "dims: " << s.grid.dims() << '\n'
      << "t: " << format_double(s.t) << '\n'
      << "a: " << format_double(s.params.a) << '\n'
      << "b: " << format_double(s.params.b) << '\n'
      << "c: " << format_double(s.params.c) << '\n'
      << "lambda: " << format_double(s.params.lambda) << '\n'
      << "q: " << format_double(s.params.q) << '\n'
      << "growth_const: " << format_double(s.params.growth_const) << '\n'
      << "E_kin: " << format_double(e.kinetic) << '\n'
      << "E_P: " << format_double(e.p_energy) << '\n'
      << "E_elastic: " << format_double(e.elastic) << '\n'
      << "E_bulk_F: " << format_double(e.bulk_f) << '\n'
      << "E_total_F: " << format_double(e.total_f()) << '\n'
      << "max_div_v: " << format_double(ops.divergence_ratio(ops.forward(s.v))) << '\n';
  return kExitOk;
}

}  // namespace

RunResult run_simulation(const RunConfig& cfg) {
  validate_config(cfg);
  const InitialData init = make_initial_data(cfg);
  const Dynamics dyn = make_dynamics(cfg, init.forcing);
  RunResult r;
  r.trajectory = integrate(dyn, init.state, cfg.time);
  const auto& snaps = r.trajectory.snapshots;
  if (cfg.loop.enabled) {
    const Loop loop0 = make_circle_loop(cfg.loop.center, cfg.loop.radius, cfg.loop.markers, cfg.loop.normal_axis);
    r.loop = advect_loop(dyn, snaps, loop0);
  }
  r.records = compute_records(dyn, snaps, r.loop ? &*r.loop : nullptr);
  return r;
}

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudospectral solver and diagnostics for the inviscid Qian-Sheng Q-tensor system"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP thread count (0 keeps the default)")->check(CLI::NonNegativeNumber);

  std::vector<std::string> overrides;
  std::string cfg_a, cfg_b, checkpoint;
  int levels = 3;

  auto* run = app.add_subcommand("run", "integrate a configuration and write diagnostics");
  run->add_option("config", cfg_a, "configuration file")->required();
  run->add_option("--set", overrides, "override a config key (key=value), repeatable");

  auto* audit = app.add_subcommand("check-potential", "audit isotropy, convexity and growth of the bulk potential");
  audit->add_option("config", cfg_a, "configuration file")->required();
  audit->add_option("--set", overrides, "override a config key (key=value), repeatable");

  auto* compare = app.add_subcommand("compare", "relative energy, Gronwall check and defects of run A against run B");
  compare->add_option("config_a", cfg_a, "coarse or perturbed configuration")->required();
  compare->add_option("config_b", cfg_b, "reference configuration (grid at least as fine)")->required();
  compare->add_option("--set", overrides, "override a key in both configs (key=value), repeatable");

  auto* conv = app.add_subcommand("convergence", "time-step convergence table");
  conv->add_option("config", cfg_a, "configuration file")->required();
  conv->add_option("--levels", levels, "number of dt levels")->check(CLI::Range(2, 8));
  conv->add_option("--set", overrides, "override a config key (key=value), repeatable");

  auto* info = app.add_subcommand("info", "print the header and energies of a checkpoint");
  info->add_option("checkpoint", checkpoint, "checkpoint file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*run) return cmd_run(cfg_a, overrides, out, err);
    if (*audit) return cmd_check_potential(cfg_a, overrides, out);
    if (*compare) return cmd_compare(cfg_a, cfg_b, overrides, out, err);
    if (*conv) return cmd_convergence(cfg_a, overrides, levels, out);
    if (*info) return cmd_info(checkpoint, out);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kExitValidation;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const BlowUpError& e) {
    err << "blow-up: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace qshyp
