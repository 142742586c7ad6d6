#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "hbqed/analysis.hpp"
#include "hbqed/darkstates.hpp"
#include "hbqed/dynamics.hpp"
#include "hbqed/parallel.hpp"
#include "hbqed/report.hpp"

namespace {

using namespace hbqed;

struct CommonArgs {
  std::string config_path;
  std::optional<int> m;
  std::optional<std::string> coupling;
  std::optional<double> mu_hyd, mu_dist, g, gamma, dt, t_max;
  std::string out, svg;
  bool strict = false;
  int workers = default_workers();
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "JSON configuration file");
  cmd->add_option("--m", a.m, "number of hydrogen-bonded units");
  cmd->add_option("--coupling", a.coupling, "incoherent|coherent");
  cmd->add_option("--mu-hyd", a.mu_hyd, "inflow ratio, hyd mode");
  cmd->add_option("--mu-dist", a.mu_dist, "inflow ratio, dist mode");
  cmd->add_option("--g", a.g, "coupling strength (both modes)");
  cmd->add_option("--gamma", a.gamma, "emission rate (both modes)");
  cmd->add_option("--dt", a.dt, "iteration time step");
  cmd->add_option("--t-max", a.t_max, "evolution horizon");
  cmd->add_option("--out", a.out, "primary output path");
  cmd->add_option("--svg", a.svg, "SVG output path");
  cmd->add_flag("--strict", a.strict, "exit 2 when a run does not converge");
  cmd->add_option("--workers", a.workers, "parallel workers (default $HBQED_WORKERS or 1)");
}

Config resolve_config(const CommonArgs& a, std::vector<std::string>* warnings) {
  Config cfg;
  if (!a.config_path.empty()) cfg = load_config_json(a.config_path);
  if (a.m) cfg.spec.m = *a.m;
  if (a.coupling) cfg.spec.coupling = coupling_from_string(*a.coupling);
  if (a.mu_hyd) cfg.rates.mu_hyd = *a.mu_hyd;
  if (a.mu_dist) cfg.rates.mu_dist = *a.mu_dist;
  if (a.g) cfg.params.g_hyd = cfg.params.g_dist = *a.g;
  if (a.gamma) cfg.rates.gamma_hyd = cfg.rates.gamma_dist = *a.gamma;
  if (a.dt) cfg.evolve.dt = *a.dt;
  if (a.t_max) cfg.evolve.t_max = *a.t_max;
  return validate(cfg, warnings);
}

void write_sidecar(const std::string& primary_out, const Config& cfg) {
  if (primary_out.empty()) return;
  write_atomic(primary_out + ".config.json", config_to_json(cfg));
}

struct Built {
  StateSpace space;
  BlockPartition part;
  HamiltonianBlocks ham;
  std::vector<JumpOperator> jumps;
};

Built build(const Config& cfg, ClosureMode closure) {
  Built b;
  b.space = enumerate_states(cfg.spec, closure);
  b.jumps = build_jump_operators(b.space, cfg.rates);
  std::vector<ChannelAction> actions;
  for (const auto& op : b.jumps) actions.push_back(op.action);
  b.part = partition_blocks(b.space, hamiltonian_edges(b.space), actions);
  b.ham = build_hamiltonian(b.space, b.part, cfg.params);
  return b;
}

ClosureMode closure_for(const Config& cfg) {
  return (cfg.rates.mu_hyd > 0 || cfg.rates.mu_dist > 0) ? ClosureMode::PumpClosure
                                                         : ClosureMode::DecayClosure;
}

int cmd_simulate(const CommonArgs& a) {
  std::vector<std::string> warnings;
  const Config cfg = resolve_config(a, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  const Built b = build(cfg, closure_for(cfg));
  Evolver evolver(b.space, b.part, b.ham, b.jumps, cfg, a.workers);
  const TimeSeries series = evolver.evolve();
  const std::string csv = time_series_csv(series);
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    write_atomic(a.out, csv);
    write_sidecar(a.out, cfg);
  }
  if (!a.svg.empty()) write_atomic(a.svg, render_time_series_svg(series));
  return 0;
}

int cmd_steady(const CommonArgs& a) {
  std::vector<std::string> warnings;
  const Config cfg = resolve_config(a, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  const Built b = build(cfg, closure_for(cfg));
  Evolver evolver(b.space, b.part, b.ham, b.jumps, cfg, a.workers);
  const SteadyResult res = evolver.steady_state();
  std::ostringstream os;
  os << "converged " << (res.converged ? "yes" : "no") << " t=" << res.final_time
     << " probe_distance=" << res.probe_distance << "\n";
  for (std::size_t k = 0; k < res.distribution.size(); ++k) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "P%zu %.12g\n", k, res.distribution[k]);
    os << buf;
  }
  if (a.out.empty()) {
    std::cout << os.str();
  } else {
    write_atomic(a.out, os.str());
    write_sidecar(a.out, cfg);
  }
  if (!res.converged) {
    std::cerr << "NOT_CONVERGED: probe distance " << res.probe_distance << " after t="
              << res.final_time << "\n";
    if (a.strict) return 2;
  }
  return 0;
}

int cmd_blocks(const CommonArgs& a) {
  const Config cfg = resolve_config(a, nullptr);
  const Built b = build(cfg, closure_for(cfg));
  const std::string rep = blocks_report(b.part);
  if (a.out.empty()) {
    std::cout << rep;
  } else {
    write_atomic(a.out, rep);
    write_sidecar(a.out, cfg);
  }
  return 0;
}

int cmd_dark(const CommonArgs& a) {
  const Config cfg = resolve_config(a, nullptr);
  if (cfg.spec.coupling != Coupling::Coherent)
    throw Error("COHERENT_REQUIRED", "dark states are defined for the coherent cluster");
  const DarkBasis basis = dark_basis(cfg.spec.m);
  const Built b = build(cfg, ClosureMode::DecayClosure);
  Evolver evolver(b.space, b.part, b.ham, b.jumps, cfg, a.workers);
  std::vector<DarkReport> reports;
  for (const auto& sec : basis.sectors)
    for (const auto& v : sec.basis) reports.push_back(verify_dark(v.coeffs, evolver));
  const std::string json = dark_basis_to_json(basis, reports);
  if (a.out.empty()) {
    std::cout << json << "\n";
  } else {
    write_atomic(a.out, json);
    write_sidecar(a.out, cfg);
  }
  return 0;
}

int cmd_sweep(const CommonArgs& a, int grid, const std::vector<double>& levels, int target_k) {
  std::vector<std::string> warnings;
  Config cfg = resolve_config(a, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  // High-inflow cells relax at rate gamma*(1-mu); give them room by default.
  if (!a.t_max && cfg.evolve.t_max == EvolutionConfig{}.t_max) cfg.evolve.t_max = 20000.0;
  SweepOptions opt;
  opt.grid_hyd = opt.grid_dist = grid;
  opt.workers = a.workers;
  const HeatmapData map = sweep_inflow(cfg, opt);
  const int k = target_k >= 0 ? target_k : cfg.spec.m;
  const ContourSet contours = extract_contours(map, k, levels);
  if (a.out.empty()) {
    std::cout << heatmap_csv(map);
  } else {
    write_atomic(a.out, heatmap_csv(map));
    write_atomic(a.out + ".contours.json", contours_json(contours));
    write_sidecar(a.out, cfg);
  }
  if (!a.svg.empty()) write_atomic(a.svg, render_heatmap_svg(map, k, contours));
  bool all = true;
  for (char c : map.converged) all = all && c;
  if (!all) {
    std::cerr << "NOT_CONVERGED: some sweep cells did not converge\n";
    if (a.strict) return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hydrogen-bonded cluster simulator"};
  app.require_subcommand(1);

  CommonArgs sim_args, steady_args, blocks_args, dark_args, sweep_args;
  int grid = 21;
  int target_k = -1;
  std::vector<double> levels{0.1, 0.5, 0.9};

  add_common(app.add_subcommand("simulate", "evolve and write a time-series CSV"), sim_args);
  add_common(app.add_subcommand("steady", "evolve to the steady state"), steady_args);
  add_common(app.add_subcommand("blocks", "report the block decomposition"), blocks_args);
  add_common(app.add_subcommand("dark", "enumerate and verify dark states"), dark_args);
  CLI::App* sweep = app.add_subcommand("sweep", "steady-state map over inflow ratios");
  add_common(sweep, sweep_args);
  sweep->add_option("--grid", grid, "grid points per axis");
  sweep->add_option("--levels", levels, "contour levels");
  sweep->add_option("--k", target_k, "target class for contours (default m)");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand("simulate")) return cmd_simulate(sim_args);
    if (app.got_subcommand("steady")) return cmd_steady(steady_args);
    if (app.got_subcommand("blocks")) return cmd_blocks(blocks_args);
    if (app.got_subcommand("dark")) return cmd_dark(dark_args);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_args, grid, levels, target_k);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const hbqed::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const std::string code = e.code();
    const bool validation = code == "MU_OUT_OF_RANGE" || code == "M_OUT_OF_RANGE" ||
                            code == "COHERENT_REQUIRES_M_GE_2" || code.find("CONFIG") == 0 ||
                            code.find("NONPOSITIVE") != std::string::npos ||
                            code.find("NEGATIVE") != std::string::npos ||
                            code == "BAD_COUPLING" || code == "COHERENT_REQUIRED";
    return validation ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
