#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hbqed/analysis.hpp"
#include "hbqed/darkstates.hpp"
#include "hbqed/dynamics.hpp"
#include "hbqed/report.hpp"

namespace py = pybind11;
using namespace hbqed;

namespace {

Config make_config(int m, const std::string& coupling, double g, double gamma,
                   double mu_hyd, double mu_dist, double dt, double t_max) {
  Config cfg;
  cfg.spec.m = m;
  cfg.spec.coupling = coupling_from_string(coupling);
  cfg.params.g_hyd = cfg.params.g_dist = g;
  cfg.rates.gamma_hyd = cfg.rates.gamma_dist = gamma;
  cfg.rates.mu_hyd = mu_hyd;
  cfg.rates.mu_dist = mu_dist;
  cfg.evolve.dt = dt;
  cfg.evolve.t_max = t_max;
  return validate(cfg);
}

struct BuiltModel {
  Config cfg;
  StateSpace space;
  BlockPartition part;
  HamiltonianBlocks ham;
  std::vector<JumpOperator> jumps;
};

BuiltModel build_model(const Config& cfg) {
  BuiltModel b;
  b.cfg = cfg;
  const ClosureMode closure = (cfg.rates.mu_hyd > 0 || cfg.rates.mu_dist > 0)
                                  ? ClosureMode::PumpClosure
                                  : ClosureMode::DecayClosure;
  b.space = enumerate_states(cfg.spec, closure);
  b.jumps = build_jump_operators(b.space, cfg.rates);
  std::vector<ChannelAction> actions;
  for (const auto& op : b.jumps) actions.push_back(op.action);
  b.part = partition_blocks(b.space, hamiltonian_edges(b.space), actions);
  b.ham = build_hamiltonian(b.space, b.part, cfg.params);
  return b;
}

py::dict blocks_summary(const Config& cfg) {
  const BuiltModel b = build_model(cfg);
  py::dict out;
  out["org_dim"] = b.part.org_dim;
  out["num_bls"] = b.part.num_blocks();
  out["max_dim_bl"] = b.part.max_block_dim;
  out["memory_ratio"] = b.part.memory_ratio;
  return out;
}

py::dict run_steady(const Config& cfg, int workers) {
  const BuiltModel b = build_model(cfg);
  Evolver evolver(b.space, b.part, b.ham, b.jumps, b.cfg, workers);
  const SteadyResult res = evolver.steady_state();
  py::dict out;
  out["distribution"] = res.distribution;
  out["converged"] = res.converged;
  out["final_time"] = res.final_time;
  return out;
}

py::dict run_simulate(const Config& cfg, int workers) {
  const BuiltModel b = build_model(cfg);
  Evolver evolver(b.space, b.part, b.ham, b.jumps, b.cfg, workers);
  const TimeSeries s = evolver.evolve();
  py::dict out;
  out["times"] = s.times;
  out["hb"] = s.hb;
  out["n_hyd"] = s.n_hyd;
  out["n_dist"] = s.n_dist;
  out["trace"] = s.trace;
  out["min_eig"] = s.min_eig;
  return out;
}

py::list run_dark(int m) {
  const DarkBasis basis = dark_basis(m);
  py::list sectors;
  for (const auto& sec : basis.sectors) {
    py::dict js;
    js["n2"] = sec.n2;
    js["dimension"] = int(sec.basis.size());
    py::list vecs;
    for (const auto& v : sec.basis) {
      py::list terms;
      for (const auto& [code, c] : v.coeffs)
        terms.append(py::make_tuple(string_label(code, m), c));
      vecs.append(terms);
    }
    js["basis"] = vecs;
    sectors.append(js);
  }
  return sectors;
}

py::dict run_sweep(const Config& cfg, int grid, double mu_max, int workers) {
  SweepOptions opt;
  opt.grid_hyd = opt.grid_dist = grid;
  opt.mu_max = mu_max;
  opt.workers = workers;
  const HeatmapData map = sweep_inflow(cfg, opt);
  py::dict out;
  out["mu_hyd"] = map.mu_hyd;
  out["mu_dist"] = map.mu_dist;
  out["value"] = map.value;
  std::vector<int> conv(map.converged.begin(), map.converged.end());
  out["converged"] = conv;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "open-system dynamics of hydrogen-bonded cluster models";

  py::class_<Config>(mod, "Config");
  mod.def("config", &make_config, py::arg("m") = 1, py::arg("coupling") = "incoherent",
          py::arg("g") = 0.1, py::arg("gamma") = 0.02, py::arg("mu_hyd") = 0.0,
          py::arg("mu_dist") = 0.0, py::arg("dt") = 0.1, py::arg("t_max") = 1000.0);
  mod.def("config_from_json", [](const std::string& text) { return validate(parse_config_json(text)); });
  mod.def("state_count", [](const Config& cfg, bool pump) {
    return enumerate_states(cfg.spec, pump ? ClosureMode::PumpClosure : ClosureMode::DecayClosure).size();
  }, py::arg("cfg"), py::arg("pump") = false);
  mod.def("blocks", &blocks_summary);
  mod.def("steady", &run_steady, py::arg("cfg"), py::arg("workers") = 1);
  mod.def("simulate", &run_simulate, py::arg("cfg"), py::arg("workers") = 1);
  mod.def("dark_basis", &run_dark, py::arg("m"));
  mod.def("sweep", &run_sweep, py::arg("cfg"), py::arg("grid") = 11, py::arg("mu_max") = 0.9,
          py::arg("workers") = 1);

  py::register_exception<Error>(mod, "HbqedError");
}
