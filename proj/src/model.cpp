#include "hbqed/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hbqed {

using nlohmann::json;

const char* to_string(Coupling c) {
  return c == Coupling::Incoherent ? "incoherent" : "coherent";
}

Coupling coupling_from_string(const std::string& s) {
  if (s == "incoherent") return Coupling::Incoherent;
  if (s == "coherent") return Coupling::Coherent;
  throw Error("BAD_COUPLING", "coupling must be \"incoherent\" or \"coherent\", got \"" + s + "\"");
}

Config validate(const Config& cfg, std::vector<std::string>* warnings) {
  Config out = cfg;
  const ClusterSpec& s = out.spec;

  if (s.m < 1)
    throw Error("M_OUT_OF_RANGE", "m must be >= 1, got " + std::to_string(s.m));
  if (s.coupling == Coupling::Coherent && s.m < 2)
    throw Error("COHERENT_REQUIRES_M_GE_2", "the coherent cluster is defined for m >= 2");

  const int default_cap = s.coupling == Coupling::Incoherent ? 1 : s.m;
  if (out.spec.phonon_cap_hyd < 0) out.spec.phonon_cap_hyd = default_cap;
  if (out.spec.phonon_cap_dist < 0) out.spec.phonon_cap_dist = default_cap;

  const ModelParams& p = out.params;
  if (p.hbar <= 0) throw Error("HBAR_NONPOSITIVE", "hbar must be positive");
  if (p.omega_hyd <= 0 || p.omega_dist <= 0)
    throw Error("OMEGA_NONPOSITIVE", "phonon mode frequencies must be positive");
  if (p.g_hyd < 0 || p.g_dist < 0)
    throw Error("G_NEGATIVE", "coupling strengths must be non-negative");

  const RateConfig& r = out.rates;
  if (r.gamma_hyd < 0 || r.gamma_dist < 0)
    throw Error("GAMMA_NEGATIVE", "emission rates must be non-negative");
  for (double mu : {r.mu_hyd, r.mu_dist})
    if (mu < 0.0 || mu >= 1.0)
      throw Error("MU_OUT_OF_RANGE", "inflow ratio must satisfy 0 <= mu < 1, got " + std::to_string(mu));

  const EvolutionConfig& e = out.evolve;
  if (e.dt <= 0) throw Error("DT_NONPOSITIVE", "dt must be positive");
  if (e.t_max <= 0) throw Error("T_MAX_NONPOSITIVE", "t_max must be positive");
  if (e.steady_tol <= 0) throw Error("STEADY_TOL_NONPOSITIVE", "steady_tol must be positive");
  if (e.probe_interval <= 0) throw Error("PROBE_INTERVAL_NONPOSITIVE", "probe_interval must be positive");
  if (e.positivity_tol < 0) throw Error("POSITIVITY_TOL_NEGATIVE", "positivity_tol must be non-negative");

  if (warnings) {
    const double homega = p.hbar * std::min(p.omega_hyd, p.omega_dist);
    if (p.g_hyd > 0.2 * homega || p.g_dist > 0.2 * homega)
      warnings->push_back("RWA_STRAIN: g exceeds 0.2*hbar*Omega; rotating-wave form may be inaccurate");
    const double gmax = std::max(r.gamma_hyd, r.gamma_dist);
    if (e.dt * gmax > 0.05)
      warnings->push_back("DT_COARSE: dt*max(gamma) exceeds 0.05; Euler dissipative step may be inaccurate");
  }

  out.validated = true;
  return out;
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(known.begin(), known.end(),
                     [&](const char* k) { return it.key() == k; }) == known.end())
      throw Error("CONFIG_UNKNOWN_KEY", "unknown key \"" + it.key() + "\" in " + where);
  }
}

}  // namespace

Config parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("CONFIG_PARSE", e.what());
  }
  reject_unknown(j, {"model", "rates", "evolve"}, "configuration");

  Config cfg;
  if (j.contains("model")) {
    const json& m = j["model"];
    reject_unknown(m, {"m", "coupling", "omega_hyd", "omega_dist", "g_hyd", "g_dist",
                       "phonon_cap_hyd", "phonon_cap_dist"}, "\"model\"");
    if (m.contains("m")) cfg.spec.m = m["m"].get<int>();
    if (m.contains("coupling")) cfg.spec.coupling = coupling_from_string(m["coupling"].get<std::string>());
    if (m.contains("phonon_cap_hyd")) cfg.spec.phonon_cap_hyd = m["phonon_cap_hyd"].get<int>();
    if (m.contains("phonon_cap_dist")) cfg.spec.phonon_cap_dist = m["phonon_cap_dist"].get<int>();
    if (m.contains("omega_hyd")) cfg.params.omega_hyd = m["omega_hyd"].get<double>();
    if (m.contains("omega_dist")) cfg.params.omega_dist = m["omega_dist"].get<double>();
    if (m.contains("g_hyd")) cfg.params.g_hyd = m["g_hyd"].get<double>();
    if (m.contains("g_dist")) cfg.params.g_dist = m["g_dist"].get<double>();
  }
  if (j.contains("rates")) {
    const json& r = j["rates"];
    reject_unknown(r, {"gamma_hyd", "gamma_dist", "mu_hyd", "mu_dist"}, "\"rates\"");
    if (r.contains("gamma_hyd")) cfg.rates.gamma_hyd = r["gamma_hyd"].get<double>();
    if (r.contains("gamma_dist")) cfg.rates.gamma_dist = r["gamma_dist"].get<double>();
    if (r.contains("mu_hyd")) cfg.rates.mu_hyd = r["mu_hyd"].get<double>();
    if (r.contains("mu_dist")) cfg.rates.mu_dist = r["mu_dist"].get<double>();
  }
  if (j.contains("evolve")) {
    const json& e = j["evolve"];
    reject_unknown(e, {"dt", "t_max", "steady_tol", "probe_interval", "positivity_tol"}, "\"evolve\"");
    if (e.contains("dt")) cfg.evolve.dt = e["dt"].get<double>();
    if (e.contains("t_max")) cfg.evolve.t_max = e["t_max"].get<double>();
    if (e.contains("steady_tol")) cfg.evolve.steady_tol = e["steady_tol"].get<double>();
    if (e.contains("probe_interval")) cfg.evolve.probe_interval = e["probe_interval"].get<double>();
    if (e.contains("positivity_tol")) cfg.evolve.positivity_tol = e["positivity_tol"].get<double>();
  }
  return cfg;
}

Config load_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("CONFIG_OPEN", "cannot open configuration file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

std::string config_to_json(const Config& cfg) {
  json j;
  j["model"] = {{"m", cfg.spec.m},
                {"coupling", to_string(cfg.spec.coupling)},
                {"phonon_cap_hyd", cfg.spec.phonon_cap_hyd},
                {"phonon_cap_dist", cfg.spec.phonon_cap_dist},
                {"omega_hyd", cfg.params.omega_hyd},
                {"omega_dist", cfg.params.omega_dist},
                {"g_hyd", cfg.params.g_hyd},
                {"g_dist", cfg.params.g_dist}};
  j["rates"] = {{"gamma_hyd", cfg.rates.gamma_hyd},
                {"gamma_dist", cfg.rates.gamma_dist},
                {"mu_hyd", cfg.rates.mu_hyd},
                {"mu_dist", cfg.rates.mu_dist}};
  j["evolve"] = {{"dt", cfg.evolve.dt},
                 {"t_max", cfg.evolve.t_max},
                 {"steady_tol", cfg.evolve.steady_tol},
                 {"probe_interval", cfg.evolve.probe_interval},
                 {"positivity_tol", cfg.evolve.positivity_tol}};
  j["validated"] = cfg.validated;
  return j.dump(2);
}

}  // namespace hbqed
