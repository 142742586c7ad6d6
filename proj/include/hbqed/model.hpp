#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hbqed {

// Error with a stable machine-readable code plus a human-readable message.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

enum class Coupling { Incoherent, Coherent };

const char* to_string(Coupling c);
Coupling coupling_from_string(const std::string& s);

// Cluster layout: m hydrogen-bonded units, each a three-level system
// coupled to two phonon modes (private per unit or shared by the cluster).
struct ClusterSpec {
  int m = 1;
  Coupling coupling = Coupling::Incoherent;
  // Occupation cap per phonon mode; -1 picks the default for the coupling
  // (1 per private mode, m per shared mode).
  int phonon_cap_hyd = -1;
  int phonon_cap_dist = -1;
};

struct ModelParams {
  double hbar = 1.0;
  double omega_hyd = 1.0;
  double omega_dist = 1.0;
  double g_hyd = 0.1;
  double g_dist = 0.1;
};

struct RateConfig {
  double gamma_hyd = 0.02;
  double gamma_dist = 0.02;
  double mu_hyd = 0.0;   // inflow-to-emission ratio, 0 <= mu < 1
  double mu_dist = 0.0;
};

struct EvolutionConfig {
  double dt = 0.1;
  double t_max = 1000.0;
  double steady_tol = 1e-8;      // probe-to-probe trace distance
  double probe_interval = 1.0;   // time between convergence/observable probes
  double positivity_tol = 1e-4;  // allowed negative-eigenvalue magnitude
};

struct Config {
  ClusterSpec spec;
  ModelParams params;
  RateConfig rates;
  EvolutionConfig evolve;
  bool validated = false;
};

// Checks every invariant, fills cap defaults, and returns the normalized
// configuration. Throws hbqed::Error with a named code on violation.
// Non-fatal conditions (RWA ratio, coarse dt) are appended to `warnings`.
Config validate(const Config& cfg, std::vector<std::string>* warnings = nullptr);

inline Config validate(const ClusterSpec& spec, const ModelParams& params,
                       const RateConfig& rates, const EvolutionConfig& evo,
                       std::vector<std::string>* warnings = nullptr) {
  return validate(Config{spec, params, rates, evo, false}, warnings);
}

// Loads a JSON configuration file; missing keys take defaults, unknown keys
// are rejected (CONFIG_UNKNOWN_KEY). The result is not yet validated.
Config load_config_json(const std::string& path);
Config parse_config_json(const std::string& text);

// Serialized echo of a fully-resolved configuration, for sidecar files.
std::string config_to_json(const Config& cfg);

}  // namespace hbqed
