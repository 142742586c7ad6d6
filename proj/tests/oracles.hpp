#pragma once

// Test-only oracles, written independently of the library's enumeration and
// block evolution paths. The dense model keeps the full (unblocked) density
// matrix and applies the same two-step iteration with explicitly constructed
// operators.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hbqed/model.hpp"

namespace hbqed::oracle {

// Reachable-state count by brute-force closure over the raw register product
// space (p1, p2, l, d per unit; shared p for the coherent case).
std::size_t closure_count(int m, Coupling coupling, int cap_h, int cap_d, bool pump);

// One reachable raw state, compressed: phonons then levels, as flat vectors.
struct DenseState {
  std::vector<int> p_hyd, p_dist;  // per unit or single shared register
  std::vector<int> a;              // 0,1,2 per unit
  bool operator==(const DenseState&) const = default;
  bool operator<(const DenseState& o) const {
    if (p_hyd != o.p_hyd) return p_hyd < o.p_hyd;
    if (p_dist != o.p_dist) return p_dist < o.p_dist;
    return a < o.a;
  }
};

class DenseModel {
public:
  DenseModel(int m, Coupling coupling, int cap_h, int cap_d, bool pump,
             const ModelParams& params, const RateConfig& rates);

  const std::vector<DenseState>& states() const { return states_; }
  const Eigen::MatrixXd& hamiltonian() const { return h_; }

  // Density matrix of the all-excited pure state.
  Eigen::MatrixXcd initial() const;
  // One dt iteration: exact propagator then explicit Euler dissipator.
  void step(Eigen::MatrixXcd& rho, double dt) const;
  std::vector<double> hb_distribution(const Eigen::MatrixXcd& rho) const;

private:
  int m_;
  Coupling coupling_;
  std::vector<DenseState> states_;
  Eigen::MatrixXd h_;
  Eigen::VectorXd evals_;
  Eigen::MatrixXd evecs_;
  ModelParams params_;
  RateConfig rates_;
  struct Channel {
    double gamma, mu;
    bool edge_resolved;
    Eigen::MatrixXd a;  // annihilation
  };
  std::vector<Channel> channels_;
  mutable double cached_dt_ = -1.0;
  mutable Eigen::MatrixXcd u_;
};

// Rank of a double matrix by row reduction with a pivot threshold.
int float_rank(Eigen::MatrixXd a, double tol = 1e-9);

}  // namespace hbqed::oracle
