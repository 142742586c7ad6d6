#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hbqed/operators.hpp"

namespace hbqed {

struct BlockDensityMatrix {
  std::vector<Eigen::MatrixXcd> blocks;
  std::vector<char> active;  // exact-zero blocks are skipped
  double time = 0.0;

  double trace() const;
  double hermiticity_error() const;  // max |rho - rho^dagger| entry
  double min_eigenvalue() const;
  // 1/2 * sum of absolute eigenvalues of (this - other), blockwise.
  double trace_distance(const BlockDensityMatrix& other) const;
};

struct TimeSeries {
  int m = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> hb;  // one P0..Pm row per sample
  std::vector<double> n_hyd;            // phonon expectation per mode class
  std::vector<double> n_dist;
  std::vector<double> trace;
  std::vector<double> min_eig;
};

struct SteadyResult {
  std::vector<double> distribution;  // P0..Pm
  bool converged = false;
  double final_time = 0.0;
  double probe_distance = 0.0;  // last probe-to-probe trace distance
};

// Two-step iteration: exact spectral propagator for the unitary half, explicit
// Euler for the dissipative superoperator. Blocks evolve independently inside
// one step; jump transfers are routed between blocks through the partition.
class Evolver {
public:
  Evolver(const StateSpace& space, const BlockPartition& part,
          const HamiltonianBlocks& ham, const std::vector<JumpOperator>& jumps,
          const Config& cfg, int workers = 1);

  BlockDensityMatrix initial_state() const;

  // rho~ = U rho U^dagger; trace and spectrum preserved.
  void unitary_step(BlockDensityMatrix& rho) const;
  // rho += (dt/hbar) L(rho), transfers routed between blocks.
  void dissipative_step(BlockDensityMatrix& rho) const;
  // One full dt iteration (both halves, double-buffered).
  void step(BlockDensityMatrix& rho) const;

  // Advance to t_end, appending one sample per probe interval (and at the
  // start when the series is empty). Throws POSITIVITY_VIOLATION when the
  // smallest eigenvalue at a probe drops below -positivity_tol.
  void evolve(BlockDensityMatrix& rho, double t_end, TimeSeries* series) const;
  TimeSeries evolve() const;  // from the all-excited state to t_max

  // Long-time evolution with probe-to-probe trace-distance detection.
  SteadyResult steady_state() const;

  std::vector<double> hb_distribution(const BlockDensityMatrix& rho) const;
  double phonon_expectation(const BlockDensityMatrix& rho, Mode mode) const;

  // Continuous-time generator, for stationarity diagnostics.
  BlockDensityMatrix lindblad_derivative(const BlockDensityMatrix& rho) const;

  const StateSpace& space() const { return space_; }
  const BlockPartition& partition() const { return part_; }
  const Config& config() const { return cfg_; }

private:
  struct Transfer {
    int channel;
    int source_block;
    bool pump;
    // local source index, local target index, amplitude
    std::vector<int> src, dst;
    std::vector<double> amp;
  };

  void apply_dissipator(const BlockDensityMatrix& in, BlockDensityMatrix& out,
                        double scale, bool include_identity) const;

  const StateSpace& space_;
  const BlockPartition& part_;
  const HamiltonianBlocks& ham_;
  const std::vector<JumpOperator>& jumps_;
  Config cfg_;
  int workers_;

  std::vector<Eigen::MatrixXcd> propagators_;
  std::vector<Eigen::VectorXd> anticomm_weight_;      // per block, per local state
  std::vector<std::vector<Transfer>> incoming_;       // per target block
  std::vector<std::vector<int>> k_class_;             // per block: #units at level 0
  std::vector<std::vector<double>> occ_hyd_, occ_dist_;
  int initial_index_;
  mutable BlockDensityMatrix scratch_;
};

BlockDensityMatrix initial_state(const StateSpace& space, const BlockPartition& part);

}  // namespace hbqed
