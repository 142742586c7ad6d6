#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hbqed/basis.hpp"

namespace hbqed {

// Triplet form used for debug dumps and cross-checks.
struct SparseComplexMatrix {
  int rows = 0;
  int cols = 0;
  struct Entry {
    int row;
    int col;
    std::complex<double> value;
  };
  std::vector<Entry> entries;

  Eigen::MatrixXcd dense() const;
  std::string to_csv() const;  // "row,col,re,im" lines
};

// One dissipation channel of the master equation. `action` is the phonon
// annihilation map restricted to the enumerated basis (one target per source);
// the matching inflow channel is its adjoint, `pump` (zero at the cap).
// For shared modes each nonzero action entry is an edge of the dissipation
// graph and acts as its own Lindblad operator; for private modes the channel
// operator acts as a whole.
struct JumpOperator {
  int id = 0;
  Mode mode = Mode::Hyd;
  int unit = -1;  // -1 = shared mode
  double gamma = 0.0;
  double mu = 0.0;
  bool edge_resolved = false;
  ChannelAction action;  // decay: removes one quantum, amplitude sqrt(p)
  ChannelAction pump;    // inflow: adds one quantum, amplitude sqrt(p+1)

  SparseComplexMatrix action_sparse() const;
};

std::vector<JumpOperator> build_jump_operators(const StateSpace& space,
                                               const RateConfig& rates);

// Unordered pairs (i, j), i < j, with a nonzero Hamiltonian matrix element.
std::vector<std::pair<int, int>> hamiltonian_edges(const StateSpace& space);

// Block-diagonal Hamiltonian with a cached spectral decomposition per block.
struct HamiltonianBlocks {
  std::vector<Eigen::MatrixXd> h;       // real symmetric blocks
  std::vector<Eigen::VectorXd> evals;   // energies
  std::vector<Eigen::MatrixXd> evecs;   // orthogonal transforms

  // exp(-i H dt / hbar) per block, materialized from the cached spectra.
  std::vector<Eigen::MatrixXcd> propagators(double dt, double hbar) const;

  SparseComplexMatrix block_sparse(const BlockPartition& part, int block) const;
};

HamiltonianBlocks build_hamiltonian(const StateSpace& space,
                                    const BlockPartition& part,
                                    const ModelParams& params);

// Diagonal of the free Hamiltonian for one basis state.
double diagonal_energy(const BasisState& s, const ClusterSpec& spec,
                       const ModelParams& params);

}  // namespace hbqed
