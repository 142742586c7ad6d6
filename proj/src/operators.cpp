#include "hbqed/operators.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace hbqed {

Eigen::MatrixXcd SparseComplexMatrix::dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, cols);
  for (const auto& e : entries) m(e.row, e.col) += e.value;
  return m;
}

std::string SparseComplexMatrix::to_csv() const {
  std::ostringstream os;
  os << "row,col,re,im\n";
  char buf[80];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.12g,%.12g\n", e.row, e.col,
                  e.value.real(), e.value.imag());
    os << buf;
  }
  return os.str();
}

SparseComplexMatrix JumpOperator::action_sparse() const {
  SparseComplexMatrix m;
  m.rows = m.cols = int(action.target.size());
  for (int i = 0; i < m.cols; ++i)
    if (action.target[i] >= 0)
      m.entries.push_back({action.target[i], i, {action.amp[i], 0.0}});
  return m;
}

std::vector<JumpOperator> build_jump_operators(const StateSpace& space,
                                               const RateConfig& rates) {
  const ClusterSpec& spec = space.spec;
  const bool shared = spec.coupling == Coupling::Coherent;
  const int n = int(space.size());
  const int nreg = space.num_phonon_registers();

  std::vector<JumpOperator> ops;
  for (int reg = 0; reg < nreg; ++reg) {
    for (Mode mode : {Mode::Hyd, Mode::Dist}) {
      JumpOperator op;
      op.id = int(ops.size());
      op.mode = mode;
      op.unit = shared ? -1 : reg;
      op.gamma = mode == Mode::Hyd ? rates.gamma_hyd : rates.gamma_dist;
      op.mu = mode == Mode::Hyd ? rates.mu_hyd : rates.mu_dist;
      op.edge_resolved = shared;
      op.action.target.assign(n, -1);
      op.action.amp.assign(n, 0.0);
      op.pump.target.assign(n, -1);
      op.pump.amp.assign(n, 0.0);
      const int cap = mode == Mode::Hyd ? spec.phonon_cap_hyd : spec.phonon_cap_dist;
      for (int i = 0; i < n; ++i) {
        BasisState t = space.states[i];
        auto& p = mode == Mode::Hyd ? t.p_hyd : t.p_dist;
        const int occ = p[reg];
        if (occ > 0) {
          --p[reg];
          const int j = space.index_of(t);
          if (j < 0)
            throw Error("BLOCK_ROUTING_MISS",
                        "decay action leaves the enumerated space from state " +
                            space.states[i].label());
          op.action.target[i] = j;
          op.action.amp[i] = std::sqrt(double(occ));
          ++p[reg];
        }
        if (occ < cap) {
          ++p[reg];
          const int j = space.index_of(t);
          // Creation may leave a DecayClosure space; the pump map records the
          // miss and the evolver rejects inflow on such spaces.
          if (j >= 0) {
            op.pump.target[i] = j;
            op.pump.amp[i] = std::sqrt(double(occ) + 1.0);
          }
          --p[reg];
        }
      }
      ops.push_back(std::move(op));
    }
  }
  return ops;
}

namespace {

// Exchange partners of state i: for every unit at the critical level both
// emission moves, with the bosonic amplitude on the created quantum.
template <typename Fn>
void for_each_exchange(const StateSpace& space, int i, Fn&& visit) {
  const ClusterSpec& spec = space.spec;
  const bool shared = spec.coupling == Coupling::Coherent;
  const BasisState& s = space.states[i];
  for (int u = 0; u < spec.m; ++u) {
    if (s.a[u] != 2) continue;
    const int rh = shared ? 0 : u;
    if (s.p_hyd[rh] < spec.phonon_cap_hyd) {
      BasisState t = s;
      t.a[u] = 0;
      ++t.p_hyd[rh];
      const int j = space.index_of(t);
      if (j < 0)
        throw Error("CLOSURE_GAP", "exchange target missing from the enumerated space");
      visit(j, std::sqrt(double(s.p_hyd[rh]) + 1.0), Mode::Hyd);
    }
    const int rd = shared ? 0 : u;
    if (s.p_dist[rd] < spec.phonon_cap_dist) {
      BasisState t = s;
      t.a[u] = 1;
      ++t.p_dist[rd];
      const int j = space.index_of(t);
      if (j < 0)
        throw Error("CLOSURE_GAP", "exchange target missing from the enumerated space");
      visit(j, std::sqrt(double(s.p_dist[rd]) + 1.0), Mode::Dist);
    }
  }
}

}  // namespace

std::vector<std::pair<int, int>> hamiltonian_edges(const StateSpace& space) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < int(space.size()); ++i)
    for_each_exchange(space, i, [&](int j, double, Mode) {
      if (i < j) edges.emplace_back(i, j);
      else edges.emplace_back(j, i);
    });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

double diagonal_energy(const BasisState& s, const ClusterSpec& spec,
                       const ModelParams& params) {
  int n_ph_h = 0, n_ph_d = 0, n_l = 0, n_d = 0;
  for (auto p : s.p_hyd) n_ph_h += p;
  for (auto p : s.p_dist) n_ph_d += p;
  for (auto a : s.a) {
    n_l += a != 0;  // proton excited
    n_d += a != 1;  // proton at the critical point
  }
  return params.hbar * params.omega_hyd * (n_ph_h + n_l) +
         params.hbar * params.omega_dist * (n_ph_d + n_d);
}

HamiltonianBlocks build_hamiltonian(const StateSpace& space,
                                    const BlockPartition& part,
                                    const ModelParams& params) {
  HamiltonianBlocks hb;
  const std::size_t nb = part.num_blocks();
  hb.h.resize(nb);
  hb.evals.resize(nb);
  hb.evecs.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& members = part.blocks[b];
    const int dim = int(members.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (int l = 0; l < dim; ++l) {
      const int i = members[l];
      m(l, l) = diagonal_energy(space.states[i], space.spec, params);
      for_each_exchange(space, i, [&](int j, double boson, Mode mode) {
        const double g = mode == Mode::Hyd ? params.g_hyd : params.g_dist;
        if (part.block_of[j] != int(b))
          throw Error("BLOCK_CROSSING",
                      "Hamiltonian element crosses blocks; partition is inconsistent");
        // Visited once per unordered pair, from the a=2 side.
        m(l, part.local_of[j]) += g * boson;
        m(part.local_of[j], l) += g * boson;
      });
    }
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw Error("NOT_HERMITIAN", "Hamiltonian block " + std::to_string(b) +
                                       " is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    hb.h[b] = std::move(m);
    hb.evals[b] = es.eigenvalues();
    hb.evecs[b] = es.eigenvectors();
  }
  return hb;
}

std::vector<Eigen::MatrixXcd> HamiltonianBlocks::propagators(double dt, double hbar) const {
  std::vector<Eigen::MatrixXcd> u(h.size());
  const std::complex<double> mi(0.0, -1.0);
  for (std::size_t b = 0; b < h.size(); ++b) {
    const Eigen::VectorXcd phases =
        ((mi * dt / hbar) * evals[b].array().cast<std::complex<double>>()).exp();
    u[b] = evecs[b].cast<std::complex<double>>() * phases.asDiagonal() *
           evecs[b].transpose().cast<std::complex<double>>();
  }
  return u;
}

SparseComplexMatrix HamiltonianBlocks::block_sparse(const BlockPartition& part,
                                                    int block) const {
  SparseComplexMatrix m;
  const auto& mat = h[block];
  m.rows = m.cols = int(mat.rows());
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c)
      if (mat(r, c) != 0.0) m.entries.push_back({r, c, {mat(r, c), 0.0}});
  return m;
}

}  // namespace hbqed
