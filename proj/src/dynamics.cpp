#include "hbqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hbqed/parallel.hpp"

namespace hbqed {

double BlockDensityMatrix::trace() const {
  double t = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    if (active[b]) t += blocks[b].real().trace();
  return t;
}

double BlockDensityMatrix::hermiticity_error() const {
  double e = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    if (active[b])
      e = std::max(e, (blocks[b] - blocks[b].adjoint()).cwiseAbs().maxCoeff());
  return e;
}

double BlockDensityMatrix::min_eigenvalue() const {
  double mn = 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (!active[b]) continue;
    es.compute(blocks[b], Eigen::EigenvaluesOnly);
    mn = std::min(mn, es.eigenvalues().minCoeff());
  }
  return mn;
}

double BlockDensityMatrix::trace_distance(const BlockDensityMatrix& other) const {
  double d = 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (!active[b] && !other.active[b]) continue;
    es.compute(blocks[b] - other.blocks[b], Eigen::EigenvaluesOnly);
    d += es.eigenvalues().cwiseAbs().sum();
  }
  return 0.5 * d;
}

Evolver::Evolver(const StateSpace& space, const BlockPartition& part,
                 const HamiltonianBlocks& ham, const std::vector<JumpOperator>& jumps,
                 const Config& cfg, int workers)
    : space_(space), part_(part), ham_(ham), jumps_(jumps), cfg_(cfg),
      workers_(std::max(1, workers)) {
  if (!cfg_.validated) cfg_ = validate(cfg_);
  const bool inflow = cfg_.rates.mu_hyd > 0.0 || cfg_.rates.mu_dist > 0.0;
  if (inflow && space_.closure != ClosureMode::PumpClosure)
    throw Error("BLOCK_ROUTING_MISS",
                "inflow rates require a PumpClosure state space");

  propagators_ = ham_.propagators(cfg_.evolve.dt, cfg_.params.hbar);

  const std::size_t nb = part_.num_blocks();
  anticomm_weight_.resize(nb);
  k_class_.resize(nb);
  occ_hyd_.resize(nb);
  occ_dist_.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& members = part_.blocks[b];
    const int dim = int(members.size());
    anticomm_weight_[b] = Eigen::VectorXd::Zero(dim);
    k_class_[b].resize(dim);
    occ_hyd_[b].resize(dim);
    occ_dist_[b].resize(dim);
    for (int l = 0; l < dim; ++l) {
      const BasisState& s = space_.states[members[l]];
      k_class_[b][l] = int(std::count(s.a.begin(), s.a.end(), 0));
      double oh = 0, od = 0;
      for (auto p : s.p_hyd) oh += p;
      for (auto p : s.p_dist) od += p;
      occ_hyd_[b][l] = oh;
      occ_dist_[b][l] = od;
      for (const auto& op : jumps_) {
        const int i = members[l];
        anticomm_weight_[b][l] += op.gamma * op.action.amp[i] * op.action.amp[i];
        if (op.mu > 0.0)
          anticomm_weight_[b][l] += op.mu * op.gamma * op.pump.amp[i] * op.pump.amp[i];
      }
    }
  }

  // Transfers grouped by target block; built in (channel, decay-before-pump,
  // source block) order so the merge is deterministic.
  incoming_.resize(nb);
  for (const auto& op : jumps_) {
    for (int kind = 0; kind < 2; ++kind) {
      if (kind == 1 && op.mu <= 0.0) continue;
      const ChannelAction& act = kind == 0 ? op.action : op.pump;
      std::map<std::pair<int, int>, Transfer> by_pair;  // (source, target) -> transfer
      for (int i = 0; i < int(space_.size()); ++i) {
        if (act.target[i] < 0) continue;
        const int sb = part_.block_of[i];
        const int tb = part_.block_of[act.target[i]];
        Transfer& tr = by_pair[{sb, tb}];
        if (tr.src.empty()) {
          tr.channel = op.id;
          tr.source_block = sb;
          tr.pump = kind == 1;
        }
        tr.src.push_back(part_.local_of[i]);
        tr.dst.push_back(part_.local_of[act.target[i]]);
        tr.amp.push_back(act.amp[i]);
      }
      for (auto& [key, tr] : by_pair) incoming_[key.second].push_back(std::move(tr));
    }
  }

  BasisState init;
  init.p_hyd.assign(space_.num_phonon_registers(), 0);
  init.p_dist.assign(space_.num_phonon_registers(), 0);
  init.a.assign(space_.spec.m, 2);
  initial_index_ = space_.index_of(init);
  if (initial_index_ < 0)
    throw Error("NO_INITIAL_STATE", "all-excited state missing from the space");

  scratch_.blocks.resize(nb);
  scratch_.active.assign(nb, 0);
  for (std::size_t b = 0; b < nb; ++b)
    scratch_.blocks[b].setZero(part_.blocks[b].size(), part_.blocks[b].size());
}

BlockDensityMatrix Evolver::initial_state() const {
  BlockDensityMatrix rho;
  const std::size_t nb = part_.num_blocks();
  rho.blocks.resize(nb);
  rho.active.assign(nb, 0);
  for (std::size_t b = 0; b < nb; ++b)
    rho.blocks[b].setZero(part_.blocks[b].size(), part_.blocks[b].size());
  const int b0 = part_.block_of[initial_index_];
  rho.blocks[b0](part_.local_of[initial_index_], part_.local_of[initial_index_]) = 1.0;
  rho.active[b0] = 1;
  rho.time = 0.0;
  return rho;
}

void Evolver::unitary_step(BlockDensityMatrix& rho) const {
  parallel_for(int(part_.num_blocks()), workers_, [&](int b) {
    if (!rho.active[b] || rho.blocks[b].rows() <= 1) return;
    const Eigen::MatrixXcd& u = propagators_[b];
    scratch_.blocks[b].noalias() = u * rho.blocks[b];
    rho.blocks[b].noalias() = scratch_.blocks[b] * u.adjoint();
  });
}

void Evolver::apply_dissipator(const BlockDensityMatrix& in, BlockDensityMatrix& out,
                               double scale, bool include_identity) const {
  const double hbar = cfg_.params.hbar;
  parallel_for(int(part_.num_blocks()), workers_, [&](int b) {
    const int dim = int(part_.blocks[b].size());
    bool any = false;
    Eigen::MatrixXcd& dst = out.blocks[b];
    if (in.active[b]) {
      any = true;
      const auto& w = anticomm_weight_[b];
      if (include_identity) {
        dst = in.blocks[b];
        for (int r = 0; r < dim; ++r)
          for (int c = 0; c < dim; ++c)
            dst(r, c) -= scale / hbar * 0.5 * (w[r] + w[c]) * in.blocks[b](r, c);
      } else {
        for (int r = 0; r < dim; ++r)
          for (int c = 0; c < dim; ++c)
            dst(r, c) = -scale / hbar * 0.5 * (w[r] + w[c]) * in.blocks[b](r, c);
      }
    } else {
      dst.setZero();
    }
    for (const Transfer& tr : incoming_[b]) {
      if (!in.active[tr.source_block]) continue;
      const JumpOperator& op = jumps_[tr.channel];
      const double rate = (tr.pump ? op.mu * op.gamma : op.gamma) * scale / hbar;
      const Eigen::MatrixXcd& src = in.blocks[tr.source_block];
      const std::size_t k = tr.src.size();
      if (op.edge_resolved) {
        // Each graph edge is its own channel: populations hop, no coherence
        // is carried along.
        for (std::size_t e = 0; e < k; ++e)
          dst(tr.dst[e], tr.dst[e]) += rate * tr.amp[e] * tr.amp[e] * src(tr.src[e], tr.src[e]);
      } else {
        for (std::size_t e = 0; e < k; ++e)
          for (std::size_t f = 0; f < k; ++f)
            dst(tr.dst[e], tr.dst[f]) +=
                rate * tr.amp[e] * tr.amp[f] * src(tr.src[e], tr.src[f]);
      }
      any = true;
    }
    out.active[b] = any ? 1 : 0;
  });
}

void Evolver::dissipative_step(BlockDensityMatrix& rho) const {
  std::swap(scratch_.blocks, rho.blocks);
  scratch_.active = rho.active;
  // scratch_ now holds the input; write the stepped state into rho.
  apply_dissipator(scratch_, rho, cfg_.evolve.dt, /*include_identity=*/true);
}

void Evolver::step(BlockDensityMatrix& rho) const {
  unitary_step(rho);
  dissipative_step(rho);
}

void Evolver::evolve(BlockDensityMatrix& rho, double t_end, TimeSeries* series) const {
  const double dt = cfg_.evolve.dt;
  const int per_probe = std::max(1, int(std::llround(cfg_.evolve.probe_interval / dt)));
  auto sample = [&] {
    if (!series) return;
    series->times.push_back(rho.time);
    series->hb.push_back(hb_distribution(rho));
    series->n_hyd.push_back(phonon_expectation(rho, Mode::Hyd));
    series->n_dist.push_back(phonon_expectation(rho, Mode::Dist));
    series->trace.push_back(rho.trace());
    const double mn = rho.min_eigenvalue();
    series->min_eig.push_back(mn);
    if (mn < -cfg_.evolve.positivity_tol)
      throw Error("POSITIVITY_VIOLATION",
                  "minimum eigenvalue " + std::to_string(mn) + " at t=" +
                      std::to_string(rho.time) + "; reduce dt");
  };
  if (series) {
    series->m = space_.spec.m;
    if (series->times.empty()) sample();
  }
  const long long base = std::llround(rho.time / dt);
  const long long steps = std::llround(t_end / dt) - base;
  for (long long k = 1; k <= steps; ++k) {
    step(rho);
    rho.time = (base + k) * dt;
    if (k % per_probe == 0 || k == steps) sample();
  }
}

TimeSeries Evolver::evolve() const {
  TimeSeries series;
  BlockDensityMatrix rho = initial_state();
  evolve(rho, cfg_.evolve.t_max, &series);
  return series;
}

SteadyResult Evolver::steady_state() const {
  if (cfg_.rates.gamma_hyd <= 0.0 && cfg_.rates.gamma_dist <= 0.0)
    throw Error("NO_DISSIPATION", "steady_state requires at least one gamma > 0");
  const double dt = cfg_.evolve.dt;
  const int per_probe = std::max(1, int(std::llround(cfg_.evolve.probe_interval / dt)));
  const long long steps = std::llround(cfg_.evolve.t_max / dt);

  BlockDensityMatrix rho = initial_state();
  BlockDensityMatrix prev = rho;
  SteadyResult out;
  for (long long k = 1; k <= steps; ++k) {
    step(rho);
    rho.time = k * dt;
    if (k % per_probe == 0) {
      const double d = rho.trace_distance(prev);
      out.probe_distance = d;
      if (d < cfg_.evolve.steady_tol) {
        out.converged = true;
        break;
      }
      prev = rho;
    }
  }
  out.distribution = hb_distribution(rho);
  out.final_time = rho.time;
  return out;
}

std::vector<double> Evolver::hb_distribution(const BlockDensityMatrix& rho) const {
  std::vector<double> p(space_.spec.m + 1, 0.0);
  for (std::size_t b = 0; b < part_.num_blocks(); ++b) {
    if (!rho.active[b]) continue;
    const int dim = int(part_.blocks[b].size());
    for (int l = 0; l < dim; ++l) p[k_class_[b][l]] += rho.blocks[b](l, l).real();
  }
  return p;
}

double Evolver::phonon_expectation(const BlockDensityMatrix& rho, Mode mode) const {
  const auto& occ = mode == Mode::Hyd ? occ_hyd_ : occ_dist_;
  double v = 0.0;
  for (std::size_t b = 0; b < part_.num_blocks(); ++b) {
    if (!rho.active[b]) continue;
    const int dim = int(part_.blocks[b].size());
    for (int l = 0; l < dim; ++l) v += occ[b][l] * rho.blocks[b](l, l).real();
  }
  return v;
}

BlockDensityMatrix Evolver::lindblad_derivative(const BlockDensityMatrix& rho) const {
  BlockDensityMatrix out;
  out.blocks.resize(part_.num_blocks());
  out.active.assign(part_.num_blocks(), 0);
  for (std::size_t b = 0; b < part_.num_blocks(); ++b)
    out.blocks[b].setZero(part_.blocks[b].size(), part_.blocks[b].size());
  apply_dissipator(rho, out, 1.0, /*include_identity=*/false);
  const std::complex<double> mi_over_hbar(0.0, -1.0 / cfg_.params.hbar);
  for (std::size_t b = 0; b < part_.num_blocks(); ++b) {
    if (!rho.active[b]) continue;
    const Eigen::MatrixXcd h = ham_.h[b].cast<std::complex<double>>();
    out.blocks[b] += mi_over_hbar * (h * rho.blocks[b] - rho.blocks[b] * h);
    out.active[b] = 1;
  }
  return out;
}

BlockDensityMatrix initial_state(const StateSpace& space, const BlockPartition& part) {
  BasisState init;
  init.p_hyd.assign(space.num_phonon_registers(), 0);
  init.p_dist.assign(space.num_phonon_registers(), 0);
  init.a.assign(space.spec.m, 2);
  const int idx = space.index_of(init);
  if (idx < 0) throw Error("NO_INITIAL_STATE", "all-excited state missing from the space");
  BlockDensityMatrix rho;
  rho.blocks.resize(part.num_blocks());
  rho.active.assign(part.num_blocks(), 0);
  for (std::size_t b = 0; b < part.num_blocks(); ++b)
    rho.blocks[b].setZero(part.blocks[b].size(), part.blocks[b].size());
  rho.blocks[part.block_of[idx]](part.local_of[idx], part.local_of[idx]) = 1.0;
  rho.active[part.block_of[idx]] = 1;
  return rho;
}

}  // namespace hbqed
