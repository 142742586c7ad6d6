#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace hbqed::oracle {

namespace {

// Raw state flattened to a vector<int>: [p_hyd regs..., p_dist regs...,
// l units..., d units...].
using Raw = std::vector<int>;

struct RawLayout {
  int m, nreg, cap_h, cap_d;
  int ph(int r) const { return r; }
  int pd(int r) const { return nreg + r; }
  int l(int u) const { return 2 * nreg + u; }
  int d(int u) const { return 2 * nreg + m + u; }
};

std::vector<Raw> raw_neighbors(const Raw& s, const RawLayout& lay, bool pump) {
  std::vector<Raw> out;
  for (int u = 0; u < lay.m; ++u) {
    const int rh = lay.nreg == 1 ? 0 : u;
    const int rd = rh;
    if (s[lay.l(u)] == 1 && s[lay.d(u)] == 1 && s[lay.ph(rh)] < lay.cap_h) {
      Raw t = s;
      t[lay.l(u)] = 0;
      ++t[lay.ph(rh)];
      out.push_back(t);
    }
    if (s[lay.l(u)] == 0 && s[lay.d(u)] == 1 && s[lay.ph(rh)] > 0) {
      Raw t = s;
      t[lay.l(u)] = 1;
      --t[lay.ph(rh)];
      out.push_back(t);
    }
    if (s[lay.l(u)] == 1 && s[lay.d(u)] == 1 && s[lay.pd(rd)] < lay.cap_d) {
      Raw t = s;
      t[lay.d(u)] = 0;
      ++t[lay.pd(rd)];
      out.push_back(t);
    }
    if (s[lay.l(u)] == 1 && s[lay.d(u)] == 0 && s[lay.pd(rd)] > 0) {
      Raw t = s;
      t[lay.d(u)] = 1;
      --t[lay.pd(rd)];
      out.push_back(t);
    }
  }
  for (int r = 0; r < lay.nreg; ++r) {
    if (s[lay.ph(r)] > 0) {
      Raw t = s;
      --t[lay.ph(r)];
      out.push_back(t);
    }
    if (s[lay.pd(r)] > 0) {
      Raw t = s;
      --t[lay.pd(r)];
      out.push_back(t);
    }
    if (pump) {
      if (s[lay.ph(r)] < lay.cap_h) {
        Raw t = s;
        ++t[lay.ph(r)];
        out.push_back(t);
      }
      if (s[lay.pd(r)] < lay.cap_d) {
        Raw t = s;
        ++t[lay.pd(r)];
        out.push_back(t);
      }
    }
  }
  return out;
}

std::set<Raw> raw_closure(int m, Coupling coupling, int cap_h, int cap_d, bool pump) {
  const int nreg = coupling == Coupling::Coherent ? 1 : m;
  RawLayout lay{m, nreg, cap_h, cap_d};
  Raw init(2 * nreg + 2 * m, 0);
  for (int u = 0; u < m; ++u) init[lay.l(u)] = init[lay.d(u)] = 1;
  std::set<Raw> seen{init};
  std::deque<Raw> queue{init};
  while (!queue.empty()) {
    Raw s = queue.front();
    queue.pop_front();
    for (auto& t : raw_neighbors(s, lay, pump))
      if (seen.insert(t).second) queue.push_back(t);
  }
  return seen;
}

}  // namespace

std::size_t closure_count(int m, Coupling coupling, int cap_h, int cap_d, bool pump) {
  return raw_closure(m, coupling, cap_h, cap_d, pump).size();
}

DenseModel::DenseModel(int m, Coupling coupling, int cap_h, int cap_d, bool pump,
                       const ModelParams& params, const RateConfig& rates)
    : m_(m), coupling_(coupling), params_(params), rates_(rates) {
  const int nreg = coupling == Coupling::Coherent ? 1 : m;
  RawLayout lay{m, nreg, cap_h, cap_d};
  for (const Raw& raw : raw_closure(m, coupling, cap_h, cap_d, pump)) {
    DenseState s;
    s.p_hyd.assign(raw.begin(), raw.begin() + nreg);
    s.p_dist.assign(raw.begin() + nreg, raw.begin() + 2 * nreg);
    s.a.resize(m);
    for (int u = 0; u < m; ++u) {
      const int l = raw[lay.l(u)], d = raw[lay.d(u)];
      s.a[u] = (l == 0) ? 0 : (d == 0 ? 1 : 2);
    }
    states_.push_back(std::move(s));
  }
  std::sort(states_.begin(), states_.end());
  std::map<DenseState, int> index;
  for (std::size_t i = 0; i < states_.size(); ++i) index[states_[i]] = int(i);

  const int n = int(states_.size());
  h_ = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const DenseState& s = states_[i];
    double e = 0.0;
    for (int r = 0; r < nreg; ++r)
      e += params.hbar * (params.omega_hyd * s.p_hyd[r] + params.omega_dist * s.p_dist[r]);
    for (int u = 0; u < m; ++u) {
      if (s.a[u] != 0) e += params.hbar * params.omega_hyd;  // l = 1
      if (s.a[u] != 1) e += params.hbar * params.omega_dist; // d = 1
    }
    h_(i, i) = e;
    for (int u = 0; u < m; ++u) {
      if (s.a[u] != 2) continue;
      const int rh = nreg == 1 ? 0 : u;
      if (s.p_hyd[rh] < cap_h) {
        DenseState t = s;
        t.a[u] = 0;
        ++t.p_hyd[rh];
        const int j = index.at(t);
        const double v = params.g_hyd * std::sqrt(double(s.p_hyd[rh]) + 1.0);
        h_(i, j) += v;
        h_(j, i) += v;
      }
      if (s.p_dist[rh] < cap_d) {
        DenseState t = s;
        t.a[u] = 1;
        ++t.p_dist[rh];
        const int j = index.at(t);
        const double v = params.g_dist * std::sqrt(double(s.p_dist[rh]) + 1.0);
        h_(i, j) += v;
        h_(j, i) += v;
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h_);
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();

  for (int r = 0; r < nreg; ++r) {
    for (int mode = 0; mode < 2; ++mode) {
      Channel ch;
      ch.gamma = mode == 0 ? rates.gamma_hyd : rates.gamma_dist;
      ch.mu = mode == 0 ? rates.mu_hyd : rates.mu_dist;
      ch.edge_resolved = coupling == Coupling::Coherent;
      ch.a = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        DenseState t = states_[i];
        auto& p = mode == 0 ? t.p_hyd : t.p_dist;
        if (p[r] == 0) continue;
        const double amp = std::sqrt(double(p[r]));
        --p[r];
        auto it = index.find(t);
        if (it != index.end()) ch.a(it->second, i) = amp;
      }
      channels_.push_back(std::move(ch));
    }
  }
}

Eigen::MatrixXcd DenseModel::initial() const {
  const int n = int(states_.size());
  DenseState init;
  const int nreg = coupling_ == Coupling::Coherent ? 1 : m_;
  init.p_hyd.assign(nreg, 0);
  init.p_dist.assign(nreg, 0);
  init.a.assign(m_, 2);
  const auto it = std::lower_bound(states_.begin(), states_.end(), init);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  const int i = int(it - states_.begin());
  rho(i, i) = 1.0;
  return rho;
}

void DenseModel::step(Eigen::MatrixXcd& rho, double dt) const {
  const int n = int(states_.size());
  if (cached_dt_ != dt) {
    const std::complex<double> mi(0.0, -1.0);
    Eigen::VectorXcd phases =
        ((mi * dt / params_.hbar) * evals_.array().cast<std::complex<double>>()).exp();
    u_ = evecs_.cast<std::complex<double>>() * phases.asDiagonal() *
         evecs_.transpose().cast<std::complex<double>>();
    cached_dt_ = dt;
  }
  rho = u_ * rho * u_.adjoint();

  Eigen::MatrixXcd delta = Eigen::MatrixXcd::Zero(n, n);
  for (const Channel& ch : channels_) {
    const Eigen::MatrixXd at = ch.a.transpose();
    if (ch.edge_resolved) {
      // Each nonzero entry of the annihilation map is its own jump operator.
      for (int src = 0; src < n; ++src)
        for (int dst = 0; dst < n; ++dst) {
          const double amp = ch.a(dst, src);
          if (amp == 0.0) continue;
          delta(dst, dst) += ch.gamma * amp * amp * rho(src, src);
          if (ch.mu > 0.0)
            delta(src, src) += ch.mu * ch.gamma * amp * amp * rho(dst, dst);
        }
      Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
      for (int src = 0; src < n; ++src)
        for (int dst = 0; dst < n; ++dst) {
          const double amp = ch.a(dst, src);
          if (amp == 0.0) continue;
          w(src) += ch.gamma * amp * amp;
          if (ch.mu > 0.0) w(dst) += ch.mu * ch.gamma * amp * amp;
        }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) delta(i, j) -= 0.5 * (w(i) + w(j)) * rho(i, j);
    } else {
      const Eigen::MatrixXd ada = at * ch.a;
      delta += ch.gamma * (ch.a * rho * at - 0.5 * (rho * ada + ada * rho));
      if (ch.mu > 0.0) {
        const Eigen::MatrixXd aad = ch.a * at;
        delta += ch.mu * ch.gamma * (at * rho * ch.a - 0.5 * (rho * aad + aad * rho));
      }
    }
  }
  rho += dt / params_.hbar * delta;
}

std::vector<double> DenseModel::hb_distribution(const Eigen::MatrixXcd& rho) const {
  std::vector<double> p(m_ + 1, 0.0);
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const int k = int(std::count(states_[i].a.begin(), states_[i].a.end(), 0));
    p[k] += rho(int(i), int(i)).real();
  }
  return p;
}

int float_rank(Eigen::MatrixXd a, double tol) {
  const int rows = int(a.rows()), cols = int(a.cols());
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    double best = tol;
    for (int r = rank; r < rows; ++r)
      if (std::abs(a(r, c)) > best) {
        best = std::abs(a(r, c));
        piv = r;
      }
    if (piv < 0) continue;
    a.row(piv).swap(a.row(rank));
    a.row(rank) /= a(rank, c);
    for (int r = 0; r < rows; ++r)
      if (r != rank && std::abs(a(r, c)) > 0) a.row(r) -= a(r, c) * a.row(rank);
    ++rank;
  }
  return rank;
}

}  // namespace hbqed::oracle
