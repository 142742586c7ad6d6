#include "hbqed/basis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

namespace hbqed {

std::string BasisState::label() const {
  std::ostringstream os;
  os << "p=(";
  for (std::size_t i = 0; i < p_hyd.size(); ++i)
    os << (i ? "," : "") << int(p_hyd[i]);
  os << ";";
  for (std::size_t i = 0; i < p_dist.size(); ++i)
    os << (i ? "," : "") << int(p_dist[i]);
  os << ") a=";
  for (auto x : a) os << int(x);
  return os.str();
}

std::uint64_t StateSpace::encode(const BasisState& s) const {
  const std::uint64_t rad_h = spec.phonon_cap_hyd + 1;
  const std::uint64_t rad_d = spec.phonon_cap_dist + 1;
  std::uint64_t key = 0;
  for (auto x : s.p_hyd) key = key * rad_h + x;
  for (auto x : s.p_dist) key = key * rad_d + x;
  for (auto x : s.a) key = key * 3 + x;
  return key;
}

int StateSpace::index_of(const BasisState& s) const {
  auto it = index.find(encode(s));
  return it == index.end() ? -1 : it->second;
}

namespace {

// Raw registers during closure: per-unit l (proton level) and d (displacement),
// with the level encoding 0=(l0,d1), 1=(l1,d0), 2=(l1,d1) applied only after
// the reachable set is known.
struct RawState {
  std::vector<std::uint8_t> p_hyd, p_dist, l, d;
  bool operator==(const RawState&) const = default;
};

struct RawKey {
  std::uint64_t operator()(const RawState& s) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint8_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    for (auto v : s.p_hyd) mix(v);
    for (auto v : s.p_dist) mix(v);
    for (auto v : s.l) mix(v);
    for (auto v : s.d) mix(v);
    return h;
  }
};

// Transitions of the lambda-type unit: the proton relaxes (l: 1 -> 0) while
// held at the critical point (d = 1), emitting one hyd-mode quantum; the
// proton tunnels away (d: 1 -> 0) while excited (l = 1), emitting one
// dist-mode quantum. Reverse moves absorb a quantum.
template <typename Fn>
void for_each_neighbor(const RawState& s, const ClusterSpec& spec, ClosureMode closure, Fn&& visit) {
  const int m = spec.m;
  const bool shared = spec.coupling == Coupling::Coherent;
  const int cap_h = spec.phonon_cap_hyd;
  const int cap_d = spec.phonon_cap_dist;
  for (int u = 0; u < m; ++u) {
    const int rh = shared ? 0 : u;
    const int rd = shared ? 0 : u;
    if (s.l[u] == 1 && s.d[u] == 1 && s.p_hyd[rh] < cap_h) {
      RawState t = s;
      t.l[u] = 0;
      ++t.p_hyd[rh];
      visit(t);
    }
    if (s.l[u] == 0 && s.d[u] == 1 && s.p_hyd[rh] > 0) {
      RawState t = s;
      t.l[u] = 1;
      --t.p_hyd[rh];
      visit(t);
    }
    if (s.l[u] == 1 && s.d[u] == 1 && s.p_dist[rd] < cap_d) {
      RawState t = s;
      t.d[u] = 0;
      ++t.p_dist[rd];
      visit(t);
    }
    if (s.l[u] == 1 && s.d[u] == 0 && s.p_dist[rd] > 0) {
      RawState t = s;
      t.d[u] = 1;
      --t.p_dist[rd];
      visit(t);
    }
  }
  const int nreg = shared ? 1 : m;
  for (int r = 0; r < nreg; ++r) {
    if (s.p_hyd[r] > 0) {
      RawState t = s;
      --t.p_hyd[r];
      visit(t);
    }
    if (s.p_dist[r] > 0) {
      RawState t = s;
      --t.p_dist[r];
      visit(t);
    }
    if (closure == ClosureMode::PumpClosure) {
      if (s.p_hyd[r] < cap_h) {
        RawState t = s;
        ++t.p_hyd[r];
        visit(t);
      }
      if (s.p_dist[r] < cap_d) {
        RawState t = s;
        ++t.p_dist[r];
        visit(t);
      }
    }
  }
}

BasisState compress(const RawState& s) {
  BasisState out;
  out.p_hyd = s.p_hyd;
  out.p_dist = s.p_dist;
  out.a.resize(s.l.size());
  for (std::size_t u = 0; u < s.l.size(); ++u) {
    if (s.l[u] == 0 && s.d[u] == 1)
      out.a[u] = 0;
    else if (s.l[u] == 1 && s.d[u] == 0)
      out.a[u] = 1;
    else if (s.l[u] == 1 && s.d[u] == 1)
      out.a[u] = 2;
    else
      throw Error("UNREACHABLE_CONFIG",
                  "closure produced the (l=0,d=0) register configuration");
  }
  return out;
}

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int x, int y) { parent[find(x)] = find(y); }
};

}  // namespace

StateSpace enumerate_states(const ClusterSpec& spec, ClosureMode closure) {
  if (spec.phonon_cap_hyd < 0 || spec.phonon_cap_dist < 0)
    throw Error("SPEC_NOT_VALIDATED", "enumerate_states requires a validated spec (caps filled)");

  const bool shared = spec.coupling == Coupling::Coherent;
  const int nreg = shared ? 1 : spec.m;
  RawState init;
  init.p_hyd.assign(nreg, 0);
  init.p_dist.assign(nreg, 0);
  init.l.assign(spec.m, 1);
  init.d.assign(spec.m, 1);

  std::unordered_map<RawState, int, RawKey> seen;
  std::deque<RawState> queue{init};
  seen.emplace(init, 0);
  while (!queue.empty()) {
    RawState s = std::move(queue.front());
    queue.pop_front();
    for_each_neighbor(s, spec, closure, [&](const RawState& t) {
      if (seen.emplace(t, int(seen.size())).second) queue.push_back(t);
    });
  }

  StateSpace space;
  space.spec = spec;
  space.closure = closure;
  space.states.reserve(seen.size());
  for (const auto& [raw, id] : seen) space.states.push_back(compress(raw));
  std::sort(space.states.begin(), space.states.end(),
            [](const BasisState& x, const BasisState& y) {
              if (x.p_hyd != y.p_hyd) return x.p_hyd < y.p_hyd;
              if (x.p_dist != y.p_dist) return x.p_dist < y.p_dist;
              return x.a < y.a;
            });
  space.index.reserve(space.states.size());
  for (std::size_t i = 0; i < space.states.size(); ++i) {
    if (!space.index.emplace(space.encode(space.states[i]), int(i)).second)
      throw Error("DUPLICATE_STATE", "state enumeration produced a duplicate ket");
  }
  return space;
}

namespace {

// Per-unit component id. The unit Hamiltonian conserves the quanta pair
// (p1 + l(a), p2 + d(a)) with l = 0,1,1 and d = 1,0,1 for a = 0,1,2, and each
// equal-pair class is H-connected (its members form the path a=0 - a=2 - a=1),
// so the pair labels the component exactly.
int unit_component(int p1, int p2, int a, int cap_dist) {
  const int e1 = p1 + (a != 0 ? 1 : 0);
  const int e2 = p2 + (a != 1 ? 1 : 0);
  return e1 * (cap_dist + 2) + e2;
}

}  // namespace

std::vector<int> sector_charge(const BasisState& s, const ClusterSpec& spec) {
  if (spec.coupling == Coupling::Coherent) {
    int n0 = 0, n1 = 0;
    for (auto x : s.a) {
      n0 += x == 0;
      n1 += x == 1;
    }
    return {n0 - int(s.p_hyd[0]), n1 - int(s.p_dist[0])};
  }
  std::vector<int> ids(spec.m);
  for (int u = 0; u < spec.m; ++u)
    ids[u] = unit_component(s.p_hyd[u], s.p_dist[u], s.a[u], spec.phonon_cap_dist);
  return ids;
}

std::string sector_label(const BasisState& s, const ClusterSpec& spec) {
  const auto c = sector_charge(s, spec);
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ")";
  return os.str();
}

BlockPartition partition_blocks(const StateSpace& space,
                                const std::vector<std::pair<int, int>>& h_edges,
                                const std::vector<ChannelAction>& channel_actions) {
  const int n = int(space.size());
  DisjointSet dsu(n);
  for (const auto& [i, j] : h_edges) dsu.unite(i, j);

  BlockPartition part;
  part.org_dim = space.size();
  part.block_of.assign(n, -1);
  part.local_of.assign(n, -1);

  std::map<int, int> root_to_block;
  for (int i = 0; i < n; ++i) {
    const int r = dsu.find(i);
    auto [it, fresh] = root_to_block.emplace(r, int(part.blocks.size()));
    if (fresh) part.blocks.emplace_back();
    part.block_of[i] = it->second;
    part.blocks[it->second].push_back(i);
  }
  // Deterministic block order: by smallest member state index.
  std::vector<int> order(part.blocks.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return part.blocks[x].front() < part.blocks[y].front();
  });
  std::vector<std::vector<int>> blocks(part.blocks.size());
  std::vector<int> new_id(part.blocks.size());
  for (std::size_t b = 0; b < order.size(); ++b) {
    blocks[b] = std::move(part.blocks[order[b]]);
    new_id[order[b]] = int(b);
  }
  part.blocks = std::move(blocks);
  for (int i = 0; i < n; ++i) part.block_of[i] = new_id[part.block_of[i]];
  for (const auto& blk : part.blocks)
    for (std::size_t l = 0; l < blk.size(); ++l) part.local_of[blk[l]] = int(l);

  part.sector_labels.resize(part.blocks.size());
  for (std::size_t b = 0; b < part.blocks.size(); ++b)
    part.sector_labels[b] = sector_label(space.states[part.blocks[b].front()], space.spec);

  part.routing.assign(channel_actions.size(), std::vector<int>(part.blocks.size(), -1));
  for (std::size_t c = 0; c < channel_actions.size(); ++c) {
    const auto& act = channel_actions[c];
    for (int i = 0; i < n; ++i) {
      if (act.target[i] < 0) continue;
      const int src_block = part.block_of[i];
      const int dst_block = part.block_of[act.target[i]];
      int& slot = part.routing[c][src_block];
      if (slot == -1)
        slot = dst_block;
      else if (slot != dst_block)
        throw Error("ROUTING_AMBIGUOUS",
                    "channel " + std::to_string(c) + " maps block " +
                        std::to_string(src_block) + " into two distinct blocks");
    }
  }

  std::size_t ssq = 0;
  for (const auto& blk : part.blocks) {
    part.max_block_dim = std::max(part.max_block_dim, blk.size());
    ssq += blk.size() * blk.size();
  }
  part.memory_ratio = double(ssq) / (double(part.org_dim) * double(part.org_dim));
  return part;
}

}  // namespace hbqed
