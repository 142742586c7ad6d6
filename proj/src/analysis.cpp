#include "hbqed/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "hbqed/parallel.hpp"

namespace hbqed {

HeatmapData sweep_inflow(const Config& cfg_in, const SweepOptions& opt) {
  Config cfg = cfg_in.validated ? cfg_in : validate(cfg_in);
  if (opt.grid_hyd < 2 || opt.grid_dist < 2)
    throw Error("GRID_TOO_SMALL", "sweep grid needs at least 2 points per axis");
  if (opt.mu_max <= 0.0 || opt.mu_max >= 1.0)
    throw Error("MU_OUT_OF_RANGE", "sweep mu_max must lie in (0, 1)");

  const StateSpace space = enumerate_states(cfg.spec, ClosureMode::PumpClosure);
  const auto h_edges = hamiltonian_edges(space);
  // Partition is rate-independent; build it from unit-rate channels.
  RateConfig probe_rates = cfg.rates;
  probe_rates.mu_hyd = probe_rates.mu_dist = 0.5;
  const auto probe_ops = build_jump_operators(space, probe_rates);
  std::vector<ChannelAction> actions;
  for (const auto& op : probe_ops) actions.push_back(op.action);
  const BlockPartition part = partition_blocks(space, h_edges, actions);
  const HamiltonianBlocks ham = build_hamiltonian(space, part, cfg.params);

  HeatmapData map;
  map.m = cfg.spec.m;
  map.mu_hyd.resize(opt.grid_hyd);
  map.mu_dist.resize(opt.grid_dist);
  for (int i = 0; i < opt.grid_hyd; ++i)
    map.mu_hyd[i] = opt.mu_max * i / (opt.grid_hyd - 1);
  for (int j = 0; j < opt.grid_dist; ++j)
    map.mu_dist[j] = opt.mu_max * j / (opt.grid_dist - 1);

  const int cells = opt.grid_hyd * opt.grid_dist;
  map.value.assign(cfg.spec.m + 1, std::vector<double>(cells, 0.0));
  map.converged.assign(cells, 0);

  parallel_for(cells, opt.workers, [&](int cell) {
    const int i = cell / opt.grid_dist;
    const int j = cell % opt.grid_dist;
    Config cell_cfg = cfg;
    cell_cfg.rates.mu_hyd = map.mu_hyd[i];
    cell_cfg.rates.mu_dist = map.mu_dist[j];
    const auto ops = build_jump_operators(space, cell_cfg.rates);
    Evolver evolver(space, part, ham, ops, cell_cfg, /*workers=*/1);
    const SteadyResult res = evolver.steady_state();
    for (int k = 0; k <= cfg.spec.m; ++k) map.value[k][cell] = res.distribution[k];
    map.converged[cell] = res.converged ? 1 : 0;
  });
  return map;
}

namespace {

struct Segment {
  double x0, y0, x1, y1;
};

double lerp(double a, double b, double va, double vb, double level) {
  const double t = (level - va) / (vb - va);
  return a + t * (b - a);
}

std::vector<std::vector<std::pair<double, double>>> chain_segments(std::vector<Segment> segs) {
  std::vector<std::vector<std::pair<double, double>>> polys;
  const double eps = 1e-12;
  auto near = [&](const std::pair<double, double>& a, const std::pair<double, double>& b) {
    return std::abs(a.first - b.first) <= eps && std::abs(a.second - b.second) <= eps;
  };
  std::vector<char> used(segs.size(), 0);
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (used[s]) continue;
    used[s] = 1;
    std::vector<std::pair<double, double>> poly{{segs[s].x0, segs[s].y0},
                                                {segs[s].x1, segs[s].y1}};
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t t = 0; t < segs.size(); ++t) {
        if (used[t]) continue;
        const std::pair<double, double> a{segs[t].x0, segs[t].y0};
        const std::pair<double, double> b{segs[t].x1, segs[t].y1};
        if (near(poly.back(), a)) {
          poly.push_back(b);
        } else if (near(poly.back(), b)) {
          poly.push_back(a);
        } else if (near(poly.front(), a)) {
          poly.insert(poly.begin(), b);
        } else if (near(poly.front(), b)) {
          poly.insert(poly.begin(), a);
        } else {
          continue;
        }
        used[t] = 1;
        grew = true;
      }
    }
    polys.push_back(std::move(poly));
  }
  return polys;
}

}  // namespace

ContourSet extract_contours_grid(const std::vector<double>& xs, const std::vector<double>& ys,
                                 const std::vector<double>& values,
                                 const std::vector<double>& levels) {
  const int nx = int(xs.size());
  const int ny = int(ys.size());
  auto v = [&](int i, int j) { return values[i * ny + j]; };

  ContourSet out;
  out.levels = levels;
  out.polylines.resize(levels.size());
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const double level = levels[li];
    std::vector<Segment> segs;
    for (int i = 0; i + 1 < nx; ++i) {
      for (int j = 0; j + 1 < ny; ++j) {
        // Corner values; corners on the level count as above.
        const double c00 = v(i, j), c01 = v(i, j + 1), c10 = v(i + 1, j), c11 = v(i + 1, j + 1);
        int mask = 0;
        if (c00 >= level) mask |= 1;
        if (c01 >= level) mask |= 2;
        if (c11 >= level) mask |= 4;
        if (c10 >= level) mask |= 8;
        if (mask == 0 || mask == 15) continue;
        // Edge crossings: bottom (y fixed at ys[j])? axes: x = mu_hyd rows,
        // y = mu_dist columns. Edges of the cell in (x, y) coordinates.
        std::vector<std::pair<double, double>> pts;
        auto add = [&](double x, double y) { pts.emplace_back(x, y); };
        if ((c00 >= level) != (c01 >= level))
          add(xs[i], lerp(ys[j], ys[j + 1], c00, c01, level));
        if ((c10 >= level) != (c11 >= level))
          add(xs[i + 1], lerp(ys[j], ys[j + 1], c10, c11, level));
        if ((c00 >= level) != (c10 >= level))
          add(lerp(xs[i], xs[i + 1], c00, c10, level), ys[j]);
        if ((c01 >= level) != (c11 >= level))
          add(lerp(xs[i], xs[i + 1], c01, c11, level), ys[j + 1]);
        if (pts.size() == 2) {
          segs.push_back({pts[0].first, pts[0].second, pts[1].first, pts[1].second});
        } else if (pts.size() == 4) {
          // Saddle: disambiguate with the cell-center average.
          const double center = 0.25 * (c00 + c01 + c10 + c11);
          // pts order: left, right, bottom, top.
          if ((center >= level) == (c00 >= level)) {
            segs.push_back({pts[0].first, pts[0].second, pts[3].first, pts[3].second});
            segs.push_back({pts[1].first, pts[1].second, pts[2].first, pts[2].second});
          } else {
            segs.push_back({pts[0].first, pts[0].second, pts[2].first, pts[2].second});
            segs.push_back({pts[1].first, pts[1].second, pts[3].first, pts[3].second});
          }
        }
      }
    }
    out.polylines[li] = chain_segments(std::move(segs));
  }
  return out;
}

ContourSet extract_contours(const HeatmapData& map, int k, const std::vector<double>& levels) {
  if (k < 0 || k > map.m) throw Error("K_OUT_OF_RANGE", "contour target class out of range");
  for (double level : levels)
    if (level <= 0.0 || level >= 1.0)
      throw Error("LEVEL_OUT_OF_RANGE", "contour levels must lie in (0, 1)");
  return extract_contours_grid(map.mu_hyd, map.mu_dist, map.value[k], levels);
}

}  // namespace hbqed
