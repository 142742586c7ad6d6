#pragma once

#include <vector>

#include "hbqed/dynamics.hpp"

namespace hbqed {

struct HeatmapData {
  int m = 0;
  std::vector<double> mu_hyd;   // strictly increasing axis values in [0, 1)
  std::vector<double> mu_dist;
  // value[k][i][j] = steady-state P_k at (mu_hyd[i], mu_dist[j]),
  // flattened row-major: value[k][i * mu_dist.size() + j].
  std::vector<std::vector<double>> value;
  std::vector<char> converged;  // per cell, same flattening

  double at(int k, int i, int j) const { return value[k][i * mu_dist.size() + j]; }
};

struct SweepOptions {
  int grid_hyd = 21;
  int grid_dist = 21;
  double mu_max = 0.95;
  int workers = 1;  // cells evaluated concurrently; assembly is by index
};

// Steady-state distribution over an inflow grid. The PumpClosure space and
// Hamiltonian are built once and shared by every cell.
HeatmapData sweep_inflow(const Config& cfg, const SweepOptions& opt);

struct ContourSet {
  std::vector<double> levels;
  // polylines[l] = list of polylines for levels[l]; each polyline is a list
  // of (mu_hyd, mu_dist) vertices.
  std::vector<std::vector<std::vector<std::pair<double, double>>>> polylines;
};

// Marching squares with linear interpolation along cell edges; deterministic
// vertex order (cells scanned row-major, segments chained greedily).
ContourSet extract_contours(const HeatmapData& map, int k, const std::vector<double>& levels);

// Grid-function variant used by the tests and the renderer.
ContourSet extract_contours_grid(const std::vector<double>& xs, const std::vector<double>& ys,
                                 const std::vector<double>& values,  // row-major [i*ny+j]
                                 const std::vector<double>& levels);

}  // namespace hbqed
