#pragma once

#include <string>

#include "hbqed/analysis.hpp"
#include "hbqed/basis.hpp"
#include "hbqed/dynamics.hpp"

namespace hbqed {

// All writers are deterministic: fixed formatting, no timestamps.

std::string time_series_csv(const TimeSeries& series);
std::string heatmap_csv(const HeatmapData& map);
std::string contours_json(const ContourSet& contours);

// Table row for the block-decomposition report: org_dim, num_bls,
// max_dim_bl, memory ratio (percent, 3 decimals).
std::string blocks_report(const BlockPartition& part);

// Self-contained SVG documents.
std::string render_time_series_svg(const TimeSeries& series);
std::string render_heatmap_svg(const HeatmapData& map, int k, const ContourSet& contours);

// Write-then-rename so readers never observe a partial file.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace hbqed
