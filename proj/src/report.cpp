#include "hbqed/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hbqed {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string time_series_csv(const TimeSeries& series) {
  std::ostringstream os;
  os << "t";
  for (int k = 0; k <= series.m; ++k) os << ",P" << k;
  os << ",n_hyd,n_dist,trace,min_eig\n";
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    os << fmt(series.times[i]);
    for (int k = 0; k <= series.m; ++k) os << "," << fmt(series.hb[i][k]);
    os << "," << fmt(series.n_hyd[i]) << "," << fmt(series.n_dist[i]) << ","
       << fmt(series.trace[i]) << "," << fmt(series.min_eig[i]) << "\n";
  }
  return os.str();
}

std::string heatmap_csv(const HeatmapData& map) {
  std::ostringstream os;
  os << "mu_hyd,mu_dist";
  for (int k = 0; k <= map.m; ++k) os << ",P" << k;
  os << ",converged\n";
  for (std::size_t i = 0; i < map.mu_hyd.size(); ++i)
    for (std::size_t j = 0; j < map.mu_dist.size(); ++j) {
      os << fmt(map.mu_hyd[i]) << "," << fmt(map.mu_dist[j]);
      for (int k = 0; k <= map.m; ++k)
        os << "," << fmt(map.value[k][i * map.mu_dist.size() + j]);
      os << "," << int(map.converged[i * map.mu_dist.size() + j]) << "\n";
    }
  return os.str();
}

std::string contours_json(const ContourSet& contours) {
  std::ostringstream os;
  os << "[";
  for (std::size_t l = 0; l < contours.levels.size(); ++l) {
    if (l) os << ",";
    os << "\n  {\"level\": " << fmt(contours.levels[l]) << ", \"polylines\": [";
    const auto& polys = contours.polylines[l];
    for (std::size_t p = 0; p < polys.size(); ++p) {
      if (p) os << ",";
      os << "[";
      for (std::size_t v = 0; v < polys[p].size(); ++v) {
        if (v) os << ",";
        os << "[" << fmt(polys[p][v].first) << "," << fmt(polys[p][v].second) << "]";
      }
      os << "]";
    }
    os << "]}";
  }
  os << "\n]\n";
  return os.str();
}

std::string blocks_report(const BlockPartition& part) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "org_dim num_bls max_dim_bl mem_ratio\n%zu %zu %zu %.3f%%\n",
                part.org_dim, part.num_blocks(), part.max_block_dim,
                100.0 * part.memory_ratio);
  return buf;
}

namespace {

constexpr double kW = 640, kH = 420;
constexpr double kMarL = 60, kMarR = 140, kMarT = 24, kMarB = 46;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};

std::string svg_header() {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
     << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
  return os.str();
}

void svg_axes(std::ostringstream& os, double x0, double x1, double y0, double y1,
              const std::string& xlabel, const std::string& ylabel) {
  const double px0 = kMarL, px1 = kW - kMarR, py0 = kH - kMarB, py1 = kMarT;
  os << "<line x1=\"" << px0 << "\" y1=\"" << py0 << "\" x2=\"" << px1 << "\" y2=\"" << py0
     << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << px0 << "\" y1=\"" << py0 << "\" x2=\"" << px0 << "\" y2=\"" << py1
     << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double fx = x0 + (x1 - x0) * tick / 4.0;
    const double fy = y0 + (y1 - y0) * tick / 4.0;
    const double px = px0 + (px1 - px0) * tick / 4.0;
    const double py = py0 + (py1 - py0) * tick / 4.0;
    os << "<text x=\"" << px << "\" y=\"" << py0 + 18
       << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt2(fx) << "</text>\n";
    os << "<text x=\"" << px0 - 8 << "\" y=\"" << py + 4
       << "\" font-size=\"11\" text-anchor=\"end\">" << fmt2(fy) << "</text>\n";
  }
  os << "<text x=\"" << (px0 + px1) / 2 << "\" y=\"" << kH - 10
     << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  os << "<text x=\"16\" y=\"" << (py0 + py1) / 2
     << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << (py0 + py1) / 2 << ")\">" << ylabel << "</text>\n";
}

}  // namespace

std::string render_time_series_svg(const TimeSeries& series) {
  std::ostringstream os;
  os << svg_header();
  const double t0 = 0.0;
  const double t1 = series.times.empty() ? 1.0 : series.times.back();
  svg_axes(os, t0, t1 <= t0 ? t0 + 1 : t1, 0.0, 1.0, "t", "P_k");
  const double px0 = kMarL, px1 = kW - kMarR, py0 = kH - kMarB, py1 = kMarT;
  if (!series.times.empty()) {
    for (int k = 0; k <= series.m; ++k) {
      const char* color = kPalette[k % 7];
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double x = px0 + (px1 - px0) * (series.times[i] - t0) / (t1 - t0 + (t1 == t0));
        const double y = py0 + (py1 - py0) * series.hb[i][k];
        os << fmt2(x) << "," << fmt2(y) << " ";
      }
      os << "\"/>\n";
      os << "<text x=\"" << px1 + 10 << "\" y=\"" << kMarT + 16 * (k + 1)
         << "\" font-size=\"12\" fill=\"" << color << "\">P" << k << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

namespace {

std::string heat_color(double v) {
  // Piecewise-linear blue -> white -> red over [0, 1].
  const double x = std::min(1.0, std::max(0.0, v));
  int r, g, b;
  if (x < 0.5) {
    const double t = x / 0.5;
    r = int(40 + t * (255 - 40));
    g = int(60 + t * (255 - 60));
    b = 255;
  } else {
    const double t = (x - 0.5) / 0.5;
    r = 255;
    g = int(255 - t * (255 - 60));
    b = int(255 - t * (255 - 40));
  }
  char buf[10];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string render_heatmap_svg(const HeatmapData& map, int k, const ContourSet& contours) {
  std::ostringstream os;
  os << svg_header();
  const double x1 = map.mu_hyd.back(), y1 = map.mu_dist.back();
  svg_axes(os, 0.0, x1, 0.0, y1, "mu_hyd", "mu_dist");
  const double px0 = kMarL, px1 = kW - kMarR, py0 = kH - kMarB, py1 = kMarT;
  const int nx = int(map.mu_hyd.size()), ny = int(map.mu_dist.size());
  const double cw = (px1 - px0) / nx, ch = (py0 - py1) / ny;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const double v = map.at(k, i, j);
      os << "<rect x=\"" << fmt2(px0 + i * cw) << "\" y=\"" << fmt2(py0 - (j + 1) * ch)
         << "\" width=\"" << fmt2(cw + 0.5) << "\" height=\"" << fmt2(ch + 0.5)
         << "\" fill=\"" << heat_color(v) << "\"/>\n";
    }
  const char* styles[] = {"#7b2d8b", "#1a7d1a", "#c40000"};
  for (std::size_t l = 0; l < contours.levels.size(); ++l) {
    const char* color = styles[l % 3];
    for (const auto& poly : contours.polylines[l]) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (const auto& [x, y] : poly) {
        const double px = px0 + (px1 - px0) * (x / (x1 > 0 ? x1 : 1)) ;
        const double py = py0 - (py0 - py1) * (y / (y1 > 0 ? y1 : 1));
        os << fmt2(px) << "," << fmt2(py) << " ";
      }
      os << "\"/>\n";
    }
    os << "<text x=\"" << px1 + 10 << "\" y=\"" << kMarT + 16 * (l + 1)
       << "\" font-size=\"12\" fill=\"" << color << "\">" << fmt2(contours.levels[l])
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("WRITE_FAILED", "cannot open " + tmp.string());
    out << content;
    if (!out) throw Error("WRITE_FAILED", "short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace hbqed
