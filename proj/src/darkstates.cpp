#include "hbqed/darkstates.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"

namespace hbqed {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

int string_code(const std::vector<std::uint8_t>& levels) {
  int code = 0;
  for (auto a : levels) code = code * 3 + a;
  return code;
}

std::vector<std::uint8_t> string_levels(int code, int m) {
  std::vector<std::uint8_t> out(m);
  for (int u = m - 1; u >= 0; --u) {
    out[u] = code % 3;
    code /= 3;
  }
  return out;
}

std::string string_label(int code, int m) {
  std::string s;
  for (auto a : string_levels(code, m)) s += char('0' + a);
  return s;
}

SparseComplexMatrix collective_lowering(const StateSpace& space, Mode mode) {
  if (space.spec.coupling != Coupling::Coherent)
    throw Error("COHERENT_REQUIRED", "collective lowering is defined for the coherent cluster");
  const int m = space.spec.m;
  int dim = 1;
  for (int i = 0; i < m; ++i) dim *= 3;
  SparseComplexMatrix op;
  op.rows = op.cols = dim;
  const std::uint8_t lowered = mode == Mode::Hyd ? 0 : 1;
  for (int code = 0; code < dim; ++code) {
    auto levels = string_levels(code, m);
    for (int u = 0; u < m; ++u) {
      if (levels[u] != 2) continue;
      levels[u] = lowered;
      op.entries.push_back({string_code(levels), code, {1.0, 0.0}});
      levels[u] = 2;
    }
  }
  return op;
}

std::map<int, long long> apply_collective(const StringCoeffs& v, int m, Mode mode) {
  std::map<int, long long> image;
  const std::uint8_t lowered = mode == Mode::Hyd ? 0 : 1;
  for (const auto& [code, c] : v) {
    auto levels = string_levels(code, m);
    for (int u = 0; u < m; ++u) {
      if (levels[u] != 2) continue;
      levels[u] = lowered;
      image[string_code(levels)] += c;
      levels[u] = 2;
    }
  }
  for (auto it = image.begin(); it != image.end();)
    it = it->second == 0 ? image.erase(it) : std::next(it);
  return image;
}

namespace {

struct Composition {
  int n0, n1, n2;
};

std::vector<int> sector_members(int m, const Composition& c) {
  std::vector<int> members;
  int dim = 1;
  for (int i = 0; i < m; ++i) dim *= 3;
  for (int code = 0; code < dim; ++code) {
    const auto levels = string_levels(code, m);
    int n0 = 0, n1 = 0, n2 = 0;
    for (auto a : levels) {
      n0 += a == 0;
      n1 += a == 1;
      n2 += a == 2;
    }
    if (n0 == c.n0 && n1 == c.n1 && n2 == c.n2) members.push_back(code);
  }
  return members;
}

// Reduced row echelon form over rationals; returns pivot column per row.
std::vector<int> rref(std::vector<std::vector<Rational>>& a) {
  std::vector<int> pivots;
  if (a.empty()) return pivots;
  const int rows = int(a.size());
  const int cols = int(a[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[r], a[piv]);
    const Rational inv = Rational(1) / a[r][c];
    for (int j = c; j < cols; ++j) a[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::vector<long long> to_primitive_integers(const std::vector<Rational>& v) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  BigInt den_lcm = 1;
  for (const auto& x : v)
    if (x != 0) den_lcm = boost::multiprecision::lcm(den_lcm, denominator(x));
  std::vector<BigInt> scaled(v.size());
  BigInt g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    scaled[i] = numerator(v[i]) * (den_lcm / denominator(v[i]));
    g = boost::multiprecision::gcd(g, boost::multiprecision::abs(scaled[i]));
  }
  if (g == 0) g = 1;
  int sign = 0;
  std::vector<long long> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    BigInt q = scaled[i] / g;
    if (sign == 0 && q != 0) sign = q > 0 ? 1 : -1;
    if (sign < 0) q = -q;
    out[i] = q.convert_to<long long>();
  }
  return out;
}

}  // namespace

int DarkBasis::dimension() const {
  int d = 0;
  for (const auto& s : sectors) d += int(s.basis.size());
  return d;
}

DarkBasis dark_basis(int m) {
  if (m < 2 || m > 6)
    throw Error("M_OUT_OF_RANGE", "dark_basis is supported for 2 <= m <= 6");
  DarkBasis out;
  out.m = m;
  std::map<int, DarkSectorBasis> by_n2;
  for (int n2 = 1; n2 <= m; ++n2) by_n2[n2] = DarkSectorBasis{n2, {}};

  for (int n2 = 1; n2 <= m; ++n2) {
    for (int n0 = 0; n0 + n2 <= m; ++n0) {
      const Composition c{n0, m - n0 - n2, n2};
      const auto members = sector_members(m, c);
      if (members.empty()) continue;
      std::map<int, int> member_pos;
      for (std::size_t i = 0; i < members.size(); ++i) member_pos[members[i]] = int(i);

      // Stack the two collective constraints; rows indexed by image strings.
      std::map<int, int> row_of;  // image code (tagged by mode) -> row
      std::vector<std::vector<Rational>> a;
      auto add_entries = [&](Mode mode, int tag) {
        const std::uint8_t lowered = mode == Mode::Hyd ? 0 : 1;
        for (std::size_t i = 0; i < members.size(); ++i) {
          auto levels = string_levels(members[i], m);
          for (int u = 0; u < m; ++u) {
            if (levels[u] != 2) continue;
            levels[u] = lowered;
            const int key = string_code(levels) * 2 + tag;
            levels[u] = 2;
            auto [it, fresh] = row_of.emplace(key, int(a.size()));
            if (fresh) a.emplace_back(members.size(), Rational(0));
            a[it->second][i] += 1;
          }
        }
      };
      add_entries(Mode::Hyd, 0);
      add_entries(Mode::Dist, 1);

      const auto pivots = rref(a);
      std::vector<char> is_pivot(members.size(), 0);
      for (int p : pivots) is_pivot[p] = 1;
      for (int f = 0; f < int(members.size()); ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(members.size(), Rational(0));
        v[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][f];
        const auto ints = to_primitive_integers(v);
        DarkVector dv;
        dv.n2 = n2;
        for (std::size_t i = 0; i < members.size(); ++i)
          if (ints[i] != 0) dv.coeffs.emplace_back(members[i], ints[i]);
        by_n2[n2].basis.push_back(std::move(dv));
      }

      DarkBasis::SectorKernel kern;
      kern.n0 = c.n0;
      kern.n1 = c.n1;
      kern.n2 = c.n2;
      kern.members = members;
      const std::ptrdiff_t added = std::ptrdiff_t(members.size()) - std::ptrdiff_t(pivots.size());
      for (auto rit = by_n2[n2].basis.end() - added; rit != by_n2[n2].basis.end(); ++rit) {
        std::vector<long long> row(members.size(), 0);
        for (const auto& [code, coeff] : rit->coeffs) row[member_pos[code]] = coeff;
        kern.rows.push_back(std::move(row));
      }
      out.kernels.push_back(std::move(kern));
    }
  }
  for (auto& [n2, sec] : by_n2) out.sectors.push_back(std::move(sec));
  return out;
}

bool DarkBasis::contains(const StringCoeffs& v) const {
  // Split by composition sector; reduce each part against that sector kernel.
  std::map<std::tuple<int, int, int>, std::map<int, Rational>> parts;
  for (const auto& [code, c] : v) {
    if (c == 0) continue;
    const auto levels = string_levels(code, m);
    int n0 = 0, n1 = 0, n2 = 0;
    for (auto a : levels) {
      n0 += a == 0;
      n1 += a == 1;
      n2 += a == 2;
    }
    parts[{n0, n1, n2}][code] = Rational(c);
  }
  for (auto& [comp, part] : parts) {
    const auto [n0, n1, n2] = comp;
    if (n2 == 0) return false;  // ground combinations are not dark states
    const SectorKernel* kern = nullptr;
    for (const auto& k : kernels)
      if (k.n0 == n0 && k.n1 == n1 && k.n2 == n2) kern = &k;
    if (!kern) return false;
    std::vector<Rational> rem(kern->members.size(), Rational(0));
    for (std::size_t i = 0; i < kern->members.size(); ++i) {
      auto it = part.find(kern->members[i]);
      if (it != part.end()) {
        rem[i] = it->second;
        part.erase(it);
      }
    }
    if (!part.empty()) return false;  // support outside the sector member list
    // Gaussian reduction of rem against the kernel rows.
    for (const auto& row : kern->rows) {
      int lead = -1;
      for (std::size_t i = 0; i < row.size(); ++i)
        if (row[i] != 0) {
          lead = int(i);
          break;
        }
      if (lead < 0 || rem[lead] == 0) continue;
      const Rational f = rem[lead] / Rational(row[lead]);
      for (std::size_t i = 0; i < row.size(); ++i) rem[i] -= f * Rational(row[i]);
    }
    for (const auto& x : rem)
      if (x != 0) return false;
  }
  return true;
}

BlockDensityMatrix embed_pure_zero_phonon(const StringCoeffs& v, const Evolver& evolver) {
  const StateSpace& space = evolver.space();
  const BlockPartition& part = evolver.partition();
  BlockDensityMatrix rho;
  rho.blocks.resize(part.num_blocks());
  rho.active.assign(part.num_blocks(), 0);
  for (std::size_t b = 0; b < part.num_blocks(); ++b)
    rho.blocks[b].setZero(part.blocks[b].size(), part.blocks[b].size());

  std::vector<std::pair<std::pair<int, int>, double>> amps;  // (block, local) -> coeff
  double norm2 = 0.0;
  for (const auto& [code, c] : v) {
    BasisState s;
    s.p_hyd.assign(space.num_phonon_registers(), 0);
    s.p_dist.assign(space.num_phonon_registers(), 0);
    s.a = string_levels(code, space.spec.m);
    const int idx = space.index_of(s);
    if (idx < 0) throw Error("STATE_MISSING", "zero-phonon ket missing from the space");
    amps.push_back({{part.block_of[idx], part.local_of[idx]}, double(c)});
    norm2 += double(c) * double(c);
  }
  for (const auto& [bi, ci] : amps)
    for (const auto& [bj, cj] : amps) {
      if (bi.first != bj.first)
        throw Error("BLOCK_CROSSING", "dark vector spans multiple blocks");
      rho.blocks[bi.first](bi.second, bj.second) = ci * cj / norm2;
    }
  if (!amps.empty()) rho.active[amps.front().first.first] = 1;
  return rho;
}

DarkReport verify_dark(const StringCoeffs& v, const Evolver& evolver) {
  DarkReport rep;
  const int m = evolver.space().spec.m;

  for (const auto& [code, c] : v) {
    if (c == 0) continue;
    const auto levels = string_levels(code, m);
    if (std::count(levels.begin(), levels.end(), 2) > 0) rep.nontrivial = true;
  }

  auto max_abs = [](const std::map<int, long long>& img) {
    long long mx = 0;
    for (const auto& [k, c] : img) mx = std::max(mx, std::abs(c));
    return mx;
  };
  rep.residual_hyd = max_abs(apply_collective(v, m, Mode::Hyd));
  rep.residual_dist = max_abs(apply_collective(v, m, Mode::Dist));
  std::map<int, long long> bar;
  for (Mode mode : {Mode::Hyd, Mode::Dist})
    for (const auto& [k, c] : apply_collective(v, m, mode)) bar[k] += c;
  rep.residual_sigma_bar = max_abs(bar);

  // H-eigenvector check: every support ket shares one diagonal energy and the
  // exchange terms cancel, which for zero-phonon kets is exactly the per-mode
  // annihilation condition.
  const StateSpace& space = evolver.space();
  bool first = true;
  bool same_energy = true;
  for (const auto& [code, c] : v) {
    if (c == 0) continue;
    BasisState s;
    s.p_hyd.assign(space.num_phonon_registers(), 0);
    s.p_dist.assign(space.num_phonon_registers(), 0);
    s.a = string_levels(code, m);
    const double e = diagonal_energy(s, space.spec, evolver.config().params);
    if (first) {
      rep.energy = e;
      first = false;
    } else if (e != rep.energy) {
      same_energy = false;
    }
  }
  rep.h_eigenvector = same_energy && rep.residual_hyd == 0 && rep.residual_dist == 0;

  try {
    const BlockDensityMatrix rho = embed_pure_zero_phonon(v, evolver);
    const BlockDensityMatrix deriv = evolver.lindblad_derivative(rho);
    double mx = 0.0;
    for (std::size_t b = 0; b < deriv.blocks.size(); ++b)
      if (deriv.active[b]) mx = std::max(mx, deriv.blocks[b].cwiseAbs().maxCoeff());
    rep.lindblad_residual = mx;
  } catch (const Error&) {
    rep.lindblad_residual = std::numeric_limits<double>::infinity();
  }
  return rep;
}

std::string dark_basis_to_json(const DarkBasis& basis, const std::vector<DarkReport>& reports) {
  nlohmann::json j;
  j["m"] = basis.m;
  j["dimension"] = basis.dimension();
  j["sectors"] = nlohmann::json::array();
  for (const auto& sec : basis.sectors) {
    nlohmann::json js;
    js["n2"] = sec.n2;
    js["dimension"] = int(sec.basis.size());
    js["basis"] = nlohmann::json::array();
    for (const auto& v : sec.basis) {
      nlohmann::json jv = nlohmann::json::array();
      for (const auto& [code, c] : v.coeffs)
        jv.push_back({string_label(code, basis.m), c});
      js["basis"].push_back(jv);
    }
    j["sectors"].push_back(js);
  }
  j["verification"] = nlohmann::json::array();
  for (const auto& r : reports)
    j["verification"].push_back({{"nontrivial", r.nontrivial},
                                 {"residual_hyd", r.residual_hyd},
                                 {"residual_dist", r.residual_dist},
                                 {"residual_sigma_bar", r.residual_sigma_bar},
                                 {"h_eigenvector", r.h_eigenvector},
                                 {"energy", r.energy},
                                 {"lindblad_residual", r.lindblad_residual},
                                 {"pass", r.pass()}});
  return j.dump(2);
}

}  // namespace hbqed
