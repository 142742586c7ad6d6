#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hbqed/dynamics.hpp"

namespace hbqed {

// Integer vector over zero-phonon level configurations. Configurations are
// indexed by the base-3 code of the level string (unit 0 most significant).
using StringCoeffs = std::vector<std::pair<int, long long>>;

int string_code(const std::vector<std::uint8_t>& levels);
std::vector<std::uint8_t> string_levels(int code, int m);
std::string string_label(int code, int m);

struct DarkVector {
  int n2 = 0;            // units at the critical level across the support
  StringCoeffs coeffs;   // sorted by string code, gcd 1, first coefficient > 0
};

// Collective lowering operator on the zero-phonon configuration space:
// sum over units of the level map 2 -> 0 (hyd) or 2 -> 1 (dist). Integer
// entries; rows and columns are string codes.
SparseComplexMatrix collective_lowering(const StateSpace& space, Mode mode);

// Exact image of the collective operator applied to an integer vector.
std::map<int, long long> apply_collective(const StringCoeffs& v, int m, Mode mode);

struct DarkSectorBasis {
  int n2 = 0;
  std::vector<DarkVector> basis;
};

class DarkBasis {
public:
  int m = 0;
  std::vector<DarkSectorBasis> sectors;  // ascending n2; only n2 >= 1 appears

  int dimension() const;
  // Exact rational membership in the spanned dark space.
  bool contains(const StringCoeffs& v) const;

  // Populated by dark_basis(): per composition sector (n0,n1,n2), the ordered
  // member codes and the integer kernel basis rows over those members.
  struct SectorKernel {
    int n0, n1, n2;
    std::vector<int> members;
    std::vector<std::vector<long long>> rows;
  };
  std::vector<SectorKernel> kernels;
};

// Exact kernel of the two stacked collective lowering operators on the
// zero-phonon space, computed per composition sector with rational
// elimination. Sectors without critical units hold only trivial ground
// combinations and are excluded.
DarkBasis dark_basis(int m);

struct DarkReport {
  bool nontrivial = false;
  long long residual_hyd = 0;        // max |coefficient| of the exact image
  long long residual_dist = 0;
  long long residual_sigma_bar = 0;
  bool h_eigenvector = false;
  double energy = 0.0;
  double lindblad_residual = 0.0;    // max |L(|D><D|)| entry
  bool pass(double tol = 1e-12) const {
    return nontrivial && residual_hyd == 0 && residual_dist == 0 &&
           residual_sigma_bar == 0 && h_eigenvector && lindblad_residual <= tol;
  }
};

// Full verification of a candidate vector against the coherent-space
// dynamics the evolver was built with. Returns a failing report rather than
// throwing.
DarkReport verify_dark(const StringCoeffs& v, const Evolver& evolver);

// |D><D| embedded as a block density matrix of the evolver's space.
BlockDensityMatrix embed_pure_zero_phonon(const StringCoeffs& v, const Evolver& evolver);

std::string dark_basis_to_json(const DarkBasis& basis, const std::vector<DarkReport>& reports);

}  // namespace hbqed
