#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "fockline/common.hpp"
#include "fockline/schmidt.hpp"

namespace fockline {

/// Per-mode occupation tuple. Unused slots stay zero so tuples of the same
/// operator compare element-wise.
using Occ = std::array<std::uint16_t, 8>;

constexpr int kMaxModes = 8;

Occ make_occ(std::initializer_list<int> ns);
int occ_sum(const Occ& o, int mode_count);

struct EntryKey {
  Occ bra{};
  Occ ket{};
  auto operator<=>(const EntryKey&) const = default;
};

/// Multimode density operator stored as a sparse map over occupation-tuple
/// pairs. Subnormalized operators are first-class: the trace carries the
/// probability of the conditional branch they represent.
///
/// Sector sparsity: entries whose occupations exceed the per-mode bound, or
/// whose bra/ket photon sum exceeds the total bound, are never stored.
class FockDensityOperator {
 public:
  FockDensityOperator() = default;
  FockDensityOperator(int mode_count, int n_max, int total_max = -1);

  int mode_count() const { return mode_count_; }
  int n_max() const { return n_max_; }
  int total_max() const { return total_max_; }

  void add(const Occ& bra, const Occ& ket, cplx v);
  cplx entry(const Occ& bra, const Occ& ket) const;

  double trace() const;
  void scale(double s);

  const std::map<EntryKey, cplx>& entries() const { return entries_; }

  /// max |entry(b,k) - conj(entry(k,b))| over stored entries.
  double hermiticity_defect() const;
  /// Smallest eigenvalue over the connected blocks of the operator.
  double min_eigenvalue() const;
  /// Mean photon number of one mode.
  double mean_photons(int mode) const;

 private:
  bool in_bounds(const Occ& o) const;

  int mode_count_ = 0;
  int n_max_ = 0;
  int total_max_ = 0;
  std::map<EntryKey, cplx> entries_;
};

struct FockProjector {
  std::vector<int> mode_indices;
  std::vector<int> occupations;
};

struct ProjectionResult {
  FockDensityOperator state;
  double probability = 0.0;
  bool empty = false;  // zero-probability branch marker
};

/// rho = |Psi><Psi| of the squeezed vacuum, two modes, <n,n|Psi> = sqrt(lambda_n).
FockDensityOperator sv_pure_state(const SchmidtSpectrum& spectrum);

FockDensityOperator tensor(const FockDensityOperator& a, const FockDensityOperator& b);

/// Reduces the operator over the given modes; the remaining modes are
/// renumbered in order. Trace and Hermiticity are preserved.
FockDensityOperator partial_trace(const FockDensityOperator& rho,
                                  const std::vector<int>& modes_to_drop);

ProjectionResult project_and_renormalize(const FockDensityOperator& rho,
                                         const FockProjector& projector);

/// Eigendecomposition helper shared by PSD checks and the negativity route:
/// eigenvalues of a sparse Hermitian operator given as key/value entries,
/// computed per connected block.
std::vector<double> block_eigenvalues(const std::map<EntryKey, cplx>& entries);

}  // namespace fockline
