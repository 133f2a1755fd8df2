#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "tpsa/ring.hpp"
#include "tpsa/series.hpp"

namespace tpsa {

// The small exact linear-algebra kit the per-degree decomposition steps
// reduce to: extract an affine system from a residual map by probing, solve
// it by Gauss-Jordan elimination with unit pivots, or split a homogeneous
// matrix along a unit combination.

// matrix . x + constant = 0, row-major, over one ring.
struct AffineSystem {
  RingPtr ring;
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  std::vector<RingValue> matrix;
  std::vector<RingValue> constant;

  const RingValue& coef(std::size_t eq, std::size_t unk) const {
    return matrix[eq * unknowns + unk];
  }
  RingValue& coef(std::size_t eq, std::size_t unk) {
    return matrix[eq * unknowns + unk];
  }
  // matrix . x + constant
  std::vector<RingValue> eval(const std::vector<RingValue>& x) const;
};

using ResidualFn =
    std::function<std::vector<RingValue>(const std::vector<RingValue>&)>;

// Extracts the system from an affine residual: constant = r(0), column j =
// r(e_j) - r(0). One extra probe at a fixed pseudo-random point asserts that
// r really is affine (NotAffine otherwise; that signals a degree-bookkeeping
// bug in the caller, not bad input data).
AffineSystem probe_affine(const ResidualFn& r, std::size_t unknowns,
                          const RingPtr& ring);

// Gauss-Jordan with first-unit-pivot selection in fixed column order;
// non-pivot unknowns are set to zero. The result is verified by
// back-substitution into the original system (Inconsistent on mismatch).
// Over a non-field, a pivot column whose live entries are nonzero but not
// units raises NonUnitPivot.
std::vector<RingValue> solve_exact(const AffineSystem& sys);

// Pivot count of a row-major rows x cols matrix. Exact rank over fields;
// over non-fields it counts unit pivots only.
std::size_t matrix_rank(const RingPtr& ring, std::size_t rows,
                        std::size_t cols, std::vector<RingValue> entries);

// Inverse of a row-major n x n matrix, or nullopt when elimination finds no
// unit pivot. Over the shipped rings (fields, dual numbers, truncated series
// over those: all local) that is exactly non-invertibility.
std::optional<std::vector<RingValue>> try_invert_matrix(
    const RingPtr& ring, std::size_t n, std::vector<RingValue> entries);

// (C, B) with C*s + B*t = A entrywise, by the bezout_combine policy.
std::pair<HomogeneousMatrix, HomogeneousMatrix> bezout_solve_componentwise(
    const RingValue& s, const RingValue& t, const HomogeneousMatrix& A);

}  // namespace tpsa
