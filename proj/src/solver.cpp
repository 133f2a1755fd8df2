#include "tpsa/solver.hpp"

#include <random>

namespace tpsa {

std::vector<RingValue> AffineSystem::eval(
    const std::vector<RingValue>& x) const {
  if (x.size() != unknowns)
    throw UsageError("point dimension does not match unknown count");
  std::vector<RingValue> out = constant;
  for (std::size_t i = 0; i < equations; ++i)
    for (std::size_t j = 0; j < unknowns; ++j)
      out[i] = out[i] + coef(i, j) * x[j];
  return out;
}

AffineSystem probe_affine(const ResidualFn& r, std::size_t unknowns,
                          const RingPtr& ring) {
  std::vector<RingValue> zero_pt(unknowns, ring->zero());
  AffineSystem sys;
  sys.ring = ring;
  sys.unknowns = unknowns;
  sys.constant = r(zero_pt);
  sys.equations = sys.constant.size();
  sys.matrix.assign(sys.equations * unknowns, ring->zero());
  for (std::size_t j = 0; j < unknowns; ++j) {
    std::vector<RingValue> pt = zero_pt;
    pt[j] = ring->one();
    std::vector<RingValue> rj = r(pt);
    if (rj.size() != sys.equations)
      throw NotAffine("residual dimension changed between probes");
    for (std::size_t i = 0; i < sys.equations; ++i)
      sys.coef(i, j) = rj[i] - sys.constant[i];
  }
  // Affineness check at one fixed pseudo-random point with small integer
  // coordinates; any quadratic dependence on the unknowns shows up here.
  std::mt19937_64 rng(0x7a9e5eedu);
  std::vector<RingValue> pt(unknowns, ring->zero());
  for (std::size_t j = 0; j < unknowns; ++j)
    pt[j] = ring->embed_integer(static_cast<std::int64_t>(rng() % 7) - 3);
  std::vector<RingValue> expected = sys.eval(pt);
  std::vector<RingValue> got = r(pt);
  if (got.size() != sys.equations)
    throw NotAffine("residual dimension changed between probes");
  for (std::size_t i = 0; i < sys.equations; ++i)
    if (expected[i] != got[i])
      throw NotAffine("residual is not affine in the probed unknowns");
  return sys;
}

std::vector<RingValue> solve_exact(const AffineSystem& sys) {
  const RingPtr& ring = sys.ring;
  std::size_t rows = sys.equations, cols = sys.unknowns;
  std::vector<RingValue> m = sys.matrix;
  std::vector<RingValue> rhs(rows);
  for (std::size_t i = 0; i < rows; ++i) rhs[i] = -sys.constant[i];
  auto at = [&](std::size_t i, std::size_t j) -> RingValue& {
    return m[i * cols + j];
  };

  std::vector<std::size_t> pivot_col_of_row(rows, cols);  // cols = none
  std::size_t piv = 0;
  for (std::size_t col = 0; col < cols && piv < rows; ++col) {
    std::size_t found = rows;
    bool saw_nonzero = false;
    for (std::size_t r = piv; r < rows; ++r) {
      if (ring->is_zero(at(r, col))) continue;
      saw_nonzero = true;
      if (ring->is_unit(at(r, col))) {
        found = r;
        break;
      }
    }
    if (found == rows) {
      if (saw_nonzero)
        throw NonUnitPivot("column " + std::to_string(col) +
                           " has no unit pivot in " + ring->descriptor());
      continue;  // free column
    }
    if (found != piv) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(at(found, j), at(piv, j));
      std::swap(rhs[found], rhs[piv]);
    }
    RingValue inv = ring->invert_unit(at(piv, col));
    for (std::size_t j = 0; j < cols; ++j) at(piv, j) = at(piv, j) * inv;
    rhs[piv] = rhs[piv] * inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == piv || ring->is_zero(at(r, col))) continue;
      RingValue f = at(r, col);
      for (std::size_t j = 0; j < cols; ++j)
        at(r, j) = at(r, j) - f * at(piv, j);
      rhs[r] = rhs[r] - f * rhs[piv];
    }
    pivot_col_of_row[piv] = col;
    ++piv;
  }

  std::vector<RingValue> x(cols, ring->zero());
  for (std::size_t r = 0; r < piv; ++r) x[pivot_col_of_row[r]] = rhs[r];

  // Authoritative consistency check against the untouched input.
  std::vector<RingValue> check = sys.eval(x);
  for (const RingValue& v : check)
    if (!ring->is_zero(v))
      throw Inconsistent("system has no solution with zero-filled free unknowns");
  return x;
}

std::size_t matrix_rank(const RingPtr& ring, std::size_t rows,
                        std::size_t cols, std::vector<RingValue> m) {
  auto at = [&](std::size_t i, std::size_t j) -> RingValue& {
    return m[i * cols + j];
  };
  std::size_t piv = 0;
  for (std::size_t col = 0; col < cols && piv < rows; ++col) {
    std::size_t found = rows;
    for (std::size_t r = piv; r < rows; ++r) {
      if (ring->is_unit(at(r, col))) {
        found = r;
        break;
      }
    }
    if (found == rows) continue;
    if (found != piv)
      for (std::size_t j = 0; j < cols; ++j) std::swap(at(found, j), at(piv, j));
    RingValue inv = ring->invert_unit(at(piv, col));
    for (std::size_t j = 0; j < cols; ++j) at(piv, j) = at(piv, j) * inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == piv || ring->is_zero(at(r, col))) continue;
      RingValue f = at(r, col);
      for (std::size_t j = 0; j < cols; ++j)
        at(r, j) = at(r, j) - f * at(piv, j);
    }
    ++piv;
  }
  return piv;
}

std::optional<std::vector<RingValue>> try_invert_matrix(
    const RingPtr& ring, std::size_t n, std::vector<RingValue> m) {
  std::vector<RingValue> inv(n * n, ring->zero());
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = ring->one();
  auto at = [&](std::vector<RingValue>& a, std::size_t i,
                std::size_t j) -> RingValue& { return a[i * n + j]; };
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t found = n;
    for (std::size_t r = col; r < n; ++r) {
      if (ring->is_unit(at(m, r, col))) {
        found = r;
        break;
      }
    }
    if (found == n) return std::nullopt;
    if (found != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(at(m, found, j), at(m, col, j));
        std::swap(at(inv, found, j), at(inv, col, j));
      }
    }
    RingValue s = ring->invert_unit(at(m, col, col));
    for (std::size_t j = 0; j < n; ++j) {
      at(m, col, j) = at(m, col, j) * s;
      at(inv, col, j) = at(inv, col, j) * s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || ring->is_zero(at(m, r, col))) continue;
      RingValue f = at(m, r, col);
      for (std::size_t j = 0; j < n; ++j) {
        at(m, r, j) = at(m, r, j) - f * at(m, col, j);
        at(inv, r, j) = at(inv, r, j) - f * at(inv, col, j);
      }
    }
  }
  return inv;
}

std::pair<HomogeneousMatrix, HomogeneousMatrix> bezout_solve_componentwise(
    const RingValue& s, const RingValue& t, const HomogeneousMatrix& A) {
  HomogeneousMatrix C(A.context(), A.degree());
  HomogeneousMatrix B(A.context(), A.degree());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      auto [x, y] = bezout_combine(s, t, A.at(i, j));
      C.at(i, j) = x;
      B.at(i, j) = y;
    }
  return {std::move(C), std::move(B)};
}

}  // namespace tpsa
