#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "tpsa/randomgen.hpp"
#include "tpsa/series.hpp"
#include "tpsa/solver.hpp"

using namespace tpsa;

namespace {

std::vector<RingValue> zeros(const RingPtr& ring, std::size_t k) {
  return std::vector<RingValue>(k, ring->zero());
}

}  // namespace

TEST_CASE("probing recovers the matrix and constant of an affine map") {
  auto R = make_rationals();
  ResidualFn r = [&](const std::vector<RingValue>& x) {
    return std::vector<RingValue>{R->embed_integer(2) * x[0] -
                                  R->embed_integer(6)};
  };
  AffineSystem sys = probe_affine(r, 1, R);
  REQUIRE(sys.equations == 1);
  REQUIRE(sys.unknowns == 1);
  CHECK(sys.coef(0, 0) == R->embed_integer(2));
  CHECK(sys.constant[0] == R->embed_integer(-6));
  auto sol = solve_exact(sys);
  CHECK(sol[0] == R->embed_integer(3));
}

TEST_CASE("two equations in two unknowns") {
  auto R = make_rationals();
  ResidualFn r = [&](const std::vector<RingValue>& x) {
    return std::vector<RingValue>{x[0] + x[1] - R->one(), x[0] - x[1]};
  };
  auto sol = solve_exact(probe_affine(r, 2, R));
  RingValue half = R->one() * invert_unit(R->embed_integer(2));
  CHECK(sol[0] == half);
  CHECK(sol[1] == half);
}

TEST_CASE("probed system reproduces the map at random points") {
  std::mt19937_64 rng(61);
  for (const auto& ring :
       {make_rationals(), make_prime_field(7), make_dual_numbers(5)}) {
    for (int rep = 0; rep < 30; ++rep) {
      std::size_t unknowns = 1 + (rng() % 4);
      std::size_t equations = 1 + (rng() % 4);
      std::vector<RingValue> M, c;
      for (std::size_t k = 0; k < equations * unknowns; ++k)
        M.push_back(random_element(ring, rng));
      for (std::size_t k = 0; k < equations; ++k)
        c.push_back(random_element(ring, rng));
      ResidualFn r = [&](const std::vector<RingValue>& x) {
        std::vector<RingValue> out;
        for (std::size_t i = 0; i < equations; ++i) {
          RingValue acc = c[i];
          for (std::size_t j = 0; j < unknowns; ++j)
            acc = acc + M[i * unknowns + j] * x[j];
          out.push_back(acc);
        }
        return out;
      };
      AffineSystem sys = probe_affine(r, unknowns, ring);
      for (std::size_t k = 0; k < equations * unknowns; ++k)
        CHECK(sys.matrix[k] == M[k]);
      for (std::size_t k = 0; k < equations; ++k)
        CHECK(sys.constant[k] == c[k]);
      for (int pt = 0; pt < 10; ++pt) {
        std::vector<RingValue> x;
        for (std::size_t j = 0; j < unknowns; ++j)
          x.push_back(random_element(ring, rng));
        CHECK(sys.eval(x) == r(x));
      }
    }
  }
}

TEST_CASE("non-affine residuals are rejected by the verification probe") {
  auto R = make_rationals();
  ResidualFn r = [&](const std::vector<RingValue>& x) {
    return std::vector<RingValue>{x[0] * x[0]};
  };
  CHECK_THROWS_AS(probe_affine(r, 1, R), NotAffine);
}

TEST_CASE("solutions satisfy the system even with free unknowns") {
  std::mt19937_64 rng(67);
  for (const auto& ring : {make_rationals(), make_prime_field(5)}) {
    for (int rep = 0; rep < 100; ++rep) {
      std::size_t unknowns = 1 + (rng() % 4);
      std::size_t equations = 1 + (rng() % 3);
      AffineSystem sys;
      sys.ring = ring;
      sys.unknowns = unknowns;
      sys.equations = equations;
      for (std::size_t k = 0; k < equations * unknowns; ++k)
        sys.matrix.push_back(random_element(ring, rng));
      // Constant chosen as -M*x0 so the system is always solvable.
      std::vector<RingValue> x0;
      for (std::size_t j = 0; j < unknowns; ++j)
        x0.push_back(random_element(ring, rng));
      sys.constant = zeros(ring, equations);
      auto image = sys.eval(x0);
      for (std::size_t i = 0; i < equations; ++i)
        sys.constant[i] = -image[i];
      auto sol = solve_exact(sys);
      for (const auto& v : sys.eval(sol)) CHECK(is_zero(v));
    }
  }
}

TEST_CASE("free unknowns are zero-filled in column order") {
  auto R = make_rationals();
  AffineSystem sys;
  sys.ring = R;
  sys.unknowns = 2;
  sys.equations = 1;
  sys.matrix = {R->one(), R->one()};
  sys.constant = {R->embed_integer(-2)};  // x + y - 2 = 0
  auto sol = solve_exact(sys);
  CHECK(sol[0] == R->embed_integer(2));
  CHECK(sol[1] == R->zero());
}

TEST_CASE("inconsistent and non-unit-pivot systems throw") {
  auto R = make_rationals();
  AffineSystem bad;
  bad.ring = R;
  bad.unknowns = 1;
  bad.equations = 1;
  bad.matrix = {R->zero()};
  bad.constant = {R->one()};  // 0*x + 1 = 0
  CHECK_THROWS_AS(solve_exact(bad), Inconsistent);

  auto D = make_dual_numbers(5);
  RingValue eps = parse_ring_element(D, "eps");
  AffineSystem dual;
  dual.ring = D;
  dual.unknowns = 1;
  dual.equations = 1;
  dual.matrix = {eps};
  dual.constant = {D->one()};  // eps*x + 1 = 0: eps is nonzero, not a unit
  CHECK_THROWS_AS(solve_exact(dual), NonUnitPivot);
}

TEST_CASE("matrix rank counts unit pivots") {
  auto R = make_rationals();
  auto e = [&](int k) { return R->embed_integer(k); };
  CHECK(matrix_rank(R, 2, 2, {e(1), e(2), e(2), e(4)}) == 1);
  CHECK(matrix_rank(R, 2, 2, {e(0), e(1), e(1), e(0)}) == 2);
  CHECK(matrix_rank(R, 2, 3, {e(1), e(0), e(1), e(0), e(1), e(1)}) == 2);

  auto F5 = make_prime_field(5);
  auto f = [&](int k) { return F5->embed_integer(k); };
  CHECK(matrix_rank(F5, 2, 2, {f(1), f(2), f(2), f(4)}) == 1);

  auto D = make_dual_numbers(5);
  RingValue eps = parse_ring_element(D, "eps");
  CHECK(matrix_rank(D, 1, 1, {eps}) == 0);
  CHECK(matrix_rank(D, 2, 2, {D->one(), eps, D->zero(), eps}) == 1);
}

TEST_CASE("matrix inversion round trips") {
  auto F7 = make_prime_field(7);
  std::mt19937_64 rng(71);
  int seen = 0;
  while (seen < 20) {
    std::vector<RingValue> M;
    for (int k = 0; k < 9; ++k) M.push_back(random_element(F7, rng));
    auto inv = try_invert_matrix(F7, 3, M);
    if (!inv) continue;
    ++seen;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        RingValue dot = F7->zero();
        for (std::size_t k = 0; k < 3; ++k)
          dot = dot + M[i * 3 + k] * (*inv)[k * 3 + j];
        CHECK(dot == (i == j ? F7->one() : F7->zero()));
      }
  }
  auto f = [&](int k) { return F7->embed_integer(k); };
  CHECK(!try_invert_matrix(F7, 2, {f(1), f(2), f(2), f(4)}));

  // Dual-number matrix with unit determinant 1 - eps^2 = 1.
  auto D = make_dual_numbers(5);
  RingValue eps = parse_ring_element(D, "eps");
  auto inv = try_invert_matrix(D, 2, {D->one(), eps, eps, D->one()});
  REQUIRE(inv.has_value());
  CHECK((*inv)[0] == D->one());
  CHECK((*inv)[1] == -eps);
}

TEST_CASE("componentwise bezout split of a homogeneous matrix") {
  auto R = make_rationals();
  SeriesContext ctx{R, 2, 3};
  HomogeneousMatrix A(ctx, 2);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) A.at(i, j) = R->one();

  auto [C, B] = bezout_solve_componentwise(R->embed_integer(6),
                                           R->embed_integer(-24), A);
  RingValue sixth = invert_unit(R->embed_integer(6));
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      CHECK(C.at(i, j) == sixth);
      CHECK(B.at(i, j) == R->zero());
    }

  auto F7 = make_prime_field(7);
  SeriesContext ctx7{F7, 1, 4};
  HomogeneousMatrix A7(ctx7, 3);
  A7.at(0, 0) = F7->embed_integer(2);
  auto [C7, B7] =
      bezout_solve_componentwise(F7->zero(), F7->embed_integer(3), A7);
  CHECK(C7.at(0, 0) == F7->zero());
  CHECK(B7.at(0, 0) == F7->embed_integer(2) * F7->embed_integer(5));

  auto D = make_dual_numbers(5);
  RingValue eps = parse_ring_element(D, "eps");
  SeriesContext ctxd{D, 1, 2};
  HomogeneousMatrix Ad(ctxd, 2);
  Ad.at(0, 0) = D->one();
  CHECK_THROWS_AS(bezout_solve_componentwise(eps, eps, Ad), NoCombination);
}
