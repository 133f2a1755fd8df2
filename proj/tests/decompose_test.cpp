#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "tpsa/decompose.hpp"
#include "tpsa/randomgen.hpp"
#include "tpsa/textio.hpp"

using namespace tpsa;

namespace {

Series X(const SeriesContext& ctx, std::uint32_t i) {
  return Series::variable(ctx, i);
}

Series uni(const SeriesContext& ctx, std::vector<std::pair<int, int>> tms) {
  Series s = Series::zero(ctx);
  for (auto [d, c] : tms)
    s.add_term(Monomial{static_cast<std::uint32_t>(d)},
               ctx.ring->embed_integer(c));
  return s;
}

bool scalar_images(const Automorphism& a, const RingValue& s) {
  for (std::uint32_t i = 1; i <= a.context().nvars; ++i)
    if (a.image(i - 1) != X(a.context(), i).scaled(s)) return false;
  return true;
}

}  // namespace

TEST_CASE("default characteristic-0 parameters validate over the rationals") {
  auto R = make_rationals();
  Char0Params params = default_char0_params(R);
  CHECK(params.b == R->embed_integer(2));
  CHECK(params.c == R->embed_integer(3));
  validate_char0_params(params, 40);  // no throw

  // Over F5 the unit combination first fails at m = 5 (2^4 = 1 mod 5).
  auto F5 = make_prime_field(5);
  Char0Params p5 = default_char0_params(F5);
  validate_char0_params(p5, 4);  // degrees 2..4 are fine
  try {
    validate_char0_params(p5, 6);
    FAIL("expected BadUnits");
  } catch (const BadUnits& e) {
    CHECK(std::string(e.what()).find("degree m = 5") != std::string::npos);
  }
}

TEST_CASE("characteristic-0 identity decomposes into the seed pair") {
  SeriesContext ctx{make_rationals(), 2, 4};
  auto cert = decompose_char0(Automorphism::identity(ctx),
                              default_char0_params(ctx.ring));
  REQUIRE(cert.pairs.size() == 1);
  CHECK(scalar_images(cert.pairs[0].beta, ctx.ring->embed_integer(2)));
  CHECK(scalar_images(cert.pairs[0].gamma, ctx.ring->embed_integer(3)));
  CHECK(verify_certificate(cert, Automorphism::identity(ctx)).ok);
}

TEST_CASE("characteristic-0 univariate decomposition, frozen values") {
  SeriesContext ctx{make_rationals(), 1, 6};
  Automorphism alpha({uni(ctx, {{1, 1}, {2, 1}})});
  auto cert = decompose_char0(alpha, default_char0_params(ctx.ring));
  REQUIRE(cert.pairs.size() == 1);
  CHECK(verify_certificate(cert, alpha).ok);
  CHECK(emit_series(cert.pairs[0].beta.image(0)) == "2*X1");
  CHECK(emit_series(cert.pairs[0].gamma.image(0)) ==
        "3*X1 + 3*X1^2 + 2*X1^3 + 9/7*X1^4 + 26/35*X1^5 + 94/217*X1^6");
}

TEST_CASE("characteristic-0 decomposition in several variables") {
  SeriesContext ctx{make_rationals(), 2, 5};
  Automorphism alpha({X(ctx, 1) + X(ctx, 2) * X(ctx, 2),
                      X(ctx, 2) + X(ctx, 1) * X(ctx, 2)});
  auto cert = decompose_char0(alpha, default_char0_params(ctx.ring));
  CHECK(cert.pairs.size() == 1);
  CHECK(verify_certificate(cert, alpha).ok);

  SeriesContext c3{make_rationals(), 3, 4};
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 5; ++rep) {
    Automorphism a = random_gi(c3, rng());
    auto c = decompose_char0(a, default_char0_params(c3.ring));
    CHECK(c.pairs.size() == 1);
    CHECK(verify_certificate(c, a).ok);
  }
}

TEST_CASE("characteristic-0 construction forced onto F5") {
  // Works while every degree keeps a unit combination (prec < 5)...
  SeriesContext low{make_prime_field(5), 1, 4};
  Automorphism small({uni(low, {{1, 1}, {2, 1}})});
  auto cert = decompose_char0(small, default_char0_params(low.ring));
  CHECK(verify_certificate(cert, small).ok);

  // ...and reports the first broken degree once prec reaches it.
  SeriesContext ctx{make_prime_field(5), 1, 6};
  Automorphism alpha({uni(ctx, {{1, 1}, {2, 1}})});
  try {
    decompose_char0(alpha, default_char0_params(ctx.ring));
    FAIL("expected BadUnits");
  } catch (const BadUnits& e) {
    CHECK(std::string(e.what()).find("degree m = 5") != std::string::npos);
  }
}

TEST_CASE("approximate commutator agrees through the requested degree") {
  SeriesContext ctx{make_rationals(), 1, 6};
  Automorphism alpha({uni(ctx, {{1, 1}, {2, 1}, {3, 1}, {4, 2}})});
  for (std::uint32_t m = 2; m <= 4; ++m) {
    auto [beta, gamma] = approx_commutator(
        alpha, default_char0_params(ctx.ring), m);
    Automorphism k = commutator(beta, gamma);
    CHECK(k.image(0).truncated_above(m) == alpha.image(0).truncated_above(m));
  }
  CHECK_THROWS_AS(
      approx_commutator(alpha, default_char0_params(ctx.ring), 1),
      UsageError);
}

TEST_CASE("univariate characteristic-p seeds and probed steps") {
  auto F5 = make_prime_field(5);
  auto coeffs = seeded_univariate_coefficients(F5, 31);
  CHECK(coeffs.b[1] == F5->embed_integer(-1));
  CHECK(coeffs.c[1] == F5->embed_integer(-1));
  CHECK(coeffs.b[2] == F5->one());
  CHECK(coeffs.c[2] == F5->zero());
  CHECK(coeffs.b[3] == F5->zero());
  CHECK(coeffs.c[3] == F5->zero());

  SeriesContext ctx{F5, 1, 31};
  Series psi = uni(ctx, {{1, 1}, {2, 2}, {3, 4}});
  for (std::uint32_t m : {4u, 6u, 8u, 14u}) {
    AffineSystem sys = probe_univariate_step(coeffs, psi, m, false);
    REQUIRE(sys.equations == 2);
    REQUIRE(sys.unknowns == 2);
    RingValue det =
        sys.coef(0, 0) * sys.coef(1, 1) - sys.coef(0, 1) * sys.coef(1, 0);
    RingValue expect = F5->embed_integer(2 * (static_cast<int>(m) - 2)) *
                       (coeffs.c[2] - coeffs.b[2]);
    CHECK(det == expect);
    // The first row of the regular step is always (2, -2).
    CHECK(sys.coef(0, 0) == F5->embed_integer(2));
    CHECK(sys.coef(0, 1) == F5->embed_integer(-2));
  }
  AffineSystem wrap = probe_univariate_step(coeffs, psi, 12, true);
  REQUIRE(wrap.equations == 2);
  REQUIRE(wrap.unknowns == 3);
  CHECK(matrix_rank(F5, wrap.equations, wrap.unknowns, wrap.matrix) == 2);
}

TEST_CASE("univariate characteristic-p decomposition") {
  // The normalization target itself: one commutator suffices.
  SeriesContext c5{make_prime_field(5), 1, 3};
  Automorphism phi({uni(c5, {{1, 1}, {2, 2}, {3, 4}})});
  auto cert = decompose_univariate_charp(phi);
  CHECK(cert.pairs.size() <= 2);
  CHECK(verify_certificate(cert, phi).ok);

  // Identity needs no pairs.
  SeriesContext c7{make_prime_field(7), 1, 10};
  auto id_cert = decompose_univariate_charp(Automorphism::identity(c7));
  CHECK(id_cert.pairs.empty());

  // Deep precision crossing a singular degree (m = 16 = 2 mod 7).
  SeriesContext deep{make_prime_field(7), 1, 25};
  Automorphism cube({uni(deep, {{1, 1}, {3, 1}})});
  auto deep_cert = decompose_univariate_charp(cube);
  CHECK(deep_cert.pairs.size() <= 2);
  CHECK(verify_certificate(deep_cert, cube).ok);

  // Even precision ends on a half-width final step.
  SeriesContext even{make_prime_field(5), 1, 12};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Automorphism a = random_gi(even, seed);
    auto c = decompose_univariate_charp(a);
    CHECK(c.pairs.size() <= 2);
    CHECK(verify_certificate(c, a).ok);
  }

  // Dual numbers: coefficients outside the prime subfield.
  SeriesContext dual{make_dual_numbers(5), 1, 9};
  Automorphism d = random_gi(dual, 99);
  auto dual_cert = decompose_univariate_charp(d);
  CHECK(dual_cert.pairs.size() <= 2);
  CHECK(verify_certificate(dual_cert, d).ok);
}

TEST_CASE("elementary decomposition yields one pair") {
  SeriesContext ctx{make_prime_field(5), 2, 4};
  Automorphism e1 = elementary(1, X(ctx, 2) * X(ctx, 2));
  auto cert = decompose_elementary(e1);
  REQUIRE(cert.pairs.size() == 1);
  CHECK(verify_certificate(cert, e1).ok);

  // A data variable other than X1 goes through the transposition conjugate.
  Automorphism e2 =
      elementary(2, X(ctx, 1) * X(ctx, 1) + X(ctx, 1) * X(ctx, 1) * X(ctx, 1));
  auto cert2 = decompose_elementary(e2);
  REQUIRE(cert2.pairs.size() == 1);
  CHECK(verify_certificate(cert2, e2).ok);

  // Identity is an elementary map with zero data: empty certificate.
  auto empty = decompose_elementary(Automorphism::identity(ctx));
  CHECK(empty.pairs.empty());

  SeriesContext c3{make_dual_numbers(5), 3, 4};
  Automorphism e3 = elementary(
      2, X(c3, 1) * X(c3, 3) + X(c3, 3) * X(c3, 3) * X(c3, 1));
  auto cert3 = decompose_elementary(e3);
  REQUIRE(cert3.pairs.size() == 1);
  CHECK(verify_certificate(cert3, e3).ok);

  // Two moved variables are not elementary.
  Automorphism both({X(ctx, 1) + X(ctx, 2) * X(ctx, 2),
                     X(ctx, 2) + X(ctx, 1) * X(ctx, 1)});
  CHECK_THROWS_AS(decompose_elementary(both), BadElementaryData);
}

TEST_CASE("unit-scaling decomposition over a field") {
  SeriesContext ctx{make_prime_field(5), 2, 4};
  auto one = [&] { return Series::constant(ctx, ctx.ring->one()); };

  // Generic multiplier: one pair.
  Automorphism a({X(ctx, 1) * (one() + X(ctx, 2)), X(ctx, 2)});
  auto cert = decompose_unit_scaling(a);
  CHECK(cert.pairs.size() == 1);
  CHECK(verify_certificate(cert, a).ok);

  // Multiplier with linear coefficient -1 takes the mirrored construction.
  Automorphism b({X(ctx, 1) * (one() - X(ctx, 2)), X(ctx, 2)});
  auto certb = decompose_unit_scaling(b);
  CHECK(certb.pairs.size() == 1);
  CHECK(verify_certificate(certb, b).ok);

  // Multiplier in the square of the ideal.
  Automorphism c({X(ctx, 1) * (one() + X(ctx, 2) * X(ctx, 2)), X(ctx, 2)});
  auto certc = decompose_unit_scaling(c);
  CHECK(certc.pairs.size() == 1);
  CHECK(verify_certificate(certc, c).ok);

  // Linear part only on X3: handled through a variable swap.
  SeriesContext c3{make_prime_field(7), 3, 4};
  Series f3 = X(c3, 3) + X(c3, 2) * X(c3, 3);
  Automorphism d({X(c3, 1) * (Series::constant(c3, c3.ring->one()) + f3),
                  X(c3, 2), X(c3, 3)});
  auto certd = decompose_unit_scaling(d);
  CHECK(certd.pairs.size() == 1);
  CHECK(verify_certificate(certd, d).ok);

  // Wrong shapes are reported as usage errors.
  Automorphism notscaling({X(ctx, 1) + X(ctx, 2) * X(ctx, 2), X(ctx, 2)});
  CHECK_THROWS_AS(decompose_unit_scaling(notscaling), UsageError);
  Automorphism movesx2({X(ctx, 1), X(ctx, 2) * (one() + X(ctx, 1))});
  CHECK_THROWS_AS(decompose_unit_scaling(movesx2), UsageError);
}

TEST_CASE("unit-scaling decomposition over dual numbers") {
  SeriesContext ctx{make_dual_numbers(5), 2, 4};
  auto one = [&] { return Series::constant(ctx, ctx.ring->one()); };
  RingValue eps = parse_ring_element(ctx.ring, "eps");

  Series f = X(ctx, 2).scaled(eps) + X(ctx, 2) +
             (X(ctx, 2) * X(ctx, 2)).scaled(ctx.ring->embed_integer(3));
  Automorphism a({X(ctx, 1) * (one() + f), X(ctx, 2)});
  auto cert = decompose_unit_scaling(a);
  CHECK(cert.pairs.size() <= 2);  // at most n pairs over a general ring
  CHECK(verify_certificate(cert, a).ok);

  // Multiplier with a non-unit linear coefficient: the general route is
  // forced even though the ring is not a field.
  Series g = X(ctx, 2).scaled(eps) + X(ctx, 2) * X(ctx, 2);
  Automorphism b({X(ctx, 1) * (one() + g), X(ctx, 2)});
  auto certb = decompose_unit_scaling(b);
  CHECK(certb.pairs.size() <= 2);
  CHECK(verify_certificate(certb, b).ok);
}

TEST_CASE("single-variable decomposition splits drift, scale and shift") {
  // X1 -> X1 + g + X1*f1 + X1^2*f2 with g = X2^2, f1 = X2, f2 = 1.
  for (const auto& ring : {make_prime_field(5), make_dual_numbers(5)}) {
    SeriesContext ctx{ring, 2, 5};
    Series h = X(ctx, 2) * X(ctx, 2) + X(ctx, 1) * X(ctx, 2) +
               X(ctx, 1) * X(ctx, 1);
    Automorphism alpha({X(ctx, 1) + h, X(ctx, 2)});
    auto cert = decompose_single_variable(alpha);
    CHECK(cert.pairs.size() <= ctx.nvars + 3);
    CHECK(verify_certificate(cert, alpha).ok);
  }

  // Pure elementary data degenerates to a single pair.
  SeriesContext ctx{make_prime_field(7), 2, 4};
  Automorphism e = elementary(1, X(ctx, 2) * X(ctx, 2));
  auto cert = decompose_single_variable(e);
  CHECK(cert.pairs.size() <= 1);
  CHECK(verify_certificate(cert, e).ok);

  // Random single-variable maps over three rings.
  std::mt19937_64 rng(103);
  for (const auto& ring :
       {make_prime_field(5), make_prime_field(7), make_dual_numbers(7)}) {
    SeriesContext c{ring, 3, 4};
    for (int rep = 0; rep < 5; ++rep) {
      Series h = random_series(c, 2, rng);
      Automorphism a({X(c, 1) + h, X(c, 2), X(c, 3)});
      auto cc = decompose_single_variable(a);
      CHECK(cc.pairs.size() <= c.nvars + 3);
      CHECK(verify_certificate(cc, a).ok);
    }
  }
}

TEST_CASE("triangular factorization isolates one variable per factor") {
  std::mt19937_64 rng(107);
  for (const auto& ring : {make_prime_field(5), make_dual_numbers(5)}) {
    SeriesContext ctx{ring, 3, 4};
    for (int rep = 0; rep < 5; ++rep) {
      Automorphism alpha = random_gi(ctx, rng());
      auto factors = factor_triangular(alpha);
      REQUIRE(factors.size() == ctx.nvars);
      for (std::uint32_t k = 0; k < ctx.nvars; ++k)
        for (std::uint32_t j = 0; j < ctx.nvars; ++j)
          if (j != k) CHECK(factors[k].image(j) == X(ctx, j + 1));
      Automorphism prod = factors[0];
      for (std::size_t k = 1; k < factors.size(); ++k)
        prod = compose(prod, factors[k]);
      CHECK(prod == alpha);
    }
  }
}

TEST_CASE("several-variable decomposition meets the length bounds") {
  std::mt19937_64 rng(109);
  for (std::uint32_t n : {2u, 3u}) {
    for (const auto& ring : {make_prime_field(5), make_prime_field(7)}) {
      SeriesContext ctx{ring, n, 4};
      for (int rep = 0; rep < 3; ++rep) {
        Automorphism alpha = random_gi(ctx, rng());
        auto cert = decompose_multivariate_charp(alpha);
        CHECK(cert.pairs.size() <= 4 * n);  // field bound
        CHECK(verify_certificate(cert, alpha).ok);
      }
    }
    SeriesContext dctx{make_dual_numbers(5), n, 4};
    for (int rep = 0; rep < 3; ++rep) {
      Automorphism alpha = random_gi(dctx, rng());
      auto cert = decompose_multivariate_charp(alpha);
      CHECK(cert.pairs.size() <= n * (n + 3));  // general bound
      CHECK(verify_certificate(cert, alpha).ok);
    }
  }
}

TEST_CASE("characteristics 2 and 3 are rejected") {
  for (std::uint64_t p : {2u, 3u}) {
    SeriesContext c1{make_prime_field(p), 1, 4};
    Automorphism a({uni(c1, {{1, 1}, {2, 1}})});
    CHECK_THROWS_AS(decompose_univariate_charp(a), UnsupportedCharacteristic);

    SeriesContext c2{make_prime_field(p), 2, 3};
    Automorphism b({X(c2, 1) + X(c2, 2) * X(c2, 2), X(c2, 2)});
    CHECK_THROWS_AS(decompose_multivariate_charp(b),
                    UnsupportedCharacteristic);
  }

  // The characteristic-p entry points refuse characteristic 0 too.
  SeriesContext q1{make_rationals(), 1, 4};
  Automorphism qa({uni(q1, {{1, 1}, {2, 1}})});
  CHECK_THROWS_AS(decompose_univariate_charp(qa), UsageError);
}

TEST_CASE("decomposition requires the identity linear part") {
  SeriesContext ctx{make_prime_field(5), 1, 4};
  Automorphism two({uni(ctx, {{1, 2}, {2, 1}})});
  CHECK_THROWS_AS(decompose_univariate_charp(two), NotInGI);
  SeriesContext qctx{make_rationals(), 1, 4};
  Automorphism qtwo({uni(qctx, {{1, 2}, {2, 1}})});
  CHECK_THROWS_AS(decompose_char0(qtwo, default_char0_params(qctx.ring)),
                  NotInGI);
}
