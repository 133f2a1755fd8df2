#include "tpsa/decompose.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tpsa/errors.hpp"
#include "tpsa/series_ring.hpp"

namespace tpsa {
namespace {

RingValue embed(const RingPtr& ring, std::int64_t k) {
  return ring->embed_integer(k);
}

std::vector<Series> identity_images(const SeriesContext& ctx) {
  std::vector<Series> v;
  v.reserve(ctx.nvars);
  for (std::uint32_t i = 1; i <= ctx.nvars; ++i)
    v.push_back(Series::variable(ctx, i));
  return v;
}

std::vector<Series> with_prec_all(const std::vector<Series>& v,
                                  std::uint32_t w) {
  std::vector<Series> out;
  out.reserve(v.size());
  for (const Series& s : v) out.push_back(s.with_prec(w));
  return out;
}

// Images of (outer . inner): each inner image evaluated at outer's images.
std::vector<Series> compose_images(const std::vector<Series>& outer,
                                   const std::vector<Series>& inner) {
  SubstitutionEngine eng(outer);
  std::vector<Series> out;
  out.reserve(inner.size());
  for (const Series& f : inner) out.push_back(eng.eval(f));
  return out;
}

void add_homogeneous(std::vector<Series>& images,
                     const HomogeneousMatrix& part) {
  const auto mons =
      monomials_of_degree(part.context().nvars, part.degree());
  for (std::size_t i = 0; i < part.rows(); ++i)
    for (std::size_t j = 0; j < part.cols(); ++j)
      if (!is_zero(part.at(i, j))) images[i].add_term(mons[j], part.at(i, j));
}

CommutatorPair conjugate_pair(const CommutatorPair& pr,
                              const Automorphism& tau) {
  return {conjugate(pr.beta, tau), conjugate(pr.gamma, tau)};
}

// All decompositions funnel through this: assemble, verify, or die. A bad
// certificate is never returned to the caller.
CommutatorCertificate finish_certificate(const Automorphism& target,
                                         std::vector<CommutatorPair> pairs,
                                         const char* where) {
  CommutatorCertificate cert = make_certificate(target, std::move(pairs));
  VerifyResult vr = verify_certificate(cert, target);
  if (!vr.ok)
    throw InternalContradiction(std::string(where) +
                                ": assembled certificate failed verification");
  return cert;
}

void require_gi(const Automorphism& a, const char* who) {
  if (!a.in_GI())
    throw NotInGI(std::string(who) +
                  ": the linear part must be the identity matrix");
}

// ---------------------------------------------------------------------------
// Characteristic 0: one commutator, degree by degree.
//
// The governing equation is beta . gamma = alpha . (gamma . beta) with
// linear parts b*Id and c*Id. At degree m its residual is affine in the
// degree-m parts of beta and gamma with entrywise-scalar coefficients; the
// scalars are extracted by probing a one-variable proxy of the same
// equation (alpha := identity) rather than transcribing formulas, so the
// orientation of every sign is decided by the composition code itself.
// ---------------------------------------------------------------------------

// (s, t) with residual_m = s*gamma_m + t*beta_m + constant.
std::pair<RingValue, RingValue> char0_step_scalars(const Char0Params& params,
                                                   std::uint32_t m) {
  const RingPtr& ring = params.b.ring();
  SeriesContext uctx{ring, 1, m};
  auto residual = [&](const std::vector<RingValue>& u) {
    Series beta(uctx), gamma(uctx);
    beta.add_term(Monomial{1}, params.b);
    beta.add_term(Monomial{m}, u[1]);
    gamma.add_term(Monomial{1}, params.c);
    gamma.add_term(Monomial{m}, u[0]);
    Series lhs = substitute(gamma, {beta});  // image of beta . gamma
    Series rhs = substitute(beta, {gamma});  // image of gamma . beta
    Series diff = lhs - rhs;
    return std::vector<RingValue>{diff.coeff(Monomial{m})};
  };
  AffineSystem sys = probe_affine(residual, 2, ring);
  return {sys.coef(0, 0), sys.coef(0, 1)};
}

HomogeneousMatrix char0_residual(const std::vector<Series>& alpha_w,
                                 const std::vector<Series>& beta_w,
                                 const std::vector<Series>& gamma_w,
                                 std::uint32_t m) {
  std::vector<Series> lhs = compose_images(beta_w, gamma_w);
  std::vector<Series> rhs =
      compose_images(alpha_w, compose_images(gamma_w, beta_w));
  std::vector<Series> diff;
  diff.reserve(lhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i)
    diff.push_back(lhs[i] - rhs[i]);
  return homogeneous_component(diff, m);
}

// Fills in the degree-m parts of beta and gamma so the residual vanishes at
// degree m, then re-checks that it does.
void char0_advance(std::vector<Series>& beta_im, std::vector<Series>& gamma_im,
                   const Automorphism& alpha, const Char0Params& params,
                   std::uint32_t m) {
  std::vector<Series> alpha_w = with_prec_all(alpha.images(), m);
  HomogeneousMatrix r0 = char0_residual(alpha_w, with_prec_all(beta_im, m),
                                        with_prec_all(gamma_im, m), m);
  if (!r0.is_zero()) {
    auto [s, t] = char0_step_scalars(params, m);
    auto [cpart, bpart] = bezout_solve_componentwise(s, t, -r0);
    add_homogeneous(gamma_im, cpart);
    add_homogeneous(beta_im, bpart);
  }
  HomogeneousMatrix check = char0_residual(alpha_w, with_prec_all(beta_im, m),
                                           with_prec_all(gamma_im, m), m);
  if (!check.is_zero())
    throw InternalContradiction(
        "commutator equation failed to close at degree " + std::to_string(m));
}

std::pair<Automorphism, Automorphism> char0_solve(const Automorphism& alpha,
                                                  const Char0Params& params,
                                                  std::uint32_t through) {
  require_gi(alpha, "characteristic-0 decomposition");
  validate_char0_params(params, through);
  const SeriesContext& ctx = alpha.context();
  std::vector<Series> beta_im, gamma_im;
  for (std::uint32_t i = 1; i <= ctx.nvars; ++i) {
    beta_im.push_back(Series::variable(ctx, i).scaled(params.b));
    gamma_im.push_back(Series::variable(ctx, i).scaled(params.c));
  }
  for (std::uint32_t m = 2; m <= through; ++m)
    char0_advance(beta_im, gamma_im, alpha, params, m);
  return {Automorphism(std::move(beta_im)), Automorphism(std::move(gamma_im))};
}

}  // namespace

Char0Params default_char0_params(const RingPtr& ring) {
  return {embed(ring, 2), embed(ring, 3)};
}

void validate_char0_params(const Char0Params& params,
                           std::uint32_t max_degree) {
  const RingPtr& ring = params.b.ring();
  if (!is_unit(params.b) || !is_unit(params.c))
    throw BadUnits("the linear scalars b and c must be units");
  const RingValue one = ring->one();
  for (std::uint32_t m = 2; m <= max_degree; ++m) {
    auto [s, t] = char0_step_scalars(params, m);
    try {
      bezout_combine(s, t, one);
    } catch (const NoCombination&) {
      throw BadUnits(
          "b^m - b and c - c^m admit no unit combination at degree m = " +
          std::to_string(m));
    }
  }
}

std::pair<Automorphism, Automorphism> approx_commutator(
    const Automorphism& alpha, const Char0Params& params, std::uint32_t m) {
  const std::uint32_t prec = alpha.context().prec;
  if (m < 2 || m > prec)
    throw UsageError("approximation degree must lie in [2, prec]");
  auto pair = char0_solve(alpha, params, m);
  Automorphism k = commutator(pair.first, pair.second);
  for (std::size_t i = 0; i < alpha.images().size(); ++i)
    if (k.image(i).truncated_above(m) != alpha.image(i).truncated_above(m))
      throw InternalContradiction(
          "approximate commutator disagrees with the target below its "
          "advertised degree");
  return pair;
}

CommutatorCertificate decompose_char0(const Automorphism& alpha,
                                      const Char0Params& params) {
  auto pair = char0_solve(alpha, params, alpha.context().prec);
  return finish_certificate(
      alpha, {{std::move(pair.first), std::move(pair.second)}},
      "characteristic-0 decomposition");
}

// ---------------------------------------------------------------------------
// One variable, characteristic p >= 5.
//
// Stage 1 normalizes the target: a preliminary pair (built with the
// characteristic-0 recursion at a scalar of multiplicative order >= 4)
// absorbs alpha up to degree 3, leaving a target psi with psi_2 = 2 and
// psi_3 = 4. Stage 2 grows series beta and gamma (seeds b1 = c1 = -1,
// b2 = 1, c2 = 0, b3 = c3 = 0) so that the governing equation
//   beta . gamma . psi = gamma . beta
// holds degree by degree; then psi = [gamma^-1, beta^-1]. Even degrees are
// processed in pairs of equations (degrees m and m+1). The regular step
// solves for (c_m, b_m); when m = 2 mod p that system is singular and the
// wraparound step solves for (c_m - b_m, c_{m-1}, b_{m-1}) instead,
// rewriting the previous step's defaults at index m-1 (which no earlier
// equation depends on). All systems are extracted by probing.
// ---------------------------------------------------------------------------

namespace {

Series series_from_coeffs(const SeriesContext& wctx,
                          const std::vector<RingValue>& a) {
  Series s(wctx);
  const std::uint32_t top =
      std::min<std::uint32_t>(wctx.prec,
                              static_cast<std::uint32_t>(a.size()) - 1);
  for (std::uint32_t k = 1; k <= top; ++k)
    if (!is_zero(a[k])) s.add_term(Monomial{k}, a[k]);
  return s;
}

// Residual of the governing equation at the listed degrees, computed at
// working precision max(degrees).
std::vector<RingValue> univariate_residual(
    const UnivariateCoefficients& coeffs, const Series& psi_image,
    const std::vector<std::uint32_t>& degrees) {
  const SeriesContext& base = psi_image.context();
  std::uint32_t w = 0;
  for (std::uint32_t d : degrees) w = std::max(w, d);
  SeriesContext wctx{base.ring, 1, w};
  Series bser = series_from_coeffs(wctx, coeffs.b);
  Series cser = series_from_coeffs(wctx, coeffs.c);
  Series psi_w = psi_image.with_prec(w);
  Series inner = substitute(cser, {bser});     // image of beta . gamma
  Series lhs = substitute(psi_w, {inner});     // image of beta . gamma . psi
  Series rhs = substitute(bser, {cser});       // image of gamma . beta
  Series diff = lhs - rhs;
  std::vector<RingValue> out;
  out.reserve(degrees.size());
  for (std::uint32_t d : degrees) out.push_back(diff.coeff(Monomial{d}));
  return out;
}

AffineSystem probe_step_rows(const UnivariateCoefficients& coeffs,
                             const Series& psi_image, std::uint32_t m,
                             bool wraparound,
                             const std::vector<std::uint32_t>& rows) {
  const RingPtr& ring = psi_image.context().ring;
  std::uint32_t need = 0;
  for (std::uint32_t d : rows) need = std::max(need, d);
  if (coeffs.b.size() <= need || coeffs.c.size() <= need)
    throw UsageError("coefficient lists too short for the requested step");
  auto residual = [&coeffs, &psi_image, m, wraparound,
                   rows](const std::vector<RingValue>& u) {
    UnivariateCoefficients work = coeffs;
    if (wraparound) {
      work.c[m] = u[0];
      work.b[m] = u[0].ring()->zero();
      work.c[m - 1] = u[1];
      work.b[m - 1] = u[2];
    } else {
      work.c[m] = u[0];
      work.b[m] = u[1];
    }
    return univariate_residual(work, psi_image, rows);
  };
  return probe_affine(residual, wraparound ? 3 : 2, ring);
}

void require_rows_zero(const UnivariateCoefficients& coeffs,
                       const Series& psi_image,
                       const std::vector<std::uint32_t>& rows) {
  for (const RingValue& v : univariate_residual(coeffs, psi_image, rows))
    if (!is_zero(v))
      throw InternalContradiction(
          "univariate recursion: equation failed to close");
}

void require_charp(const RingPtr& ring, const char* who) {
  const std::uint64_t p = ring->characteristic();
  if (p == 0)
    throw UsageError(std::string(who) +
                     ": needs positive characteristic (use the "
                     "characteristic-0 construction instead)");
  if (p < 5)
    throw UnsupportedCharacteristic(std::string(who) +
                                    ": characteristic must be at least 5");
}

}  // namespace

UnivariateCoefficients seeded_univariate_coefficients(
    const RingPtr& ring, std::uint32_t max_degree) {
  UnivariateCoefficients uc;
  uc.b.assign(max_degree + 1, ring->zero());
  uc.c.assign(max_degree + 1, ring->zero());
  if (max_degree >= 1) {
    uc.b[1] = embed(ring, -1);
    uc.c[1] = embed(ring, -1);
  }
  if (max_degree >= 2) uc.b[2] = ring->one();
  return uc;
}

AffineSystem probe_univariate_step(const UnivariateCoefficients& coeffs,
                                   const Series& psi_image, std::uint32_t m,
                                   bool wraparound) {
  if (psi_image.context().nvars != 1)
    throw UsageError("the univariate step needs a one-variable target");
  if (psi_image.context().prec < m + 1)
    throw UsageError("target precision too small for the degree-m step");
  return probe_step_rows(coeffs, psi_image, m, wraparound, {m, m + 1});
}

CommutatorCertificate decompose_univariate_charp(const Automorphism& alpha) {
  const SeriesContext& ctx = alpha.context();
  if (ctx.nvars != 1)
    throw UsageError("the univariate construction needs exactly one variable");
  require_charp(ctx.ring, "univariate decomposition");
  require_gi(alpha, "univariate decomposition");
  const std::uint32_t D = ctx.prec;
  const std::uint64_t p = ctx.ring->characteristic();
  if (alpha.is_identity())
    return finish_certificate(alpha, {}, "univariate decomposition");

  const RingPtr& ring = ctx.ring;
  std::vector<CommutatorPair> pairs;

  // Stage 1: normalize to psi_2 = 2 (and psi_3 = 4 when D >= 3).
  Automorphism psi = alpha;
  const RingValue two = embed(ring, 2), four = embed(ring, 4);
  const bool normalized =
      alpha.image(0).coeff(Monomial{2}) == two &&
      (D < 3 || alpha.image(0).coeff(Monomial{3}) == four);
  if (!normalized) {
    Series phi_im = Series::variable(ctx, 1);
    phi_im.add_term(Monomial{2}, two);
    if (D >= 3) phi_im.add_term(Monomial{3}, four);
    Automorphism phi({phi_im});
    RingValue t = find_prime_field_element_of_order(ring, 4);
    Automorphism delta = compose(alpha, invert(phi));
    auto [b0, g0] =
        approx_commutator(delta, Char0Params{t, t}, std::min<std::uint32_t>(3, D));
    psi = compose(invert(commutator(b0, g0)), alpha);
    pairs.push_back({std::move(b0), std::move(g0)});
    if (psi.image(0).coeff(Monomial{2}) != two ||
        (D >= 3 && psi.image(0).coeff(Monomial{3}) != four))
      throw InternalContradiction(
          "stage-1 normalization missed the required low-degree form");
  }

  // Stage 2.
  UnivariateCoefficients uc = seeded_univariate_coefficients(ring, D);
  const Series& psi_im = psi.image(0);
  {
    std::vector<std::uint32_t> first{2};
    if (D >= 3) first.push_back(3);
    require_rows_zero(uc, psi_im, first);
  }
  for (std::uint32_t m = 4; m <= D; m += 2) {
    const bool wrap = (m % p) == (2 % p);
    if (m + 1 <= D) {
      AffineSystem sys = probe_step_rows(uc, psi_im, m, wrap, {m, m + 1});
      std::vector<RingValue> x = solve_exact(sys);
      if (wrap) {
        uc.c[m] = x[0];
        uc.b[m] = ring->zero();
        uc.c[m - 1] = x[1];
        uc.b[m - 1] = x[2];
        require_rows_zero(uc, psi_im, {m - 1, m, m + 1});
      } else {
        uc.c[m] = x[0];
        uc.b[m] = x[1];
        require_rows_zero(uc, psi_im, {m, m + 1});
      }
    } else {
      // Final even degree: only one equation left, (c_m, b_m) suffice.
      AffineSystem sys = probe_step_rows(uc, psi_im, m, false, {m});
      std::vector<RingValue> x = solve_exact(sys);
      uc.c[m] = x[0];
      uc.b[m] = x[1];
      require_rows_zero(uc, psi_im, {m});
    }
  }
  {
    std::vector<std::uint32_t> all;
    for (std::uint32_t d = 2; d <= D; ++d) all.push_back(d);
    if (!all.empty()) require_rows_zero(uc, psi_im, all);
  }

  Automorphism beta({series_from_coeffs(ctx, uc.b)});
  Automorphism gamma({series_from_coeffs(ctx, uc.c)});
  pairs.push_back({invert(gamma), invert(beta)});
  return finish_certificate(alpha, std::move(pairs),
                            "univariate decomposition");
}

// ---------------------------------------------------------------------------
// Elementary automorphisms: X_i -> X_i + g, one pair.
//
// For i = 1 take beta: X1 -> X1 + X2 and gamma: X2 -> X2 + g. They satisfy
// beta . eps . gamma = gamma . beta, hence eps = [beta^-1, gamma]. Other
// positions are conjugated to position 1 by a transposition.
// ---------------------------------------------------------------------------

namespace {

CommutatorPair elementary_position1_pair(const SeriesContext& ctx,
                                         const Series& g) {
  std::vector<Series> beta_im = identity_images(ctx);
  beta_im[0] = beta_im[0] + Series::variable(ctx, 2);
  std::vector<Series> gamma_im = identity_images(ctx);
  gamma_im[1] = gamma_im[1] + g;
  Automorphism beta(std::move(beta_im));
  Automorphism gamma(std::move(gamma_im));
  return {invert(beta), std::move(gamma)};
}

}  // namespace

CommutatorCertificate decompose_elementary(const Automorphism& eps) {
  const SeriesContext& ctx = eps.context();
  if (ctx.nvars < 2)
    throw UsageError(
        "the elementary construction needs at least two variables");
  std::size_t moved = ctx.nvars;  // sentinel: none
  for (std::size_t i = 0; i < ctx.nvars; ++i) {
    if (eps.image(i) ==
        Series::variable(ctx, static_cast<std::uint32_t>(i + 1)))
      continue;
    if (moved != ctx.nvars)
      throw BadElementaryData("more than one variable moves");
    moved = i;
  }
  if (moved == ctx.nvars)
    return finish_certificate(eps, {}, "elementary decomposition");
  const std::uint32_t i1 = static_cast<std::uint32_t>(moved + 1);
  Series g = eps.image(moved) - Series::variable(ctx, i1);
  elementary(i1, g);  // validates admissibility (BadElementaryData)
  CommutatorPair pair = [&] {
    if (i1 == 1) return elementary_position1_pair(ctx, g);
    Automorphism tau = transposition(ctx, 1, i1);
    Series g1 = substitute(g, tau.images());
    return conjugate_pair(elementary_position1_pair(ctx, g1), tau);
  }();
  return finish_certificate(eps, {std::move(pair)},
                            "elementary decomposition");
}

// ---------------------------------------------------------------------------
// Unit scalings: X1 -> X1*(1+f), f free of X1 with zero constant term.
//
// Building blocks, each a single pair via a commutation relation:
//  - basic: beta: X1 -> X1*(1+X2), gamma: X2 -> X2 + f + X2*f satisfy
//    alpha . beta . gamma = gamma . beta, so alpha = [gamma, beta]. Needs
//    1 + (coefficient of X2 in f) to be a unit; always true for f in the
//    square of (X2..Xn).
//  - negative case (field, coefficient of X2 equal to -1): beta1: X1 ->
//    X1 - X1*X2, gamma1: X2 -> X2 + (-1+X2)*f satisfy alpha . beta1 .
//    gamma1 = gamma1 . beta1; needs 2 to be a unit.
//  - single-factor scaling s: X1 -> X1*(1+xi*X_j): gamma: X_j -> 2*X_j +
//    xi*X_j^2 satisfies s . s . gamma = gamma . s, so s = [gamma, s].
// Over a field one basic/negative pair suffices (after moving the first
// variable with nonzero linear coefficient into position 2). In general
// alpha splits as a basic part times single-factor scalings: at most n
// pairs.
// ---------------------------------------------------------------------------

namespace {

// f with X1 -> X1*(1+f); rejects anything not of that shape.
Series unit_scaling_multiplier(const Automorphism& a) {
  const SeriesContext& ctx = a.context();
  for (std::size_t i = 1; i < ctx.nvars; ++i)
    if (a.image(i) !=
        Series::variable(ctx, static_cast<std::uint32_t>(i + 1)))
      throw UsageError("unit scaling moves a variable other than X1");
  Series diff = a.image(0) - Series::variable(ctx, 1);
  Series f(ctx);
  for (const auto& [e, c] : diff.terms()) {
    if (e[0] != 1)
      throw UsageError("the first image is not X1 times a series in the "
                       "other variables");
    Monomial stripped = e;
    stripped[0] = 0;
    if (total_degree(stripped) == 0)
      throw UsageError("the scaling multiplier must have constant term 1");
    f.add_term(stripped, c);
  }
  return f;
}

CommutatorPair scaling_pair_basic(const SeriesContext& ctx, const Series& f) {
  std::vector<Series> beta_im = identity_images(ctx);
  beta_im[0] =
      beta_im[0] + Series::variable(ctx, 1) * Series::variable(ctx, 2);
  std::vector<Series> gamma_im = identity_images(ctx);
  gamma_im[1] = gamma_im[1] + f + Series::variable(ctx, 2) * f;
  Automorphism beta(std::move(beta_im));
  Automorphism gamma(std::move(gamma_im));
  return {std::move(gamma), std::move(beta)};
}

CommutatorPair scaling_pair_negative_case(const SeriesContext& ctx,
                                          const Series& f) {
  std::vector<Series> beta_im = identity_images(ctx);
  beta_im[0] =
      beta_im[0] - Series::variable(ctx, 1) * Series::variable(ctx, 2);
  std::vector<Series> gamma_im = identity_images(ctx);
  Series x2 = Series::variable(ctx, 2);
  gamma_im[1] = gamma_im[1] - f + x2 * f;
  Automorphism beta(std::move(beta_im));
  Automorphism gamma(std::move(gamma_im));
  return {std::move(gamma), std::move(beta)};
}

CommutatorPair single_factor_scaling_pair(const SeriesContext& ctx,
                                          std::uint32_t j,
                                          const RingValue& xi) {
  std::vector<Series> s_im = identity_images(ctx);
  s_im[0] = s_im[0] +
            (Series::variable(ctx, 1) * Series::variable(ctx, j)).scaled(xi);
  std::vector<Series> gamma_im = identity_images(ctx);
  Series xj = Series::variable(ctx, j);
  gamma_im[j - 1] = xj.scaled(embed(ctx.ring, 2)) + (xj * xj).scaled(xi);
  Automorphism s(std::move(s_im));
  Automorphism gamma(std::move(gamma_im));
  return {std::move(gamma), std::move(s)};
}

std::vector<CommutatorPair> unit_scaling_pairs(const Automorphism& alpha);

std::vector<CommutatorPair> unit_scaling_pairs_field(const Automorphism& alpha,
                                                     const Series& f) {
  const SeriesContext& ctx = alpha.context();
  std::vector<RingValue> xi(ctx.nvars + 1, ctx.ring->zero());
  for (std::uint32_t j = 2; j <= ctx.nvars; ++j) {
    Monomial e(ctx.nvars, 0);
    e[j - 1] = 1;
    xi[j] = f.coeff(e);
  }
  std::uint32_t j0 = 0;
  for (std::uint32_t j = 2; j <= ctx.nvars; ++j)
    if (!is_zero(xi[j])) {
      j0 = j;
      break;
    }
  if (j0 == 0) return {scaling_pair_basic(ctx, f)};
  if (j0 != 2) {
    Automorphism tau = transposition(ctx, 2, j0);
    std::vector<CommutatorPair> sub =
        unit_scaling_pairs(conjugate(alpha, tau));
    std::vector<CommutatorPair> out;
    out.reserve(sub.size());
    for (const CommutatorPair& pr : sub) out.push_back(conjugate_pair(pr, tau));
    return out;
  }
  if (xi[2] == embed(ctx.ring, -1))
    return {scaling_pair_negative_case(ctx, f)};
  return {scaling_pair_basic(ctx, f)};
}

std::vector<CommutatorPair> unit_scaling_pairs_general(
    const Automorphism& alpha, const Series& f) {
  const SeriesContext& ctx = alpha.context();
  Series one_s = Series::constant(ctx, ctx.ring->one());
  Series denom = one_s;
  std::vector<std::pair<std::uint32_t, RingValue>> factors;
  for (std::uint32_t j = 2; j <= ctx.nvars; ++j) {
    Monomial e(ctx.nvars, 0);
    e[j - 1] = 1;
    RingValue xij = f.coeff(e);
    if (is_zero(xij)) continue;
    factors.emplace_back(j, xij);
    denom = denom * (one_s + Series::variable(ctx, j).scaled(xij));
  }
  Series theta = (one_s + f) * invert_series_unit(denom);
  Series f2 = theta - one_s;  // in the square of (X2..Xn)
  std::vector<CommutatorPair> out;
  if (!f2.is_zero()) out.push_back(scaling_pair_basic(ctx, f2));
  for (const auto& [j, xij] : factors)
    out.push_back(single_factor_scaling_pair(ctx, j, xij));
  return out;
}

std::vector<CommutatorPair> unit_scaling_pairs(const Automorphism& alpha) {
  const SeriesContext& ctx = alpha.context();
  Series f = unit_scaling_multiplier(alpha);
  if (f.is_zero()) return {};
  const RingKind kind = ctx.ring->kind();
  if (kind == RingKind::Rationals || kind == RingKind::PrimeField)
    return unit_scaling_pairs_field(alpha, f);
  return unit_scaling_pairs_general(alpha, f);
}

}  // namespace

CommutatorCertificate decompose_unit_scaling(const Automorphism& alpha) {
  const SeriesContext& ctx = alpha.context();
  if (ctx.nvars < 2)
    throw UsageError("the unit-scaling construction needs at least two "
                     "variables");
  if (!is_unit(embed(ctx.ring, 2)))
    throw UnsupportedRing("the unit-scaling construction needs 2 to be a "
                          "unit");
  return finish_certificate(alpha, unit_scaling_pairs(alpha),
                            "unit-scaling decomposition");
}

// ---------------------------------------------------------------------------
// Single-variable maps X1 -> X1 + h, other variables fixed.
//
// Split h = g + X1*f_1 + X1^2*f_2 + ... with every piece free of X1. Then
// alpha = alpha'' . alpha' . eps where eps: X1 -> X1 + g is elementary,
// alpha': X1 -> X1*(1+f_1) is a unit scaling, and alpha'': X1 -> X1 +
// sum_j X1^j*theta_j with theta_j = (1+f_1)^-1 * f_j is, read over the
// coefficient ring R' of series in X2..Xn, a one-variable map with identity
// linear part; the univariate construction handles it over R' (coefficients
// carried at full precision; only constants of R' are ever inverted), and
// its pairs are lifted back, truncating by total degree.
// ---------------------------------------------------------------------------

namespace {

// Series free of X1, re-read in the coefficient ring's context (variables
// shifted down by one).
Series strip_first_variable(const Series& s, const SeriesContext& inner) {
  Series out(inner);
  for (const auto& [e, c] : s.terms())
    out.add_term(Monomial(e.begin() + 1, e.end()), c);
  return out;
}

Automorphism lift_univariate(const Automorphism& u,
                             const TruncatedSeriesRing& rp,
                             const SeriesContext& full) {
  std::vector<Series> images = identity_images(full);
  Series im1(full);
  for (const auto& [e, w] : u.image(0).terms()) {
    const std::uint32_t k = e[0];
    const Series& inner_s = rp.unwrap(w);
    for (const auto& [ie, c] : inner_s.terms()) {
      Monomial lifted;
      lifted.reserve(full.nvars);
      lifted.push_back(k);
      lifted.insert(lifted.end(), ie.begin(), ie.end());
      im1.add_term(lifted, c);  // drops total degree > prec
    }
  }
  images[0] = std::move(im1);
  return Automorphism(std::move(images));
}

}  // namespace

CommutatorCertificate decompose_single_variable(const Automorphism& alpha) {
  const SeriesContext& ctx = alpha.context();
  if (ctx.nvars < 2)
    throw UsageError("the single-variable construction needs at least two "
                     "variables");
  require_charp(ctx.ring, "single-variable decomposition");
  for (std::size_t i = 1; i < ctx.nvars; ++i)
    if (alpha.image(i) !=
        Series::variable(ctx, static_cast<std::uint32_t>(i + 1)))
      throw UsageError("single-variable map moves a variable other than X1");
  require_gi(alpha, "single-variable decomposition");
  Series h = alpha.image(0) - Series::variable(ctx, 1);
  if (h.is_zero())
    return finish_certificate(alpha, {}, "single-variable decomposition");

  const std::uint32_t D = ctx.prec;
  Series g(ctx);
  std::vector<Series> f(D + 1, Series(ctx));
  for (const auto& [e, c] : h.terms()) {
    if (e[0] == 0) {
      g.add_term(e, c);
    } else {
      Monomial stripped = e;
      stripped[0] = 0;
      f[e[0]].add_term(stripped, c);
    }
  }

  std::vector<CommutatorPair> pairs;

  // alpha'' through the univariate construction over R'.
  Series one_s = Series::constant(ctx, ctx.ring->one());
  Series inv1f = invert_series_unit(one_s + f[1]);
  SeriesContext inner{ctx.ring, ctx.nvars - 1, D};
  auto rp = make_series_ring(inner);
  SeriesContext uctx{rp, 1, D};
  Series u_im(uctx);
  u_im.add_term(Monomial{1}, rp->one());
  bool higher = false;
  for (std::uint32_t j = 2; j <= D; ++j) {
    if (f[j].is_zero()) continue;
    Series theta = inv1f * f[j];
    if (theta.is_zero()) continue;
    u_im.add_term(Monomial{j}, rp->wrap(strip_first_variable(theta, inner)));
    higher = true;
  }
  if (higher) {
    CommutatorCertificate cu = decompose_univariate_charp(Automorphism({u_im}));
    for (const CommutatorPair& pr : cu.pairs)
      pairs.push_back(
          {lift_univariate(pr.beta, *rp, ctx), lift_univariate(pr.gamma, *rp, ctx)});
  }

  // alpha': X1 -> X1*(1+f_1).
  if (!f[1].is_zero()) {
    std::vector<Series> images = identity_images(ctx);
    images[0] = images[0] + Series::variable(ctx, 1) * f[1];
    CommutatorCertificate ca = decompose_unit_scaling(Automorphism(std::move(images)));
    for (const CommutatorPair& pr : ca.pairs) pairs.push_back(pr);
  }

  // eps: X1 -> X1 + g.
  if (!g.is_zero()) {
    CommutatorCertificate ce = decompose_elementary(elementary(1, g));
    for (const CommutatorPair& pr : ce.pairs) pairs.push_back(pr);
  }

  return finish_certificate(alpha, std::move(pairs),
                            "single-variable decomposition");
}

// ---------------------------------------------------------------------------
// Full decomposition in several variables.
// ---------------------------------------------------------------------------

std::vector<Automorphism> factor_triangular(const Automorphism& alpha) {
  require_gi(alpha, "triangular factorization");
  const SeriesContext& ctx = alpha.context();
  Automorphism q = Automorphism::identity(ctx);
  std::vector<Automorphism> factors;
  factors.reserve(ctx.nvars);
  for (std::uint32_t k = 0; k < ctx.nvars; ++k) {
    std::vector<Series> images = identity_images(ctx);
    images[k] = substitute(alpha.image(k), q.images());
    Automorphism fk(std::move(images));
    q = compose(invert(fk), q);
    factors.push_back(std::move(fk));
  }
  Automorphism acc = Automorphism::identity(ctx);
  for (const Automorphism& fk : factors) acc = compose(acc, fk);
  if (acc != alpha)
    throw InternalContradiction(
        "triangular factors do not multiply back to the target");
  return factors;
}

CommutatorCertificate decompose_multivariate_charp(const Automorphism& alpha) {
  const SeriesContext& ctx = alpha.context();
  if (ctx.nvars < 2)
    throw UsageError("the several-variable construction needs at least two "
                     "variables (use the univariate one for n = 1)");
  require_charp(ctx.ring, "several-variable decomposition");
  require_gi(alpha, "several-variable decomposition");
  std::vector<CommutatorPair> pairs;
  for (std::uint32_t k = 0; const Automorphism& fk : factor_triangular(alpha)) {
    ++k;
    if (fk.is_identity()) continue;
    if (k == 1) {
      CommutatorCertificate sub = decompose_single_variable(fk);
      for (CommutatorPair& pr : sub.pairs) pairs.push_back(std::move(pr));
    } else {
      Automorphism tau = transposition(ctx, 1, k);
      CommutatorCertificate sub =
          decompose_single_variable(conjugate(fk, tau));
      for (const CommutatorPair& pr : sub.pairs)
        pairs.push_back(conjugate_pair(pr, tau));
    }
  }
  return finish_certificate(alpha, std::move(pairs),
                            "several-variable decomposition");
}

}  // namespace tpsa
