#include "tpsa/randomgen.hpp"

#include "tpsa/solver.hpp"

namespace tpsa {
namespace {

// Small exact values; denominators kept tiny so deep products stay cheap.
const int kRationalNums[] = {0, 1, -1, 2, -2, 1, -1, 1, -1, 3};
const int kRationalDens[] = {1, 1, 1, 1, 1, 2, 2, 3, 3, 1};

RingValue random_rational(const RingPtr& ring, std::mt19937_64& rng) {
  std::size_t i = rng() % (sizeof(kRationalNums) / sizeof(int));
  return RingValue(ring, Rational(kRationalNums[i], kRationalDens[i]));
}

}  // namespace

RingValue random_element(const RingPtr& ring, std::mt19937_64& rng) {
  switch (ring->kind()) {
    case RingKind::Rationals:
      return random_rational(ring, rng);
    case RingKind::PrimeField:
      return ring->embed_integer(
          static_cast<std::int64_t>(rng() % ring->characteristic()));
    case RingKind::DualNumbers: {
      std::uint64_t p = ring->characteristic();
      std::int64_t a = static_cast<std::int64_t>(rng() % p);
      std::int64_t b = static_cast<std::int64_t>(rng() % p);
      RingValue eps = RingValue(ring, DualElem{0, 1});
      return ring->embed_integer(a) + ring->embed_integer(b) * eps;
    }
    case RingKind::SeriesRing:
      throw UsageError("random series-ring elements are not supported");
  }
  throw UsageError("unknown ring kind");
}

RingValue random_unit(const RingPtr& ring, std::mt19937_64& rng) {
  for (;;) {
    RingValue v = random_element(ring, rng);
    if (ring->is_unit(v)) return v;
  }
}

Series random_series(const SeriesContext& ctx, std::uint32_t min_degree,
                     std::uint32_t var_mask, std::mt19937_64& rng) {
  Series out(ctx);
  for (std::uint32_t m = min_degree; m <= ctx.prec; ++m) {
    for (const Monomial& e : monomials_of_degree(ctx.nvars, m)) {
      bool allowed = true;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0 && !(var_mask & (std::uint32_t{1} << i))) {
          allowed = false;
          break;
        }
      if (allowed) out.add_term(e, random_element(ctx.ring, rng));
    }
  }
  return out;
}

Automorphism random_gi(const SeriesContext& ctx, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Series> images;
  images.reserve(ctx.nvars);
  for (std::uint32_t i = 1; i <= ctx.nvars; ++i)
    images.push_back(Series::variable(ctx, i) +
                     random_series(ctx, 2, ~std::uint32_t{0}, rng));
  return Automorphism(std::move(images));
}

Automorphism random_automorphism(const SeriesContext& ctx,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (;;) {
    std::vector<RingValue> lin;
    lin.reserve(std::size_t{ctx.nvars} * ctx.nvars);
    for (std::uint32_t i = 0; i < ctx.nvars * ctx.nvars; ++i)
      lin.push_back(random_element(ctx.ring, rng));
    if (!try_invert_matrix(ctx.ring, ctx.nvars, lin)) continue;
    std::vector<Series> images;
    images.reserve(ctx.nvars);
    for (std::uint32_t i = 0; i < ctx.nvars; ++i) {
      Series im = random_series(ctx, 2, ~std::uint32_t{0}, rng);
      for (std::uint32_t j = 0; j < ctx.nvars; ++j) {
        Monomial e(ctx.nvars, 0);
        e[j] = 1;
        im.add_term(e, lin[i * ctx.nvars + j]);
      }
      images.push_back(std::move(im));
    }
    return Automorphism(std::move(images));
  }
}

}  // namespace tpsa
