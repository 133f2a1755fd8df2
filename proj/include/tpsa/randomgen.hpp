#pragma once

#include <cstdint>
#include <random>

#include "tpsa/autgroup.hpp"
#include "tpsa/series.hpp"

namespace tpsa {

// Deterministic cross-platform sampling (mt19937_64 with caller seeds; no
// std::uniform_int_distribution, whose output is implementation-defined).

// Small-denominator rationals for char 0, uniform residues for prime fields,
// uniform component pairs for dual numbers.
RingValue random_element(const RingPtr& ring, std::mt19937_64& rng);
RingValue random_unit(const RingPtr& ring, std::mt19937_64& rng);

// Series with random coefficients for every monomial with total degree in
// [min_degree, ctx.prec]. var_mask selects which variables may appear
// (bit i = X_{i+1}); zero coefficients are kept sparse naturally.
Series random_series(const SeriesContext& ctx, std::uint32_t min_degree,
                     std::uint32_t var_mask, std::mt19937_64& rng);

inline Series random_series(const SeriesContext& ctx, std::uint32_t min_degree,
                            std::mt19937_64& rng) {
  return random_series(ctx, min_degree, ~std::uint32_t{0}, rng);
}

// Identity linear part plus random coefficients at every degree >= 2.
Automorphism random_gi(const SeriesContext& ctx, std::uint64_t seed);

// Random invertible linear part plus random higher terms.
Automorphism random_automorphism(const SeriesContext& ctx, std::uint64_t seed);

}  // namespace tpsa
