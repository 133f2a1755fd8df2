#pragma once

#include <utility>
#include <vector>

#include "tpsa/autgroup.hpp"
#include "tpsa/solver.hpp"

namespace tpsa {

// Constructive decomposition of identity-linear-part automorphisms into
// products of commutators. Three families:
//   - characteristic 0: one commutator, any number of variables;
//   - characteristic p >= 5, one variable: at most two commutators;
//   - characteristic p >= 5, several variables: a triangular factorization
//     into single-variable maps, each resolved through elementary and
//     unit-scaling building blocks (at most n(n+3) pairs, 4n over a field).
// Every function verifies its certificate before returning and throws
// InternalContradiction rather than emitting a bad one.

// Linear-part scalars for the characteristic-0 construction. Solvability at
// degree m needs a unit combination of b^m - b and c - c^m.
struct Char0Params {
  RingValue b;
  RingValue c;
};

Char0Params default_char0_params(const RingPtr& ring);  // b=2, c=3

// BadUnits naming the first degree in [2, max_degree] whose unit combination
// fails; also rejects non-unit b or c.
void validate_char0_params(const Char0Params& params, std::uint32_t max_degree);

// One pair (beta, gamma) with linear parts b*Id, c*Id and
// commutator(beta, gamma) = alpha modulo degree prec+1.
CommutatorCertificate decompose_char0(const Automorphism& alpha,
                                      const Char0Params& params);

// Same degree recursion stopped after degree m: commutator(beta, gamma)
// agrees with alpha through total degree m, higher degrees unconstrained.
std::pair<Automorphism, Automorphism> approx_commutator(
    const Automorphism& alpha, const Char0Params& params, std::uint32_t m);

// Stage-2 state of the univariate characteristic-p recursion: coefficient
// lists of the two working series, indexed by degree (entry [k] is the
// degree-k coefficient; [0] is unused). Seeds: b1=c1=-1, b2=1, c2=0,
// b3=c3=0, everything else 0.
struct UnivariateCoefficients {
  std::vector<RingValue> b;
  std::vector<RingValue> c;
};

UnivariateCoefficients seeded_univariate_coefficients(const RingPtr& ring,
                                                      std::uint32_t max_degree);

// Probed affine system of the degree-m step against the normalized target
// image psi (univariate, prec >= m+1, psi_2 = 2 expected). Rows are the
// residuals of the governing equations at degrees m and m+1; columns are
// (c_m, b_m) for a regular step, or (c_m - b_m, c_{m-1}, b_{m-1}) for a
// wraparound step (m = 2 mod p, where the regular system is singular).
AffineSystem probe_univariate_step(const UnivariateCoefficients& coeffs,
                                   const Series& psi_image, std::uint32_t m,
                                   bool wraparound);

// Certificate with at most 2 pairs for alpha in the identity-linear-part
// group over one variable, characteristic p >= 5.
CommutatorCertificate decompose_univariate_charp(const Automorphism& alpha);

// One pair for an elementary automorphism (n >= 2).
CommutatorCertificate decompose_elementary(const Automorphism& eps);

// X1 -> X1*(1+f) with f free of X1 and without constant term: exactly one
// pair over a field (characteristic not 2), at most n pairs in general
// (requires 2 to be a unit; UnsupportedRing otherwise).
CommutatorCertificate decompose_unit_scaling(const Automorphism& alpha);

// X1 -> X1 + h with h of order >= 2, other variables fixed; n >= 2,
// characteristic p >= 5. At most n+3 pairs (4 over a field).
CommutatorCertificate decompose_single_variable(const Automorphism& alpha);

// Full identity-linear-part decomposition for n >= 2, characteristic
// p >= 5: at most n(n+3) pairs, 4n over a field.
CommutatorCertificate decompose_multivariate_charp(const Automorphism& alpha);

// Triangular factors: factor k moves only X_k and the left-to-right
// composition of the factors equals alpha (self-checked).
std::vector<Automorphism> factor_triangular(const Automorphism& alpha);

}  // namespace tpsa
