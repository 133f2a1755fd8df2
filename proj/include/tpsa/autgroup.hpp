#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tpsa/series.hpp"

namespace tpsa {

// Augmented continuous endomorphisms and automorphisms of the truncated
// series ring, i.e. tuples of images of the variables with zero constant
// terms. An automorphism additionally has an invertible linear part; it
// lies in the identity-linear-part subgroup when that part is the identity
// matrix.

class Endomorphism {
public:
  explicit Endomorphism(std::vector<Series> images);

  const SeriesContext& context() const { return images_[0].context(); }
  const std::vector<Series>& images() const { return images_; }
  const Series& image(std::size_t i) const { return images_[i]; }

  HomogeneousMatrix linear_part() const {
    return homogeneous_component(images_, 1);
  }
  bool is_identity() const;

private:
  std::vector<Series> images_;
};

class Automorphism {
public:
  // NotAutomorphism unless the linear part is invertible.
  explicit Automorphism(Endomorphism endo);
  explicit Automorphism(std::vector<Series> images)
      : Automorphism(Endomorphism(std::move(images))) {}

  static Automorphism identity(const SeriesContext& ctx);

  const SeriesContext& context() const { return endo_.context(); }
  const std::vector<Series>& images() const { return endo_.images(); }
  const Series& image(std::size_t i) const { return endo_.image(i); }
  const Endomorphism& endo() const { return endo_; }

  HomogeneousMatrix linear_part() const { return endo_.linear_part(); }
  bool in_GI() const;
  bool is_identity() const { return endo_.is_identity(); }

  friend bool operator==(const Automorphism& a, const Automorphism& b);
  friend bool operator!=(const Automorphism& a, const Automorphism& b) {
    return !(a == b);
  }

private:
  Endomorphism endo_;
};

// (outer . inner): the map applying inner first as a ring map is realized on
// images by evaluating inner's image series at outer's images, so
// result.image(i) = inner.image(i) evaluated at outer.images(). Linear parts
// multiply in the reversed order:
// linear_part(outer . inner) = linear_part(inner) * linear_part(outer).
Endomorphism compose(const Endomorphism& outer, const Endomorphism& inner);
Automorphism compose(const Automorphism& outer, const Automorphism& inner);

// Group inverse modulo degree prec+1, built degree by degree from the
// inverted linear part.
Automorphism invert(const Automorphism& a);

// [x, y] = x . y . x^-1 . y^-1 (the convention recorded in certificates).
Automorphism commutator(const Automorphism& x, const Automorphism& y);

// X_i -> X_i + g, other variables fixed; g must not involve X_i and must
// have order >= 2 (BadElementaryData otherwise).
Automorphism elementary(std::uint32_t i, const Series& g);

// X_i -> X_sigma(i); sigma is 1-based, sigma[i-1] = sigma(i).
Automorphism permutation_auto(const SeriesContext& ctx,
                              const std::vector<std::uint32_t>& sigma);
// The transposition swapping X_i and X_j.
Automorphism transposition(const SeriesContext& ctx, std::uint32_t i,
                           std::uint32_t j);

// tau . a . tau^-1.
Automorphism conjugate(const Automorphism& a, const Automorphism& tau);

struct CommutatorPair {
  Automorphism beta;
  Automorphism gamma;
};

inline constexpr const char* kCommutatorConvention = "[x,y] = x*y*x^-1*y^-1";

// Claim: product over pairs, left to right, of commutator(beta, gamma)
// equals the hashed target. Pairs carry full images so verification needs
// nothing from the producer.
struct CommutatorCertificate {
  SeriesContext context;
  std::string convention = kCommutatorConvention;
  std::uint64_t target_hash = 0;
  std::vector<CommutatorPair> pairs;
};

std::uint64_t fnv1a64(std::string_view s);
// Hash of the canonical text of the context and images; advisory label that
// travels with a certificate.
std::uint64_t automorphism_hash(const Automorphism& a);

CommutatorCertificate make_certificate(const Automorphism& target,
                                       std::vector<CommutatorPair> pairs);

struct Discrepancy {
  std::uint32_t degree = 0;
  Monomial monomial;
  std::size_t image_index = 0;
  RingValue expected;  // target coefficient
  RingValue got;       // product-of-commutators coefficient
};

struct VerifyResult {
  bool ok = false;
  std::optional<Discrepancy> discrepancy;  // first mismatch in graded order
};

// Recomputes the product of commutators with compose/invert only and
// compares against the target exactly. Never calls decomposition code.
VerifyResult verify_certificate(const CommutatorCertificate& cert,
                                const Automorphism& target);

}  // namespace tpsa
