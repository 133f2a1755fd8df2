#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

#include "tpsa/errors.hpp"

namespace tpsa {

// Pluggable exact commutative ring. All arithmetic everywhere in this library
// is exact; there is no rounding anywhere in the system.
//
// Shipped instances: rationals, prime field F_p, dual numbers F_p[eps]/(eps^2),
// and a truncated power series ring over any of those (see series_ring.hpp).

using Rational = boost::multiprecision::cpp_rational;

enum class RingKind { Rationals, PrimeField, DualNumbers, SeriesRing };

class Ring;
class RingValue;
using RingPtr = std::shared_ptr<const Ring>;

// Residue in [0, p).
struct FpElem {
  std::uint64_t v = 0;
};

// a + b*eps with eps^2 = 0, components in [0, p).
struct DualElem {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
};

class Ring : public std::enable_shared_from_this<Ring> {
public:
  virtual ~Ring() = default;

  virtual RingKind kind() const noexcept = 0;
  // 0 for rationals, p otherwise (dual numbers and series rings inherit p).
  virtual std::uint64_t characteristic() const noexcept = 0;
  // Canonical descriptor: "q", "fp:<p>", "dual:<p>", "series(<base>;<n>;<D>)".
  virtual std::string descriptor() const = 0;

  bool same(const Ring& other) const {
    return this == &other || descriptor() == other.descriptor();
  }

  virtual RingValue zero() const = 0;
  virtual RingValue one() const = 0;
  virtual RingValue embed_integer(std::int64_t k) const = 0;

  virtual RingValue add(const RingValue& x, const RingValue& y) const = 0;
  virtual RingValue sub(const RingValue& x, const RingValue& y) const = 0;
  virtual RingValue mul(const RingValue& x, const RingValue& y) const = 0;
  virtual RingValue neg(const RingValue& x) const = 0;

  virtual bool equal(const RingValue& x, const RingValue& y) const = 0;
  virtual bool is_zero(const RingValue& x) const = 0;
  virtual bool is_unit(const RingValue& x) const = 0;
  // Throws NotAUnit unless is_unit(x).
  virtual RingValue invert_unit(const RingValue& x) const = 0;

  // Canonical text rendering ("1/2", "3", "1+4*eps", ...).
  virtual std::string to_text(const RingValue& x) const = 0;
  // True when to_text output must be parenthesised inside a series term
  // (it contains a '+' or '-' of its own).
  virtual bool text_needs_parens(const RingValue&) const { return false; }
};

// A value always knows its ring; binary operations check both operands come
// from the same ring (RingMismatch otherwise). Values are immutable.
class RingValue {
public:
  using Payload = std::variant<std::monostate, Rational, FpElem, DualElem,
                               std::shared_ptr<const void>>;

  RingValue() = default;  // empty value; arithmetic on it throws
  RingValue(RingPtr ring, Payload payload)
      : ring_(std::move(ring)), payload_(std::move(payload)) {}

  bool empty() const noexcept { return ring_ == nullptr; }

  const RingPtr& ring() const {
    require_nonempty();
    return ring_;
  }

  const Payload& payload() const { return payload_; }

  friend RingValue operator+(const RingValue& x, const RingValue& y) {
    return x.ring_for(y).add(x, y);
  }
  friend RingValue operator-(const RingValue& x, const RingValue& y) {
    return x.ring_for(y).sub(x, y);
  }
  friend RingValue operator*(const RingValue& x, const RingValue& y) {
    return x.ring_for(y).mul(x, y);
  }
  RingValue operator-() const {
    require_nonempty();
    return ring_->neg(*this);
  }
  friend bool operator==(const RingValue& x, const RingValue& y) {
    return x.ring_for(y).equal(x, y);
  }
  friend bool operator!=(const RingValue& x, const RingValue& y) {
    return !(x == y);
  }

private:
  void require_nonempty() const {
    if (!ring_) throw UsageError("operation on an empty ring value");
  }

  const Ring& ring_for(const RingValue& other) const {
    require_nonempty();
    other.require_nonempty();
    if (ring_.get() != other.ring_.get() && !ring_->same(*other.ring_))
      throw RingMismatch(ring_->descriptor() + " vs " +
                         other.ring_->descriptor());
    return *ring_;
  }

  RingPtr ring_;
  Payload payload_;
};

inline bool is_zero(const RingValue& x) { return x.ring()->is_zero(x); }
inline bool is_one(const RingValue& x) { return x == x.ring()->one(); }
inline bool is_unit(const RingValue& x) { return x.ring()->is_unit(x); }
inline RingValue invert_unit(const RingValue& x) {
  return x.ring()->invert_unit(x);
}
inline std::string to_text(const RingValue& x) { return x.ring()->to_text(x); }

// x^k by binary powering, k >= 0.
RingValue pow(const RingValue& x, std::uint64_t k);

// True iff x^j != 1 for all 1 <= j < k. Intended for units in the embedded
// prime field (or any unit; powering is exact regardless).
bool multiplicative_order_at_least(const RingValue& x, std::uint64_t k);

// Smallest embedded integer t >= 2 with multiplicative order >= k;
// deterministic scan. Throws NotFound when no such element exists (finite
// characteristic with too small a unit group).
RingValue find_prime_field_element_of_order(const RingPtr& ring,
                                            std::uint64_t k);

// Returns (x, y) with x*s + y*t = a. Policy: if s is a unit, (a*s^-1, 0);
// else if t is a unit, (0, a*t^-1); else NoCombination. The shipped ring
// instances never need more than the one-generator-unit case.
std::pair<RingValue, RingValue> bezout_combine(const RingValue& s,
                                               const RingValue& t,
                                               const RingValue& a);

// Factories. Prime moduli are validated (p prime, p < 2^31).
RingPtr make_rationals();
RingPtr make_prime_field(std::uint64_t p);
RingPtr make_dual_numbers(std::uint64_t p);

// Parses "q", "fp:<p>" or "dual:<p>" (the CLI ring grammar).
RingPtr parse_ring_descriptor(std::string_view text);

// Element text parsing for the shipped scalar rings: "a/b", "a", "a+b*eps".
// Series-ring elements are not parseable from text (internal use only).
RingValue parse_ring_element(const RingPtr& ring, std::string_view text);

}  // namespace tpsa
