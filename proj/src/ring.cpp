#include "tpsa/ring.hpp"

#include <cctype>
#include <cstdlib>

namespace tpsa {
namespace {

using boost::multiprecision::cpp_int;

bool is_prime_u64(std::uint64_t p) {
  if (p < 2) return false;
  if (p % 2 == 0) return p == 2;
  for (std::uint64_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

void validate_modulus(std::uint64_t p) {
  if (p >= (std::uint64_t{1} << 31))
    throw UsageError("modulus too large, need p < 2^31");
  if (!is_prime_u64(p)) throw UsageError("modulus must be prime");
}

// Operands in [0, p) with p < 2^31, so the product fits in 64 bits.
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return (a * b) % p;
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  // Extended Euclid on (a, p); gcd is 1 since p is prime and a != 0.
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(p);
  std::int64_t new_r = static_cast<std::int64_t>(a);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

std::uint64_t embed_mod(std::int64_t k, std::uint64_t p) {
  std::int64_t m = k % static_cast<std::int64_t>(p);
  if (m < 0) m += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(m);
}

const Rational& rat(const RingValue& x) {
  return std::get<Rational>(x.payload());
}
FpElem fp(const RingValue& x) { return std::get<FpElem>(x.payload()); }
DualElem dual(const RingValue& x) { return std::get<DualElem>(x.payload()); }

class RationalRing final : public Ring {
public:
  RingKind kind() const noexcept override { return RingKind::Rationals; }
  std::uint64_t characteristic() const noexcept override { return 0; }
  std::string descriptor() const override { return "q"; }

  RingValue make(Rational q) const {
    return RingValue(shared_from_this(), std::move(q));
  }
  RingValue zero() const override { return make(Rational(0)); }
  RingValue one() const override { return make(Rational(1)); }
  RingValue embed_integer(std::int64_t k) const override {
    return make(Rational(k));
  }

  RingValue add(const RingValue& x, const RingValue& y) const override {
    Rational r = rat(x) + rat(y);
    return make(std::move(r));
  }
  RingValue sub(const RingValue& x, const RingValue& y) const override {
    Rational r = rat(x) - rat(y);
    return make(std::move(r));
  }
  RingValue mul(const RingValue& x, const RingValue& y) const override {
    Rational r = rat(x) * rat(y);
    return make(std::move(r));
  }
  RingValue neg(const RingValue& x) const override {
    Rational r = -rat(x);
    return make(std::move(r));
  }

  bool equal(const RingValue& x, const RingValue& y) const override {
    return rat(x) == rat(y);
  }
  bool is_zero(const RingValue& x) const override { return rat(x) == 0; }
  bool is_unit(const RingValue& x) const override { return rat(x) != 0; }
  RingValue invert_unit(const RingValue& x) const override {
    if (rat(x) == 0) throw NotAUnit("0 in " + descriptor());
    Rational r = Rational(1) / rat(x);
    return make(std::move(r));
  }

  std::string to_text(const RingValue& x) const override {
    const Rational& q = rat(x);
    cpp_int num = numerator(q);
    cpp_int den = denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
  }
};

class PrimeFieldRing final : public Ring {
public:
  explicit PrimeFieldRing(std::uint64_t p) : p_(p) {}

  RingKind kind() const noexcept override { return RingKind::PrimeField; }
  std::uint64_t characteristic() const noexcept override { return p_; }
  std::string descriptor() const override {
    return "fp:" + std::to_string(p_);
  }

  RingValue make(std::uint64_t v) const {
    return RingValue(shared_from_this(), FpElem{v});
  }
  RingValue zero() const override { return make(0); }
  RingValue one() const override { return make(1 % p_); }
  RingValue embed_integer(std::int64_t k) const override {
    return make(embed_mod(k, p_));
  }

  RingValue add(const RingValue& x, const RingValue& y) const override {
    return make(add_mod(fp(x).v, fp(y).v, p_));
  }
  RingValue sub(const RingValue& x, const RingValue& y) const override {
    return make(sub_mod(fp(x).v, fp(y).v, p_));
  }
  RingValue mul(const RingValue& x, const RingValue& y) const override {
    return make(mul_mod(fp(x).v, fp(y).v, p_));
  }
  RingValue neg(const RingValue& x) const override {
    return make(sub_mod(0, fp(x).v, p_));
  }

  bool equal(const RingValue& x, const RingValue& y) const override {
    return fp(x).v == fp(y).v;
  }
  bool is_zero(const RingValue& x) const override { return fp(x).v == 0; }
  bool is_unit(const RingValue& x) const override { return fp(x).v != 0; }
  RingValue invert_unit(const RingValue& x) const override {
    if (fp(x).v == 0) throw NotAUnit("0 in " + descriptor());
    return make(inv_mod(fp(x).v, p_));
  }

  std::string to_text(const RingValue& x) const override {
    return std::to_string(fp(x).v);
  }

private:
  std::uint64_t p_;
};

class DualNumberRing final : public Ring {
public:
  explicit DualNumberRing(std::uint64_t p) : p_(p) {}

  RingKind kind() const noexcept override { return RingKind::DualNumbers; }
  std::uint64_t characteristic() const noexcept override { return p_; }
  std::string descriptor() const override {
    return "dual:" + std::to_string(p_);
  }

  RingValue make(std::uint64_t a, std::uint64_t b) const {
    return RingValue(shared_from_this(), DualElem{a, b});
  }
  RingValue zero() const override { return make(0, 0); }
  RingValue one() const override { return make(1 % p_, 0); }
  RingValue embed_integer(std::int64_t k) const override {
    return make(embed_mod(k, p_), 0);
  }

  RingValue add(const RingValue& x, const RingValue& y) const override {
    DualElem u = dual(x), v = dual(y);
    return make(add_mod(u.a, v.a, p_), add_mod(u.b, v.b, p_));
  }
  RingValue sub(const RingValue& x, const RingValue& y) const override {
    DualElem u = dual(x), v = dual(y);
    return make(sub_mod(u.a, v.a, p_), sub_mod(u.b, v.b, p_));
  }
  RingValue mul(const RingValue& x, const RingValue& y) const override {
    // (a+b eps)(c+d eps) = ac + (ad+bc) eps since eps^2 = 0.
    DualElem u = dual(x), v = dual(y);
    return make(mul_mod(u.a, v.a, p_),
                add_mod(mul_mod(u.a, v.b, p_), mul_mod(u.b, v.a, p_), p_));
  }
  RingValue neg(const RingValue& x) const override {
    DualElem u = dual(x);
    return make(sub_mod(0, u.a, p_), sub_mod(0, u.b, p_));
  }

  bool equal(const RingValue& x, const RingValue& y) const override {
    DualElem u = dual(x), v = dual(y);
    return u.a == v.a && u.b == v.b;
  }
  bool is_zero(const RingValue& x) const override {
    DualElem u = dual(x);
    return u.a == 0 && u.b == 0;
  }
  bool is_unit(const RingValue& x) const override { return dual(x).a != 0; }
  RingValue invert_unit(const RingValue& x) const override {
    DualElem u = dual(x);
    if (u.a == 0) throw NotAUnit("nilpotent in " + descriptor());
    // (a+b eps)^-1 = a^-1 - a^-2 b eps.
    std::uint64_t ai = inv_mod(u.a, p_);
    return make(ai, sub_mod(0, mul_mod(mul_mod(ai, ai, p_), u.b, p_), p_));
  }

  std::string to_text(const RingValue& x) const override {
    DualElem u = dual(x);
    if (u.b == 0) return std::to_string(u.a);
    std::string eps = u.b == 1 ? "eps" : std::to_string(u.b) + "*eps";
    if (u.a == 0) return eps;
    return std::to_string(u.a) + "+" + eps;
  }
  bool text_needs_parens(const RingValue& x) const override {
    DualElem u = dual(x);
    return u.a != 0 && u.b != 0;
  }

private:
  std::uint64_t p_;
};

}  // namespace

RingValue pow(const RingValue& x, std::uint64_t k) {
  RingValue acc = x.ring()->one();
  RingValue base = x;
  while (k != 0) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

bool multiplicative_order_at_least(const RingValue& x, std::uint64_t k) {
  const RingValue one = x.ring()->one();
  RingValue q = x;
  for (std::uint64_t j = 1; j < k; ++j) {
    if (q == one) return false;
    q = q * x;
  }
  return true;
}

RingValue find_prime_field_element_of_order(const RingPtr& ring,
                                            std::uint64_t k) {
  std::uint64_t p = ring->characteristic();
  if (p == 0) return ring->embed_integer(2);  // infinite order
  for (std::uint64_t t = 2; t < p; ++t) {
    RingValue cand = ring->embed_integer(static_cast<std::int64_t>(t));
    if (multiplicative_order_at_least(cand, k)) return cand;
  }
  throw NotFound("no embedded integer of multiplicative order >= " +
                 std::to_string(k) + " in " + ring->descriptor());
}

std::pair<RingValue, RingValue> bezout_combine(const RingValue& s,
                                               const RingValue& t,
                                               const RingValue& a) {
  const RingPtr& ring = s.ring();
  if (!ring->same(*t.ring()) || !ring->same(*a.ring()))
    throw RingMismatch("bezout_combine operands");
  if (ring->is_unit(s)) return {a * ring->invert_unit(s), ring->zero()};
  if (ring->is_unit(t)) return {ring->zero(), a * ring->invert_unit(t)};
  throw NoCombination("neither generator is a unit in " + ring->descriptor());
}

RingPtr make_rationals() { return std::make_shared<RationalRing>(); }

RingPtr make_prime_field(std::uint64_t p) {
  validate_modulus(p);
  return std::make_shared<PrimeFieldRing>(p);
}

RingPtr make_dual_numbers(std::uint64_t p) {
  validate_modulus(p);
  return std::make_shared<DualNumberRing>(p);
}

RingPtr parse_ring_descriptor(std::string_view text) {
  if (text == "q") return make_rationals();
  auto parse_p = [&](std::string_view body) -> std::uint64_t {
    if (body.empty()) throw UsageError("missing modulus in ring descriptor");
    std::uint64_t p = 0;
    for (char c : body) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw UsageError("bad modulus in ring descriptor: " +
                         std::string(text));
      p = p * 10 + static_cast<std::uint64_t>(c - '0');
      if (p >= (std::uint64_t{1} << 31))
        throw UsageError("modulus too large, need p < 2^31");
    }
    return p;
  };
  if (text.rfind("fp:", 0) == 0) return make_prime_field(parse_p(text.substr(3)));
  if (text.rfind("dual:", 0) == 0)
    return make_dual_numbers(parse_p(text.substr(5)));
  throw UsageError("unknown ring descriptor: " + std::string(text) +
                   " (expected q, fp:<p> or dual:<p>)");
}

namespace {

// Shared scanner for element literals. Column numbers are 1-based.
struct ElemScanner {
  std::string_view s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  [[noreturn]] void fail(const std::string& expected) {
    throw ParseError(1, i + 1, "expected " + expected + " in element literal");
  }
  cpp_int integer() {
    skip_ws();
    bool negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      negative = s[i] == '-';
      ++i;
    }
    skip_ws();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      fail("digits");
    cpp_int v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + (s[i] - '0');
      ++i;
    }
    return negative ? -v : v;
  }
  bool try_word(std::string_view w) {
    skip_ws();
    if (s.substr(i, w.size()) != w) return false;
    i += w.size();
    return true;
  }
};

RingValue embed_cpp_int(const RingPtr& ring, const cpp_int& v) {
  if (ring->kind() == RingKind::Rationals)
    return RingValue(ring, Rational(v));
  std::uint64_t p = ring->characteristic();
  cpp_int m = v % p;
  if (m < 0) m += p;
  return ring->embed_integer(static_cast<std::int64_t>(m.convert_to<std::uint64_t>()));
}

}  // namespace

RingValue parse_ring_element(const RingPtr& ring, std::string_view text) {
  ElemScanner sc{text};
  RingValue result;
  switch (ring->kind()) {
    case RingKind::Rationals: {
      cpp_int num = sc.integer();
      if (sc.peek() == '/') {
        ++sc.i;
        cpp_int den = sc.integer();
        if (den == 0) sc.fail("nonzero denominator");
        result = RingValue(ring, Rational(num, den));
      } else {
        result = RingValue(ring, Rational(num));
      }
      break;
    }
    case RingKind::PrimeField: {
      result = embed_cpp_int(ring, sc.integer());
      break;
    }
    case RingKind::DualNumbers: {
      // Forms: "a", "a+b*eps", "a-b*eps", "b*eps", "eps", "-eps".
      cpp_int a = 0, b = 0;
      bool lead_minus = false;
      if (sc.peek() == '-' || sc.peek() == '+') {
        lead_minus = sc.peek() == '-';
        ++sc.i;
      }
      if (sc.try_word("eps")) {
        b = lead_minus ? -1 : 1;
      } else {
        cpp_int first = sc.integer();
        if (lead_minus) first = -first;
        if (sc.peek() == '*') {
          ++sc.i;
          if (!sc.try_word("eps")) sc.fail("eps");
          b = first;
        } else {
          a = first;
          if (sc.peek() == '+' || sc.peek() == '-') {
            bool minus = sc.peek() == '-';
            ++sc.i;
            if (sc.try_word("eps")) {
              b = minus ? -1 : 1;
            } else {
              cpp_int coef = sc.integer();
              if (minus) coef = -coef;
              if (sc.peek() != '*') sc.fail("'*'");
              ++sc.i;
              if (!sc.try_word("eps")) sc.fail("eps");
              b = coef;
            }
          }
        }
      }
      auto residue = [&](const cpp_int& v) {
        cpp_int m = v % ring->characteristic();
        if (m < 0) m += ring->characteristic();
        return m.convert_to<std::uint64_t>();
      };
      result = RingValue(ring, DualElem{residue(a), residue(b)});
      break;
    }
    case RingKind::SeriesRing:
      throw UsageError("series-ring elements have no text literal form");
  }
  if (!sc.done()) sc.fail("end of element literal");
  return result;
}

}  // namespace tpsa
