#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tpsa/ring.hpp"

namespace tpsa {

// Multivariate formal power series over an exact ring, truncated by TOTAL
// degree: every coefficient of total degree > prec is identified with zero.
// That is the only truncation offered; it matches the adic topology the
// automorphism group lives in.

struct SeriesContext {
  RingPtr ring;
  std::uint32_t nvars = 0;
  std::uint32_t prec = 0;

  bool same(const SeriesContext& o) const {
    return nvars == o.nvars && prec == o.prec && ring->same(*o.ring);
  }
  std::string describe() const;
};

void require_same_context(const SeriesContext& a, const SeriesContext& b);

// Exponent vector, one entry per variable.
using Monomial = std::vector<std::uint32_t>;

std::uint32_t total_degree(const Monomial& e);

// Graded order: total degree ascending, ties by lex with X1 > ... > Xn
// descending, so within one degree X1^m comes first. This is also the
// column order of HomogeneousMatrix and the emitted term order.
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

// Number of degree-m monomials in nvars variables: C(m+nvars-1, nvars-1).
std::size_t monomial_count(std::uint32_t nvars, std::uint32_t m);

// All degree-m monomials, lexicographically descending (X1^m first).
std::vector<Monomial> monomials_of_degree(std::uint32_t nvars,
                                          std::uint32_t m);

// Position of e within monomials_of_degree(nvars, total_degree(e)).
std::size_t monomial_rank(const Monomial& e);

class Series {
public:
  using TermMap = std::map<Monomial, RingValue, MonomialLess>;

  explicit Series(SeriesContext ctx) : ctx_(std::move(ctx)) {}

  static Series zero(const SeriesContext& ctx) { return Series(ctx); }
  static Series constant(const SeriesContext& ctx, const RingValue& c);
  // X_i, 1-based.
  static Series variable(const SeriesContext& ctx, std::uint32_t i);
  static Series monomial(const SeriesContext& ctx, Monomial e,
                         const RingValue& c);

  const SeriesContext& context() const { return ctx_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Zero when the monomial is absent (or exceeds prec).
  RingValue coeff(const Monomial& e) const;
  RingValue constant_term() const;
  // Adds c to the coefficient of e, keeping canonical (zero-free) form.
  void add_term(const Monomial& e, const RingValue& c);

  // Largest total degree with a nonzero term; 0 for the zero series.
  std::uint32_t top_degree() const;
  // Smallest total degree with a nonzero term; prec+1 for the zero series.
  std::uint32_t order() const;

  // Same context, terms of total degree > k removed.
  Series truncated_above(std::uint32_t k) const;
  // Re-contexted copy; terms beyond the new precision are dropped. Raising
  // precision treats the (unknown) tail as zero; internal use only.
  Series with_prec(std::uint32_t new_prec) const;

  Series scaled(const RingValue& c) const;

  friend Series operator+(const Series& f, const Series& g);
  friend Series operator-(const Series& f, const Series& g);
  friend Series operator*(const Series& f, const Series& g);
  Series operator-() const;
  friend bool operator==(const Series& f, const Series& g);
  friend bool operator!=(const Series& f, const Series& g) {
    return !(f == g);
  }

private:
  SeriesContext ctx_;
  TermMap terms_;
};

// Substitutes images into series, memoizing powers of each image across
// calls. All images must be augmented (zero constant term), which makes
// degree-k output coefficients depend only on degree <= k input data.
class SubstitutionEngine {
public:
  // Throws NotAugmented on a nonzero constant term, ContextMismatch when
  // the images disagree among themselves.
  explicit SubstitutionEngine(std::vector<Series> images);

  const SeriesContext& context() const { return images_[0].context(); }
  const std::vector<Series>& images() const { return images_; }

  // f(images...); f must share the engine context.
  Series eval(const Series& f);

  // images[var]^k, memoized; var is 0-based, k >= 0.
  const Series& power(std::size_t var, std::uint32_t k);

private:
  std::vector<Series> images_;
  std::vector<std::vector<Series>> powers_;
};

Series substitute(const Series& f, const std::vector<Series>& images);

// Degree-m coefficient of the composite gamma-then-beta in one variable,
// computed from plain coefficient lists (b[0] is the degree-1 coefficient,
// and so on). Evaluates sum over r of b_r times the sum over ordered
// compositions m = j_1+...+j_r of c_{j_1}...c_{j_r}; the inner sum is
// accumulated as the degree-m coefficient of the r-th power of the c-series
// on plain vectors. Independent oracle for substitute: shares no series
// machinery with it.
RingValue univariate_composition_coefficient(const std::vector<RingValue>& b,
                                             const std::vector<RingValue>& c,
                                             std::uint32_t m);

// The degree-m coefficients of an n-tuple of series, as an n x S_m matrix.
// Column j corresponds to monomials_of_degree(nvars, m)[j].
class HomogeneousMatrix {
public:
  HomogeneousMatrix(SeriesContext ctx, std::uint32_t degree);

  const SeriesContext& context() const { return ctx_; }
  std::uint32_t degree() const { return degree_; }
  std::size_t rows() const { return ctx_.nvars; }
  std::size_t cols() const { return cols_; }

  const RingValue& at(std::size_t row, std::size_t col) const {
    return entries_[row * cols_ + col];
  }
  RingValue& at(std::size_t row, std::size_t col) {
    return entries_[row * cols_ + col];
  }

  bool is_zero() const;

  friend HomogeneousMatrix operator+(const HomogeneousMatrix& a,
                                     const HomogeneousMatrix& b);
  friend HomogeneousMatrix operator-(const HomogeneousMatrix& a,
                                     const HomogeneousMatrix& b);
  HomogeneousMatrix operator-() const;
  HomogeneousMatrix scaled(const RingValue& c) const;
  friend bool operator==(const HomogeneousMatrix& a,
                         const HomogeneousMatrix& b);
  friend bool operator!=(const HomogeneousMatrix& a,
                         const HomogeneousMatrix& b) {
    return !(a == b);
  }

private:
  SeriesContext ctx_;
  std::uint32_t degree_;
  std::size_t cols_;
  std::vector<RingValue> entries_;
};

// Degree-m coefficient matrix of an n-tuple of series (m <= prec).
HomogeneousMatrix homogeneous_component(const std::vector<Series>& tuple,
                                        std::uint32_t m);

// Sum of the given homogeneous pieces as an n-tuple of series.
std::vector<Series> from_components(
    const SeriesContext& ctx, const std::vector<HomogeneousMatrix>& parts);

// Row polynomials of a matrix, i.e. from_components of just this piece.
std::vector<Series> rows_as_series(const HomogeneousMatrix& m);

// Pairing of homogeneous pieces: each row polynomial of L is evaluated at
// the row polynomials of M, giving a degree l*m matrix. Satisfies
// star(star(L,M),N) = star(L,star(M,N)) and reduces to the matrix product
// L*M when l = m = 1. Throws DegreeOverflow when l*m exceeds the precision.
HomogeneousMatrix star(const HomogeneousMatrix& L, const HomogeneousMatrix& M);

// Reciprocal of a series whose constant term is a unit, by the truncated
// geometric series in (1 - u^-1 f).
Series invert_series_unit(const Series& f);

// Canonical text: terms in graded-lex order, "X2^3", "2*X1^2*X2",
// "1/2*X1 - X2", dual coefficients parenthesized as "(1+2*eps)*X1".
std::string emit_series(const Series& f);

}  // namespace tpsa
