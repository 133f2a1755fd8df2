#include "tpsa/series_ring.hpp"

namespace tpsa {

TruncatedSeriesRing::TruncatedSeriesRing(SeriesContext inner)
    : inner_(std::move(inner)) {}

RingValue TruncatedSeriesRing::wrap(Series s) const {
  require_same_context(s.context(), inner_);
  std::shared_ptr<const void> p = std::make_shared<const Series>(std::move(s));
  return RingValue(shared_from_this(), std::move(p));
}

const Series& TruncatedSeriesRing::unwrap(const RingValue& x) const {
  const auto& p = std::get<std::shared_ptr<const void>>(x.payload());
  return *static_cast<const Series*>(p.get());
}

std::string TruncatedSeriesRing::descriptor() const {
  return "series(" + inner_.ring->descriptor() + ";" +
         std::to_string(inner_.nvars) + ";" + std::to_string(inner_.prec) +
         ")";
}

RingValue TruncatedSeriesRing::zero() const { return wrap(Series::zero(inner_)); }

RingValue TruncatedSeriesRing::one() const {
  return wrap(Series::constant(inner_, inner_.ring->one()));
}

RingValue TruncatedSeriesRing::embed_integer(std::int64_t k) const {
  return wrap(Series::constant(inner_, inner_.ring->embed_integer(k)));
}

RingValue TruncatedSeriesRing::add(const RingValue& x,
                                   const RingValue& y) const {
  return wrap(unwrap(x) + unwrap(y));
}

RingValue TruncatedSeriesRing::sub(const RingValue& x,
                                   const RingValue& y) const {
  return wrap(unwrap(x) - unwrap(y));
}

RingValue TruncatedSeriesRing::mul(const RingValue& x,
                                   const RingValue& y) const {
  return wrap(unwrap(x) * unwrap(y));
}

RingValue TruncatedSeriesRing::neg(const RingValue& x) const {
  return wrap(-unwrap(x));
}

bool TruncatedSeriesRing::equal(const RingValue& x, const RingValue& y) const {
  return unwrap(x) == unwrap(y);
}

bool TruncatedSeriesRing::is_zero(const RingValue& x) const {
  return unwrap(x).is_zero();
}

bool TruncatedSeriesRing::is_unit(const RingValue& x) const {
  return inner_.ring->is_unit(unwrap(x).constant_term());
}

RingValue TruncatedSeriesRing::invert_unit(const RingValue& x) const {
  if (!is_unit(x))
    throw NotAUnit("series constant term is not a unit of " +
                   inner_.ring->descriptor());
  return wrap(invert_series_unit(unwrap(x)));
}

std::string TruncatedSeriesRing::to_text(const RingValue& x) const {
  return emit_series(unwrap(x));
}

bool TruncatedSeriesRing::text_needs_parens(const RingValue& x) const {
  std::string t = to_text(x);
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] == '+' || t[i] == '-' || t[i] == '*') return true;
  return false;
}

std::shared_ptr<const TruncatedSeriesRing> make_series_ring(
    SeriesContext inner) {
  return std::make_shared<TruncatedSeriesRing>(std::move(inner));
}

}  // namespace tpsa
