#pragma once

#include "tpsa/ring.hpp"
#include "tpsa/series.hpp"

namespace tpsa {

// The truncated series ring R[[X1..Xn]] (mod degree prec+1) packaged as a
// coefficient Ring, so univariate series over it model R[[Y]][[X]]-style
// nesting. Units are exactly the elements with unit constant term.
class TruncatedSeriesRing final : public Ring {
public:
  explicit TruncatedSeriesRing(SeriesContext inner);

  const SeriesContext& inner_context() const { return inner_; }

  RingValue wrap(Series s) const;
  const Series& unwrap(const RingValue& x) const;

  RingKind kind() const noexcept override { return RingKind::SeriesRing; }
  std::uint64_t characteristic() const noexcept override {
    return inner_.ring->characteristic();
  }
  std::string descriptor() const override;

  RingValue zero() const override;
  RingValue one() const override;
  RingValue embed_integer(std::int64_t k) const override;

  RingValue add(const RingValue& x, const RingValue& y) const override;
  RingValue sub(const RingValue& x, const RingValue& y) const override;
  RingValue mul(const RingValue& x, const RingValue& y) const override;
  RingValue neg(const RingValue& x) const override;

  bool equal(const RingValue& x, const RingValue& y) const override;
  bool is_zero(const RingValue& x) const override;
  bool is_unit(const RingValue& x) const override;
  RingValue invert_unit(const RingValue& x) const override;

  std::string to_text(const RingValue& x) const override;
  bool text_needs_parens(const RingValue& x) const override;

private:
  SeriesContext inner_;
};

std::shared_ptr<const TruncatedSeriesRing> make_series_ring(
    SeriesContext inner);

}  // namespace tpsa
