#include "tpsa/series.hpp"

#include <algorithm>

namespace tpsa {

std::string SeriesContext::describe() const {
  return ring->descriptor() + "[n=" + std::to_string(nvars) +
         ",D=" + std::to_string(prec) + "]";
}

void require_same_context(const SeriesContext& a, const SeriesContext& b) {
  if (!a.same(b))
    throw ContextMismatch(a.describe() + " vs " + b.describe());
}

std::uint32_t total_degree(const Monomial& e) {
  std::uint32_t d = 0;
  for (std::uint32_t v : e) d += v;
  return d;
}

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
  std::uint32_t da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];  // X1 > ... > Xn, descending
  return false;
}

std::size_t monomial_count(std::uint32_t nvars, std::uint32_t m) {
  // C(m + nvars - 1, nvars - 1), built up so every intermediate is exact.
  std::size_t res = 1;
  for (std::uint32_t i = 1; i < nvars; ++i) res = res * (m + i) / i;
  return res;
}

namespace {
void gen_monomials(std::uint32_t nvars, std::uint32_t pos,
                   std::uint32_t remaining, Monomial& cur,
                   std::vector<Monomial>& out) {
  if (pos + 1 == nvars) {
    cur[pos] = remaining;
    out.push_back(cur);
    cur[pos] = 0;
    return;
  }
  for (std::uint32_t v = remaining + 1; v-- > 0;) {
    cur[pos] = v;
    gen_monomials(nvars, pos + 1, remaining - v, cur, out);
  }
  cur[pos] = 0;
}
}  // namespace

std::vector<Monomial> monomials_of_degree(std::uint32_t nvars,
                                          std::uint32_t m) {
  std::vector<Monomial> out;
  out.reserve(monomial_count(nvars, m));
  Monomial cur(nvars, 0);
  gen_monomials(nvars, 0, m, cur, out);
  return out;
}

std::size_t monomial_rank(const Monomial& e) {
  // Counts lexicographically larger exponent vectors of the same degree.
  std::uint32_t n = static_cast<std::uint32_t>(e.size());
  std::uint32_t rem = total_degree(e);
  std::size_t r = 0;
  for (std::uint32_t i = 0; i + 1 < n; ++i) {
    for (std::uint32_t v = rem; v > e[i]; --v)
      r += monomial_count(n - i - 1, rem - v);
    rem -= e[i];
  }
  return r;
}

Series Series::constant(const SeriesContext& ctx, const RingValue& c) {
  Series s(ctx);
  s.add_term(Monomial(ctx.nvars, 0), c);
  return s;
}

Series Series::variable(const SeriesContext& ctx, std::uint32_t i) {
  if (i < 1 || i > ctx.nvars)
    throw UsageError("variable index " + std::to_string(i) + " out of range");
  Monomial e(ctx.nvars, 0);
  e[i - 1] = 1;
  return monomial(ctx, std::move(e), ctx.ring->one());
}

Series Series::monomial(const SeriesContext& ctx, Monomial e,
                        const RingValue& c) {
  if (e.size() != ctx.nvars)
    throw UsageError("exponent vector length does not match variable count");
  Series s(ctx);
  s.add_term(e, c);
  return s;
}

RingValue Series::coeff(const Monomial& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? ctx_.ring->zero() : it->second;
}

RingValue Series::constant_term() const {
  return coeff(Monomial(ctx_.nvars, 0));
}

void Series::add_term(const Monomial& e, const RingValue& c) {
  if (ctx_.ring->is_zero(c)) return;
  if (total_degree(e) > ctx_.prec) return;  // identified with zero
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    RingValue s = it->second + c;
    if (ctx_.ring->is_zero(s))
      terms_.erase(it);
    else
      it->second = std::move(s);
  }
}

std::uint32_t Series::top_degree() const {
  return terms_.empty() ? 0 : total_degree(terms_.rbegin()->first);
}

std::uint32_t Series::order() const {
  return terms_.empty() ? ctx_.prec + 1 : total_degree(terms_.begin()->first);
}

Series Series::truncated_above(std::uint32_t k) const {
  Series out(ctx_);
  for (const auto& [e, c] : terms_)
    if (total_degree(e) <= k) out.terms_.emplace(e, c);
  return out;
}

Series Series::with_prec(std::uint32_t new_prec) const {
  SeriesContext ctx{ctx_.ring, ctx_.nvars, new_prec};
  Series out(ctx);
  for (const auto& [e, c] : terms_)
    if (total_degree(e) <= new_prec) out.terms_.emplace(e, c);
  return out;
}

Series Series::scaled(const RingValue& c) const {
  Series out(ctx_);
  for (const auto& [e, v] : terms_) out.add_term(e, v * c);
  return out;
}

Series operator+(const Series& f, const Series& g) {
  require_same_context(f.ctx_, g.ctx_);
  Series out = f;
  for (const auto& [e, c] : g.terms_) out.add_term(e, c);
  return out;
}

Series operator-(const Series& f, const Series& g) {
  require_same_context(f.ctx_, g.ctx_);
  Series out = f;
  for (const auto& [e, c] : g.terms_) out.add_term(e, -c);
  return out;
}

Series Series::operator-() const {
  Series out(ctx_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

Series operator*(const Series& f, const Series& g) {
  require_same_context(f.ctx_, g.ctx_);
  Series out(f.ctx_);
  Monomial sum(f.ctx_.nvars);
  for (const auto& [e1, c1] : f.terms_) {
    std::uint32_t d1 = total_degree(e1);
    for (const auto& [e2, c2] : g.terms_) {
      if (d1 + total_degree(e2) > f.ctx_.prec) continue;
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = e1[i] + e2[i];
      out.add_term(sum, c1 * c2);
    }
  }
  return out;
}

bool operator==(const Series& f, const Series& g) {
  require_same_context(f.ctx_, g.ctx_);
  if (f.terms_.size() != g.terms_.size()) return false;
  auto it = g.terms_.begin();
  for (const auto& [e, c] : f.terms_) {
    if (e != it->first || c != it->second) return false;
    ++it;
  }
  return true;
}

SubstitutionEngine::SubstitutionEngine(std::vector<Series> images)
    : images_(std::move(images)) {
  if (images_.empty()) throw UsageError("substitution needs images");
  const SeriesContext& ctx = images_[0].context();
  if (images_.size() != ctx.nvars)
    throw ContextMismatch("expected " + std::to_string(ctx.nvars) +
                          " images, got " + std::to_string(images_.size()));
  for (const Series& im : images_) {
    require_same_context(im.context(), ctx);
    if (!ctx.ring->is_zero(im.constant_term()))
      throw NotAugmented("substitution image has a nonzero constant term");
  }
  powers_.resize(images_.size());
}

const Series& SubstitutionEngine::power(std::size_t var, std::uint32_t k) {
  auto& cache = powers_[var];
  while (cache.size() <= k) {
    if (cache.empty())
      cache.push_back(Series::constant(context(), context().ring->one()));
    else if (cache.size() == 1)
      cache.push_back(images_[var]);
    else
      cache.push_back(cache.back() * images_[var]);
  }
  return cache[k];
}

Series SubstitutionEngine::eval(const Series& f) {
  require_same_context(f.context(), context());
  Series acc(context());
  for (const auto& [e, c] : f.terms()) {
    Series prod(context());
    bool started = false;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      prod = started ? prod * power(i, e[i]) : power(i, e[i]);
      started = true;
    }
    acc = acc + (started ? prod.scaled(c) : Series::constant(context(), c));
  }
  return acc;
}

Series substitute(const Series& f, const std::vector<Series>& images) {
  SubstitutionEngine engine(images);
  return engine.eval(f);
}

RingValue univariate_composition_coefficient(const std::vector<RingValue>& b,
                                             const std::vector<RingValue>& c,
                                             std::uint32_t m) {
  RingPtr ring;
  if (!b.empty())
    ring = b[0].ring();
  else if (!c.empty())
    ring = c[0].ring();
  else
    throw UsageError("need at least one coefficient");
  // cur[j] holds the degree-j coefficient of the r-th power of the c-series,
  // i.e. the sum of c_{j_1}...c_{j_r} over ordered compositions j_1+...+j_r=j.
  std::vector<RingValue> cur(m + 1, ring->zero());
  for (std::uint32_t j = 1; j <= m && j <= c.size(); ++j) cur[j] = c[j - 1];
  RingValue acc = ring->zero();
  for (std::uint32_t r = 1; r <= m; ++r) {
    if (r <= b.size()) acc = acc + b[r - 1] * cur[m];
    if (r == m) break;
    std::vector<RingValue> next(m + 1, ring->zero());
    for (std::uint32_t j = 0; j <= m; ++j) {
      if (ring->is_zero(cur[j])) continue;
      for (std::uint32_t t = 1; t <= c.size() && j + t <= m; ++t)
        next[j + t] = next[j + t] + cur[j] * c[t - 1];
    }
    cur = std::move(next);
  }
  return acc;
}

HomogeneousMatrix::HomogeneousMatrix(SeriesContext ctx, std::uint32_t degree)
    : ctx_(std::move(ctx)),
      degree_(degree),
      cols_(monomial_count(ctx_.nvars, degree)) {
  if (degree_ > ctx_.prec)
    throw DegreeOverflow("homogeneous degree " + std::to_string(degree_) +
                         " exceeds precision " + std::to_string(ctx_.prec));
  entries_.assign(ctx_.nvars * cols_, ctx_.ring->zero());
}

bool HomogeneousMatrix::is_zero() const {
  for (const RingValue& v : entries_)
    if (!ctx_.ring->is_zero(v)) return false;
  return true;
}

namespace {
void require_compatible(const HomogeneousMatrix& a,
                        const HomogeneousMatrix& b) {
  require_same_context(a.context(), b.context());
  if (a.degree() != b.degree())
    throw ContextMismatch("homogeneous degrees " +
                          std::to_string(a.degree()) + " vs " +
                          std::to_string(b.degree()));
}
}  // namespace

HomogeneousMatrix operator+(const HomogeneousMatrix& a,
                            const HomogeneousMatrix& b) {
  require_compatible(a, b);
  HomogeneousMatrix out = a;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j)
      out.at(i, j) = out.at(i, j) + b.at(i, j);
  return out;
}

HomogeneousMatrix operator-(const HomogeneousMatrix& a,
                            const HomogeneousMatrix& b) {
  require_compatible(a, b);
  HomogeneousMatrix out = a;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j)
      out.at(i, j) = out.at(i, j) - b.at(i, j);
  return out;
}

HomogeneousMatrix HomogeneousMatrix::operator-() const {
  HomogeneousMatrix out = *this;
  for (RingValue& v : out.entries_) v = -v;
  return out;
}

HomogeneousMatrix HomogeneousMatrix::scaled(const RingValue& c) const {
  HomogeneousMatrix out = *this;
  for (RingValue& v : out.entries_) v = v * c;
  return out;
}

bool operator==(const HomogeneousMatrix& a, const HomogeneousMatrix& b) {
  require_compatible(a, b);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a.at(i, j) != b.at(i, j)) return false;
  return true;
}

HomogeneousMatrix homogeneous_component(const std::vector<Series>& tuple,
                                        std::uint32_t m) {
  if (tuple.empty()) throw UsageError("empty series tuple");
  const SeriesContext& ctx = tuple[0].context();
  if (tuple.size() != ctx.nvars)
    throw ContextMismatch("tuple size does not match variable count");
  HomogeneousMatrix out(ctx, m);
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    require_same_context(tuple[i].context(), ctx);
    for (const auto& [e, c] : tuple[i].terms())
      if (total_degree(e) == m) out.at(i, monomial_rank(e)) = c;
  }
  return out;
}

std::vector<Series> from_components(
    const SeriesContext& ctx, const std::vector<HomogeneousMatrix>& parts) {
  std::vector<Series> images(ctx.nvars, Series::zero(ctx));
  for (const HomogeneousMatrix& part : parts) {
    require_same_context(part.context(), ctx);
    std::vector<Monomial> monos = monomials_of_degree(ctx.nvars, part.degree());
    for (std::size_t i = 0; i < part.rows(); ++i)
      for (std::size_t j = 0; j < part.cols(); ++j)
        images[i].add_term(monos[j], part.at(i, j));
  }
  return images;
}

std::vector<Series> rows_as_series(const HomogeneousMatrix& m) {
  return from_components(m.context(), {m});
}

HomogeneousMatrix star(const HomogeneousMatrix& L,
                       const HomogeneousMatrix& M) {
  require_same_context(L.context(), M.context());
  const SeriesContext& ctx = L.context();
  std::uint64_t lm = std::uint64_t{L.degree()} * M.degree();
  if (lm > ctx.prec)
    throw DegreeOverflow("star degree " + std::to_string(lm) +
                         " exceeds precision " + std::to_string(ctx.prec));
  SubstitutionEngine engine(rows_as_series(M));
  std::vector<Series> rowsL = rows_as_series(L);
  HomogeneousMatrix out(ctx, static_cast<std::uint32_t>(lm));
  for (std::size_t i = 0; i < rowsL.size(); ++i) {
    Series s = engine.eval(rowsL[i]);
    for (const auto& [e, c] : s.terms()) out.at(i, monomial_rank(e)) = c;
  }
  return out;
}

Series invert_series_unit(const Series& f) {
  const SeriesContext& ctx = f.context();
  RingValue u = f.constant_term();
  if (!ctx.ring->is_unit(u))
    throw NotAUnit("series constant term is not a unit");
  RingValue uinv = ctx.ring->invert_unit(u);
  // f = u(1 - r) with r of positive order, so 1/f = u^-1 (1 + r + r^2 + ...).
  Series one = Series::constant(ctx, ctx.ring->one());
  Series r = one - f.scaled(uinv);
  Series acc = one;
  Series term = r;
  for (std::uint32_t k = 1; k <= ctx.prec && !term.is_zero(); ++k) {
    acc = acc + term;
    term = term * r;
  }
  return acc.scaled(uinv);
}

std::string emit_series(const Series& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : f.terms()) {
    std::string ctext = to_text(c);
    bool negative = !ctext.empty() && ctext[0] == '-';
    if (negative) ctext.erase(ctext.begin());
    if (c.ring()->text_needs_parens(c)) ctext = "(" + ctext + ")";
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "X" + std::to_string(i + 1);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    std::string body;
    if (mono.empty())
      body = ctext;
    else if (ctext == "1")
      body = mono;
    else
      body = ctext + "*" + mono;
    if (first) {
      out = negative ? "-" + body : body;
      first = false;
    } else {
      out += negative ? " - " : " + ";
      out += body;
    }
  }
  return out;
}

}  // namespace tpsa
