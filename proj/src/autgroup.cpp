#include "tpsa/autgroup.hpp"

#include "tpsa/solver.hpp"

namespace tpsa {
namespace {

std::vector<RingValue> matrix_entries(const HomogeneousMatrix& m) {
  std::vector<RingValue> out;
  out.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m.at(i, j));
  return out;
}

HomogeneousMatrix matrix_from_entries(const SeriesContext& ctx,
                                      const std::vector<RingValue>& entries) {
  HomogeneousMatrix m(ctx, 1);
  for (std::size_t i = 0; i < ctx.nvars; ++i)
    for (std::size_t j = 0; j < ctx.nvars; ++j)
      m.at(i, j) = entries[i * ctx.nvars + j];
  return m;
}

std::vector<Series> identity_images(const SeriesContext& ctx) {
  std::vector<Series> images;
  images.reserve(ctx.nvars);
  for (std::uint32_t i = 1; i <= ctx.nvars; ++i)
    images.push_back(Series::variable(ctx, i));
  return images;
}

}  // namespace

Endomorphism::Endomorphism(std::vector<Series> images)
    : images_(std::move(images)) {
  if (images_.empty()) throw UsageError("endomorphism needs images");
  const SeriesContext& ctx = images_[0].context();
  if (images_.size() != ctx.nvars)
    throw ContextMismatch("expected " + std::to_string(ctx.nvars) +
                          " images, got " + std::to_string(images_.size()));
  for (const Series& im : images_) {
    require_same_context(im.context(), ctx);
    if (!ctx.ring->is_zero(im.constant_term()))
      throw NotAugmented("image has a nonzero constant term");
  }
}

bool Endomorphism::is_identity() const {
  for (std::uint32_t i = 0; i < context().nvars; ++i)
    if (images_[i] != Series::variable(context(), i + 1)) return false;
  return true;
}

Automorphism::Automorphism(Endomorphism endo) : endo_(std::move(endo)) {
  const SeriesContext& ctx = endo_.context();
  if (!try_invert_matrix(ctx.ring, ctx.nvars,
                         matrix_entries(endo_.linear_part())))
    throw NotAutomorphism("linear part is not invertible over " +
                          ctx.ring->descriptor());
}

Automorphism Automorphism::identity(const SeriesContext& ctx) {
  return Automorphism(Endomorphism(identity_images(ctx)));
}

bool Automorphism::in_GI() const {
  const SeriesContext& ctx = context();
  HomogeneousMatrix lp = linear_part();
  for (std::size_t i = 0; i < ctx.nvars; ++i)
    for (std::size_t j = 0; j < ctx.nvars; ++j) {
      const RingValue& want = i == j ? ctx.ring->one() : ctx.ring->zero();
      if (lp.at(i, j) != want) return false;
    }
  return true;
}

bool operator==(const Automorphism& a, const Automorphism& b) {
  require_same_context(a.context(), b.context());
  for (std::size_t i = 0; i < a.images().size(); ++i)
    if (a.image(i) != b.image(i)) return false;
  return true;
}

Endomorphism compose(const Endomorphism& outer, const Endomorphism& inner) {
  require_same_context(outer.context(), inner.context());
  SubstitutionEngine engine(outer.images());
  std::vector<Series> images;
  images.reserve(inner.images().size());
  for (const Series& im : inner.images()) images.push_back(engine.eval(im));
  return Endomorphism(std::move(images));
}

Automorphism compose(const Automorphism& outer, const Automorphism& inner) {
  return Automorphism(compose(outer.endo(), inner.endo()));
}

Automorphism invert(const Automorphism& a) {
  const SeriesContext& ctx = a.context();
  auto lin_inv =
      try_invert_matrix(ctx.ring, ctx.nvars, matrix_entries(a.linear_part()));
  if (!lin_inv)
    throw NotAutomorphism("linear part is not invertible over " +
                          ctx.ring->descriptor());
  HomogeneousMatrix a1_inv = matrix_from_entries(ctx, *lin_inv);

  // Solve (a . g) = id degree by degree: adding a degree-m correction d to g
  // shifts the degree-m defect by star(d, A1), so d = -defect * A1^-1 under
  // the star pairing. One engine memoizes the powers of a's images.
  SubstitutionEngine engine(a.images());
  std::vector<Series> g = rows_as_series(a1_inv);
  std::vector<Series> defect(ctx.nvars, Series::zero(ctx));
  for (std::uint32_t i = 0; i < ctx.nvars; ++i)
    defect[i] = engine.eval(g[i]) - Series::variable(ctx, i + 1);
  for (std::uint32_t m = 2; m <= ctx.prec; ++m) {
    HomogeneousMatrix dm = homogeneous_component(defect, m);
    if (dm.is_zero()) continue;
    std::vector<Series> corr = rows_as_series(star(-dm, a1_inv));
    for (std::uint32_t i = 0; i < ctx.nvars; ++i) {
      g[i] = g[i] + corr[i];
      defect[i] = defect[i] + engine.eval(corr[i]);
    }
  }
  for (const Series& d : defect)
    if (!d.is_zero())
      throw InternalContradiction("inversion left a nonzero defect");
  return Automorphism(std::move(g));
}

Automorphism commutator(const Automorphism& x, const Automorphism& y) {
  return compose(compose(x, y), compose(invert(x), invert(y)));
}

Automorphism elementary(std::uint32_t i, const Series& g) {
  const SeriesContext& ctx = g.context();
  if (i < 1 || i > ctx.nvars)
    throw BadElementaryData("variable index " + std::to_string(i) +
                            " out of range");
  for (const auto& [e, c] : g.terms()) {
    (void)c;
    if (e[i - 1] != 0)
      throw BadElementaryData("perturbation involves its own variable X" +
                              std::to_string(i));
    if (total_degree(e) < 2)
      throw BadElementaryData("perturbation has a term of degree < 2");
  }
  std::vector<Series> images = identity_images(ctx);
  images[i - 1] = images[i - 1] + g;
  return Automorphism(std::move(images));
}

Automorphism permutation_auto(const SeriesContext& ctx,
                              const std::vector<std::uint32_t>& sigma) {
  if (sigma.size() != ctx.nvars)
    throw UsageError("permutation length does not match variable count");
  std::vector<bool> seen(ctx.nvars, false);
  for (std::uint32_t v : sigma) {
    if (v < 1 || v > ctx.nvars || seen[v - 1])
      throw UsageError("not a permutation of the variables");
    seen[v - 1] = true;
  }
  std::vector<Series> images;
  images.reserve(ctx.nvars);
  for (std::uint32_t i = 0; i < ctx.nvars; ++i)
    images.push_back(Series::variable(ctx, sigma[i]));
  return Automorphism(std::move(images));
}

Automorphism transposition(const SeriesContext& ctx, std::uint32_t i,
                           std::uint32_t j) {
  std::vector<std::uint32_t> sigma(ctx.nvars);
  for (std::uint32_t k = 0; k < ctx.nvars; ++k) sigma[k] = k + 1;
  if (i < 1 || i > ctx.nvars || j < 1 || j > ctx.nvars)
    throw UsageError("transposition index out of range");
  std::swap(sigma[i - 1], sigma[j - 1]);
  return permutation_auto(ctx, sigma);
}

Automorphism conjugate(const Automorphism& a, const Automorphism& tau) {
  return compose(compose(tau, a), invert(tau));
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t automorphism_hash(const Automorphism& a) {
  std::string text = a.context().describe();
  for (const Series& im : a.images()) {
    text += '\n';
    text += emit_series(im);
  }
  return fnv1a64(text);
}

CommutatorCertificate make_certificate(const Automorphism& target,
                                       std::vector<CommutatorPair> pairs) {
  CommutatorCertificate cert;
  cert.context = target.context();
  cert.target_hash = automorphism_hash(target);
  cert.pairs = std::move(pairs);
  for (const CommutatorPair& pair : cert.pairs) {
    require_same_context(pair.beta.context(), cert.context);
    require_same_context(pair.gamma.context(), cert.context);
  }
  return cert;
}

VerifyResult verify_certificate(const CommutatorCertificate& cert,
                                const Automorphism& target) {
  require_same_context(cert.context, target.context());
  const SeriesContext& ctx = cert.context;
  Automorphism product = Automorphism::identity(ctx);
  for (const CommutatorPair& pair : cert.pairs)
    product = compose(product, commutator(pair.beta, pair.gamma));

  VerifyResult result;
  result.ok = true;
  for (std::uint32_t m = 1; m <= ctx.prec && result.ok; ++m) {
    std::vector<Monomial> monos = monomials_of_degree(ctx.nvars, m);
    for (std::size_t i = 0; i < ctx.nvars && result.ok; ++i) {
      for (const Monomial& e : monos) {
        RingValue expected = target.image(i).coeff(e);
        RingValue got = product.image(i).coeff(e);
        if (expected != got) {
          result.ok = false;
          result.discrepancy = Discrepancy{m, e, i, expected, got};
          break;
        }
      }
    }
  }
  return result;
}

}  // namespace tpsa
