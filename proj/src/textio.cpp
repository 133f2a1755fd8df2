#include "tpsa/textio.hpp"

#include <cctype>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tpsa/errors.hpp"

namespace tpsa {
namespace {

using boost::multiprecision::cpp_int;

struct Scanner {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  explicit Scanner(std::string_view t, int start_line = 1)
      : text(t), line(start_line) {}

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\r' ||
                       peek() == '\n'))
      advance();
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line, col, what);
  }

  bool try_char(char c) {
    if (done() || peek() != c) return false;
    advance();
    return true;
  }

  // Unsigned decimal, capped to keep exponents sane; coefficients use
  // big_integer below instead.
  std::uint32_t small_integer(const char* what) {
    if (done() || !std::isdigit(static_cast<unsigned char>(peek())))
      fail(std::string("expected ") + what);
    std::uint64_t v = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + static_cast<std::uint64_t>(peek() - '0');
      if (v > 1000000) fail(std::string(what) + " out of range");
      advance();
    }
    return static_cast<std::uint32_t>(v);
  }

  cpp_int big_integer(const char* what) {
    if (done() || !std::isdigit(static_cast<unsigned char>(peek())))
      fail(std::string("expected ") + what);
    cpp_int v = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      advance();
    }
    return v;
  }

  bool try_word(std::string_view w) {
    if (text.substr(pos, w.size()) != w) return false;
    // must not be followed by an identifier character
    const std::size_t after = pos + w.size();
    if (after < text.size() &&
        (std::isalnum(static_cast<unsigned char>(text[after])) ||
         text[after] == '_'))
      return false;
    for (std::size_t i = 0; i < w.size(); ++i) advance();
    return true;
  }
};

RingValue embed_big(const RingPtr& ring, const cpp_int& v) {
  if (ring->kind() == RingKind::Rationals)
    return RingValue(ring, Rational(v));
  const cpp_int p = ring->characteristic();
  const std::uint64_t r = static_cast<std::uint64_t>(v % p);
  return ring->embed_integer(static_cast<std::int64_t>(r));
}

// One multiplicative factor of a term: either a scalar piece folded into
// coeff or a variable power folded into mono.
void parse_factor(Scanner& sc, const SeriesContext& ctx, RingValue& coeff,
                  Monomial& mono, std::uint64_t& extra_degree) {
  const RingPtr& ring = ctx.ring;
  if (sc.try_char('(')) {
    const int eline = sc.line, ecol = sc.col;
    std::size_t start = sc.pos;
    while (!sc.done() && sc.peek() != ')' && sc.peek() != '\n') sc.advance();
    if (sc.done() || sc.peek() != ')') sc.fail("unterminated '('");
    std::string inside(sc.text.substr(start, sc.pos - start));
    sc.advance();  // ')'
    try {
      coeff = coeff * parse_ring_element(ring, inside);
    } catch (const ParseError& e) {
      throw ParseError(eline, ecol + e.column() - 1, "in coefficient: " +
                                                         std::string(e.what()));
    }
    return;
  }
  if (sc.try_word("eps")) {
    if (ring->kind() != RingKind::DualNumbers)
      sc.fail("'eps' only exists over dual numbers");
    coeff = coeff * RingValue(ring, DualElem{0, 1});
    return;
  }
  if (!sc.done() && sc.peek() == 'X') {
    sc.advance();
    std::uint32_t idx = sc.small_integer("variable index after 'X'");
    if (idx < 1 || idx > ctx.nvars)
      sc.fail("variable index out of range (have " +
              std::to_string(ctx.nvars) + " variables)");
    std::uint32_t e = 1;
    if (sc.try_char('^')) e = sc.small_integer("exponent after '^'");
    // Accumulate; degrees beyond prec make the whole term vanish, tracked
    // via extra_degree so the monomial vector itself cannot overflow.
    std::uint64_t room = ctx.prec + 1;  // any total >= this dies anyway
    if (e >= room) {
      extra_degree += e;
    } else {
      mono[idx - 1] += e;
    }
    return;
  }
  if (!sc.done() && std::isdigit(static_cast<unsigned char>(sc.peek()))) {
    cpp_int num = sc.big_integer("number");
    if (sc.try_char('/')) {
      if (ring->kind() != RingKind::Rationals)
        sc.fail("'/' coefficients only exist over the rationals");
      cpp_int den = sc.big_integer("denominator");
      if (den == 0) sc.fail("zero denominator");
      coeff = coeff * RingValue(ring, Rational(num, den));
    } else {
      coeff = coeff * embed_big(ring, num);
    }
    return;
  }
  sc.fail("expected a coefficient, 'eps', a parenthesized coefficient, or a "
          "variable like X1");
}

Series parse_series_scanner(Scanner& sc, const SeriesContext& ctx) {
  Series out(ctx);
  sc.skip_ws();
  if (sc.done()) sc.fail("empty series text");
  bool first = true;
  while (true) {
    bool negate = false;
    if (first) {
      if (sc.try_char('-'))
        negate = true;
      else
        sc.try_char('+');
    } else {
      sc.skip_ws();
      if (sc.done()) break;
      if (sc.try_char('-'))
        negate = true;
      else if (sc.try_char('+'))
        negate = false;
      else
        sc.fail("expected '+' or '-' between terms");
    }
    sc.skip_ws();
    RingValue coeff = ctx.ring->one();
    Monomial mono(ctx.nvars, 0);
    std::uint64_t extra_degree = 0;
    parse_factor(sc, ctx, coeff, mono, extra_degree);
    while (true) {
      // '*' between factors; whitespace alone does not chain factors.
      std::size_t mark = sc.pos;
      int mline = sc.line, mcol = sc.col;
      sc.skip_ws();
      if (!sc.try_char('*')) {
        sc.pos = mark;
        sc.line = mline;
        sc.col = mcol;
        break;
      }
      sc.skip_ws();
      parse_factor(sc, ctx, coeff, mono, extra_degree);
    }
    if (negate) coeff = -coeff;
    if (extra_degree == 0 && total_degree(mono) <= ctx.prec)
      out.add_term(mono, coeff);
    first = false;
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

bool blank(std::string_view s) {
  for (char c : s)
    if (c != ' ' && c != '\t' && c != '\r') return false;
  return true;
}

// "X<i> -> <series>"; returns (i, series).
std::pair<std::uint32_t, Series> parse_image_line(std::string_view line,
                                                  int line_no,
                                                  const SeriesContext& ctx) {
  Scanner sc(line, line_no);
  sc.skip_ws();
  if (sc.done() || sc.peek() != 'X') sc.fail("expected 'X<i> -> <series>'");
  sc.advance();
  std::uint32_t idx = sc.small_integer("variable index after 'X'");
  if (idx < 1 || idx > ctx.nvars)
    sc.fail("variable index out of range (have " + std::to_string(ctx.nvars) +
            " variables)");
  sc.skip_ws();
  if (!sc.try_char('-') || !sc.try_char('>')) sc.fail("expected '->'");
  Series s = parse_series_scanner(sc, ctx);
  return {idx, std::move(s)};
}

std::vector<Series> parse_image_block(
    const std::vector<std::string_view>& lines, std::size_t& cursor,
    const SeriesContext& ctx) {
  std::vector<Series> images(ctx.nvars, Series(ctx));
  std::vector<bool> seen(ctx.nvars, false);
  std::uint32_t found = 0;
  while (found < ctx.nvars) {
    while (cursor < lines.size() && blank(lines[cursor])) ++cursor;
    if (cursor >= lines.size())
      throw ParseError(static_cast<int>(lines.size()), 1,
                       "missing image line (expected " +
                           std::to_string(ctx.nvars) + " per block)");
    auto [idx, s] =
        parse_image_line(lines[cursor], static_cast<int>(cursor + 1), ctx);
    if (seen[idx - 1])
      throw ParseError(static_cast<int>(cursor + 1), 1,
                       "duplicate image for X" + std::to_string(idx));
    seen[idx - 1] = true;
    images[idx - 1] = std::move(s);
    ++cursor;
    ++found;
  }
  return images;
}

}  // namespace

Series parse_series(std::string_view text, const SeriesContext& ctx) {
  Scanner sc(text);
  Series s = parse_series_scanner(sc, ctx);
  sc.skip_ws();
  if (!sc.done()) sc.fail("trailing characters after the series");
  return s;
}

Automorphism parse_automorphism(std::string_view text,
                                const SeriesContext& ctx) {
  auto lines = split_lines(text);
  std::size_t cursor = 0;
  std::vector<Series> images = parse_image_block(lines, cursor, ctx);
  while (cursor < lines.size() && blank(lines[cursor])) ++cursor;
  if (cursor < lines.size())
    throw ParseError(static_cast<int>(cursor + 1), 1,
                     "unexpected extra line after all images");
  return Automorphism(std::move(images));
}

std::string emit_automorphism(const Automorphism& a) {
  std::ostringstream out;
  for (std::size_t i = 0; i < a.images().size(); ++i)
    out << "X" << (i + 1) << " -> " << emit_series(a.image(i)) << "\n";
  return out.str();
}

namespace {

constexpr std::string_view kCertHeader = "commutator certificate v1";

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return s;
}

std::string_view expect_prefix(std::string_view line, std::string_view prefix,
                               int line_no) {
  if (line.substr(0, prefix.size()) != prefix)
    throw ParseError(line_no, 1,
                     "expected '" + std::string(prefix) + "...'");
  std::string_view rest = line.substr(prefix.size());
  while (!rest.empty() && (rest.back() == '\r' || rest.back() == ' '))
    rest.remove_suffix(1);
  return rest;
}

std::uint64_t parse_uint(std::string_view s, int line_no, const char* what) {
  if (s.empty()) throw ParseError(line_no, 1, std::string("empty ") + what);
  std::uint64_t v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError(line_no, 1, std::string("bad ") + what);
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
    if (v > (1ull << 40))
      throw ParseError(line_no, 1, std::string(what) + " out of range");
  }
  return v;
}

}  // namespace

std::string emit_certificate(const CommutatorCertificate& cert) {
  std::ostringstream out;
  out << kCertHeader << "\n";
  out << "ring: " << cert.context.ring->descriptor() << "\n";
  out << "nvars: " << cert.context.nvars << "\n";
  out << "prec: " << cert.context.prec << "\n";
  out << "convention: " << cert.convention << "\n";
  out << "target-hash: fnv1a64:" << hash_hex(cert.target_hash) << "\n";
  out << "pairs: " << cert.pairs.size() << "\n";
  for (std::size_t i = 0; i < cert.pairs.size(); ++i) {
    out << "pair " << (i + 1) << " beta:\n"
        << emit_automorphism(cert.pairs[i].beta);
    out << "pair " << (i + 1) << " gamma:\n"
        << emit_automorphism(cert.pairs[i].gamma);
  }
  return out.str();
}

CommutatorCertificate parse_certificate(std::string_view text) {
  auto lines = split_lines(text);
  std::size_t cursor = 0;
  auto next_line = [&](const char* what) -> std::string_view {
    while (cursor < lines.size() && blank(lines[cursor])) ++cursor;
    if (cursor >= lines.size())
      throw ParseError(static_cast<int>(lines.size()), 1,
                       std::string("unexpected end of certificate, wanted ") +
                           what);
    return lines[cursor++];
  };

  {
    std::string_view head = next_line("the format line");
    if (expect_prefix(head, kCertHeader, static_cast<int>(cursor)) != "")
      throw ParseError(static_cast<int>(cursor), 1,
                       "unsupported certificate format line");
  }
  RingPtr ring;
  {
    std::string_view v =
        expect_prefix(next_line("'ring:'"), "ring: ", static_cast<int>(cursor));
    try {
      ring = parse_ring_descriptor(v);
    } catch (const Error& e) {
      throw ParseError(static_cast<int>(cursor), 1, e.what());
    }
  }
  std::uint32_t nvars = static_cast<std::uint32_t>(parse_uint(
      expect_prefix(next_line("'nvars:'"), "nvars: ", static_cast<int>(cursor)),
      static_cast<int>(cursor), "variable count"));
  if (nvars < 1)
    throw ParseError(static_cast<int>(cursor), 1, "nvars must be >= 1");
  std::uint32_t prec = static_cast<std::uint32_t>(parse_uint(
      expect_prefix(next_line("'prec:'"), "prec: ", static_cast<int>(cursor)),
      static_cast<int>(cursor), "precision"));
  if (prec < 1)
    throw ParseError(static_cast<int>(cursor), 1, "prec must be >= 1");
  std::string convention{expect_prefix(next_line("'convention:'"),
                                       "convention: ",
                                       static_cast<int>(cursor))};
  if (convention != kCommutatorConvention)
    throw ParseError(static_cast<int>(cursor), 1,
                     "unsupported commutator convention");
  std::uint64_t hash = 0;
  {
    std::string_view v = expect_prefix(next_line("'target-hash:'"),
                                       "target-hash: fnv1a64:",
                                       static_cast<int>(cursor));
    if (v.size() != 16)
      throw ParseError(static_cast<int>(cursor), 1,
                       "target hash must be 16 hex digits");
    for (char c : v) {
      int d;
      if (c >= '0' && c <= '9')
        d = c - '0';
      else if (c >= 'a' && c <= 'f')
        d = c - 'a' + 10;
      else
        throw ParseError(static_cast<int>(cursor), 1,
                         "bad hex digit in target hash");
      hash = (hash << 4) | static_cast<std::uint64_t>(d);
    }
  }
  std::uint64_t npairs = parse_uint(
      expect_prefix(next_line("'pairs:'"), "pairs: ", static_cast<int>(cursor)),
      static_cast<int>(cursor), "pair count");
  if (npairs > 4096)
    throw ParseError(static_cast<int>(cursor), 1, "pair count out of range");

  SeriesContext ctx{ring, nvars, prec};
  CommutatorCertificate cert;
  cert.context = ctx;
  cert.convention = convention;
  cert.target_hash = hash;
  for (std::uint64_t i = 1; i <= npairs; ++i) {
    {
      std::string tag = "pair " + std::to_string(i) + " beta:";
      std::string_view line = next_line(tag.c_str());
      if (expect_prefix(line, tag, static_cast<int>(cursor)) != "")
        throw ParseError(static_cast<int>(cursor), 1, "expected '" + tag + "'");
    }
    Automorphism beta(parse_image_block(lines, cursor, ctx));
    {
      std::string tag = "pair " + std::to_string(i) + " gamma:";
      std::string_view line = next_line(tag.c_str());
      if (expect_prefix(line, tag, static_cast<int>(cursor)) != "")
        throw ParseError(static_cast<int>(cursor), 1, "expected '" + tag + "'");
    }
    Automorphism gamma(parse_image_block(lines, cursor, ctx));
    cert.pairs.push_back({std::move(beta), std::move(gamma)});
  }
  while (cursor < lines.size() && blank(lines[cursor])) ++cursor;
  if (cursor < lines.size())
    throw ParseError(static_cast<int>(cursor + 1), 1,
                     "unexpected extra line after the last pair");
  return cert;
}

}  // namespace tpsa
