#pragma once

#include <string>
#include <string_view>

#include "tpsa/autgroup.hpp"

namespace tpsa {

// Text formats. Series terms look like "2*X1^2*X2 - 1/3*X3" (rationals),
// "3*X1 + X2^2" (prime fields), "(1+2*eps)*X1" (dual numbers; sums inside a
// coefficient must be parenthesized, a bare "eps" factor is also accepted).
// Terms of total degree beyond the context precision are accepted and
// dropped, matching the ring's truncation. An automorphism is one line per
// variable: "X<i> -> <series>", each variable exactly once, blank lines
// ignored. All parse failures are ParseError with a 1-based line/column.

Series parse_series(std::string_view text, const SeriesContext& ctx);
Automorphism parse_automorphism(std::string_view text,
                                const SeriesContext& ctx);

// One "X<i> -> <series>" line per variable, canonical term order, trailing
// newline. parse_automorphism(emit_automorphism(a)) == a.
std::string emit_automorphism(const Automorphism& a);

// Self-contained certificate text: format version, ring descriptor, nvars,
// prec, convention, target hash, pair count, then the beta/gamma image
// blocks of each pair. Byte-deterministic for a given certificate.
std::string emit_certificate(const CommutatorCertificate& cert);
CommutatorCertificate parse_certificate(std::string_view text);

}  // namespace tpsa
