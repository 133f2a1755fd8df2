#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tpsa {

// Every failure carries a stable machine-readable token (Error::token), which
// the CLI prints on the first output line and tests match against.
class Error : public std::runtime_error {
public:
  Error(std::string token, const std::string& what)
      : std::runtime_error(token + ": " + what), token_(std::move(token)) {}

  const std::string& token() const noexcept { return token_; }

private:
  std::string token_;
};

#define TPSA_DEFINE_ERROR(Name)                                              \
  class Name : public Error {                                                \
  public:                                                                    \
    explicit Name(const std::string& what) : Error(#Name, what) {}           \
  };

TPSA_DEFINE_ERROR(RingMismatch)          // operands from different rings
TPSA_DEFINE_ERROR(ContextMismatch)       // series/automorphism contexts differ
TPSA_DEFINE_ERROR(NotAUnit)              // invert_unit on a non-unit
TPSA_DEFINE_ERROR(NotFound)              // no element with the requested order
TPSA_DEFINE_ERROR(NoCombination)         // bezout_combine: neither generator is a unit
TPSA_DEFINE_ERROR(NotAugmented)          // substitution image with constant term
TPSA_DEFINE_ERROR(DegreeOverflow)        // homogeneous degree past the precision
TPSA_DEFINE_ERROR(NotAutomorphism)       // linear part not invertible
TPSA_DEFINE_ERROR(NotInGI)               // linear part not the identity
TPSA_DEFINE_ERROR(BadElementaryData)     // elementary data touches its own variable
TPSA_DEFINE_ERROR(NotAffine)             // probe verification failed
TPSA_DEFINE_ERROR(NonUnitPivot)          // elimination met a non-unit pivot column
TPSA_DEFINE_ERROR(Inconsistent)          // linear system has no solution
TPSA_DEFINE_ERROR(BadUnits)              // char-0 unit condition fails below prec
TPSA_DEFINE_ERROR(UnsupportedCharacteristic)  // p in {2,3} (or wrong path)
TPSA_DEFINE_ERROR(UnsupportedRing)       // 2 not a unit where the construction needs it
TPSA_DEFINE_ERROR(InternalContradiction) // a self-check after solving failed
TPSA_DEFINE_ERROR(VerifyFailed)          // produced certificate did not verify
TPSA_DEFINE_ERROR(IOError)               // file could not be read/written
TPSA_DEFINE_ERROR(UsageError)            // bad CLI arguments or malformed request

#undef TPSA_DEFINE_ERROR

// Parse failures carry the 1-based source position.
class ParseError : public Error {
public:
  ParseError(int line, int column, const std::string& what)
      : Error("ParseError", "line " + std::to_string(line) + ", column " +
                                std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  int line_;
  int column_;
};

}  // namespace tpsa
