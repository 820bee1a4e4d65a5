#ifndef STRAT_ERRORS_HPP
#define STRAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace strat {

// Every failure the library can report, split into hard mathematical/input
// errors and cap-bounded "inconclusive" outcomes.  The CLI maps the former to
// exit code 1 and the latter to exit code 2; no computation is silently
// truncated.
enum class ErrorKind {
  Dimension,       // mismatched variable lists / sizes
  Name,            // unknown variable
  Validation,      // bad input data (non-prime p, non-unit determinant, schema)
  Parse,           // unreadable polynomial / file
  Integrability,   // connection fails the flatness identity
  Flatness,        // nonzero p-curvature where zero is required
  Invertibility,   // non-constant or zero determinant
  LevelExceeded,   // operator index beyond the tower's truncation level
  Mode,            // absolute/relative mismatch
  Obstruction,     // connection does not extend to the next tower level
  DegreeBound,     // cap hit: no conclusion within the degree bound
  Closure,         // cap hit: action image escapes the truncated module
  Stabilization,   // cap hit: rank did not stabilize within the level bound
};

inline bool is_cap_error(ErrorKind k) {
  return k == ErrorKind::DegreeBound || k == ErrorKind::Closure ||
         k == ErrorKind::Stabilization || k == ErrorKind::LevelExceeded;
}

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Name: return "name";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Integrability: return "integrability";
    case ErrorKind::Flatness: return "flatness";
    case ErrorKind::Invertibility: return "invertibility";
    case ErrorKind::LevelExceeded: return "level-exceeded";
    case ErrorKind::Mode: return "mode";
    case ErrorKind::Obstruction: return "stratification-obstruction";
    case ErrorKind::DegreeBound: return "degree-bound-exceeded";
    case ErrorKind::Closure: return "truncation-closure";
    case ErrorKind::Stabilization: return "stabilization";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace strat

#endif  // STRAT_ERRORS_HPP
