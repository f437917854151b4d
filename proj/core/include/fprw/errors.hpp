#ifndef FPRW_ERRORS_HPP
#define FPRW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fprw {

// Composition u.v requested where tau(u) equals the factor of v's first letter.
struct CompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Last letter (or similar) requested on the empty word.
struct EmptyWordError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shift requested for a word outside the cone of the shift base.
struct ConeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation requires a valid model but validation produced diagnostics.
struct InvalidModel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input document (syntax, unknown field, wrong type). Distinct
// from InvalidModel, which covers well-formed documents whose matrices
// violate invariants.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exhaustive enumeration would exceed the configured path budget.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Truncated solver state table would exceed the configured state budget.
struct StateBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solver start word is longer than the truncation depth.
struct TruncationTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Decomposition detail requested for an exit record that is not certified.
struct UncertifiedRecord : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Estimator requires at least one certified exit record.
struct NoCertifiedRecords : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fprw

#endif
