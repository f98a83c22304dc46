#pragma once

#include <stdexcept>
#include <string>

namespace hvwork {

// Absolute tolerance for every numeric comparison in the workbench. All
// quantities are finite sums of products of double entries, so anything
// beyond a few ulps of drift indicates a real violation.
inline constexpr double kTolerance = 1e-12;

// Reserved label for the augmented-spectrum null outcome ("no result").
// Never a member of a measurement's own outcome set.
inline constexpr const char* kThetaLabel = "theta";

// Reserved state tag marking a response table as state-independent.
inline constexpr const char* kAnyStateTag = "ANY";

enum class ErrorCode {
  kArgument,
  kLookup,
  kParse,
  kInvariant,
  kPrecondition,
  kWrongAudit,
  kTotalNoShow,
  kNoWitness,
  kIo,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& w) : Error(ErrorCode::kArgument, w) {}
};
struct LookupError : Error {
  explicit LookupError(const std::string& w) : Error(ErrorCode::kLookup, w) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(ErrorCode::kParse, w) {}
};
struct InvariantError : Error {
  explicit InvariantError(const std::string& w) : Error(ErrorCode::kInvariant, w) {}
};
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w) : Error(ErrorCode::kPrecondition, w) {}
};
// Raised when the unconditional Born audit is applied to an augmented table
// or the conditional audit to a plain one.
struct WrongAuditError : Error {
  explicit WrongAuditError(const std::string& w) : Error(ErrorCode::kWrongAudit, w) {}
};
// Raised when a conditional audit's detection probability vanishes.
struct TotalNoShowError : Error {
  explicit TotalNoShowError(const std::string& w) : Error(ErrorCode::kTotalNoShow, w) {}
};
// Raised when no hidden variable is shared by all preparations, so a
// lemma-style argument has no cell to examine.
struct NoWitnessError : Error {
  explicit NoWitnessError(const std::string& w) : Error(ErrorCode::kNoWitness, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorCode::kIo, w) {}
};
struct InternalError : Error {
  explicit InternalError(const std::string& w) : Error(ErrorCode::kInternal, w) {}
};

}  // namespace hvwork
