#ifndef QES_ERRORS_HPP
#define QES_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace qes {

enum class ErrorKind {
  PoleProximity,
  SeriesNotConverged,
  DivisionByNearZero,
  LengthExceeded,
  NotSymmetric,
  NonCancellation,
  InadmissibleGauge,
  NoConvergence,
  AssumptionViolated,
  BranchPointProximity,
  UnsupportedN,
  IllConditioned,
  RankDeficient,
  DenominatorNearZero,
  ZeroNome,
  ConstraintViolated,
  ConfigError,
  ComputationFailed,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace qes

#endif
