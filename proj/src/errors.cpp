#include "qes/errors.hpp"

namespace qes {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::PoleProximity: return "PoleProximity";
    case ErrorKind::SeriesNotConverged: return "SeriesNotConverged";
    case ErrorKind::DivisionByNearZero: return "DivisionByNearZero";
    case ErrorKind::LengthExceeded: return "LengthExceeded";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NonCancellation: return "NonCancellation";
    case ErrorKind::InadmissibleGauge: return "InadmissibleGauge";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::AssumptionViolated: return "AssumptionViolated";
    case ErrorKind::BranchPointProximity: return "BranchPointProximity";
    case ErrorKind::UnsupportedN: return "UnsupportedN";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::DenominatorNearZero: return "DenominatorNearZero";
    case ErrorKind::ZeroNome: return "ZeroNome";
    case ErrorKind::ConstraintViolated: return "ConstraintViolated";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::ComputationFailed: return "ComputationFailed";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace qes
