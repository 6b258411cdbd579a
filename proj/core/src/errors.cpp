#include "curveq/errors.hpp"

namespace curveq {

ParseError::ParseError(Kind kind, std::size_t offset, const std::string& message)
    : Error(message + " at offset " + std::to_string(offset)), kind_(kind), offset_(offset) {}

EvaluationError::EvaluationError(std::size_t offset, const std::string& message)
    : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

RegularityError::RegularityError(double parameter, const std::string& message)
    : Error(message + " at t = " + std::to_string(parameter)), parameter_(parameter) {}

CurvatureError::CurvatureError(double arc_length, const std::string& message)
    : Error(message + " at s = " + std::to_string(arc_length)), arc_length_(arc_length) {}

SolverError::SolverError(double residual, const std::string& message)
    : Error(message + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

}  // namespace curveq
