#pragma once

#include <stdexcept>
#include <string>

namespace ddeit {

#define DDEIT_ERROR(NAME)                                        \
  struct NAME : std::runtime_error {                             \
    explicit NAME(const std::string& msg)                        \
        : std::runtime_error(std::string(#NAME) + ": " + msg) {} \
    static constexpr const char* name() { return #NAME; }        \
  }

DDEIT_ERROR(ConfigError);
DDEIT_ERROR(DegenerateSteadyState);
DDEIT_ERROR(SolveFailure);
DDEIT_ERROR(NonlinearRegime);
DDEIT_ERROR(DivisionNearZero);
DDEIT_ERROR(ZeroCoupling);
DDEIT_ERROR(GridTooCoarse);
DDEIT_ERROR(NoWindowFound);
DDEIT_ERROR(NoBracket);
DDEIT_ERROR(QuadratureNotConverged);

#undef DDEIT_ERROR

} // namespace ddeit
