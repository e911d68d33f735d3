#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lqgltr {

// Base class for all domain errors thrown by the library. `code()` is a
// stable machine-readable name, used verbatim in the CLI's error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define LQGLTR_DEFINE_ERROR(NAME)                                             \
    class NAME : public Error {                                               \
    public:                                                                   \
        explicit NAME(const std::string& what) : Error(#NAME, what) {}        \
    };

LQGLTR_DEFINE_ERROR(SingularMatrix)
LQGLTR_DEFINE_ERROR(NoConvergence)
LQGLTR_DEFINE_ERROR(NotHurwitz)
LQGLTR_DEFINE_ERROR(Uncontrollable)
LQGLTR_DEFINE_ERROR(Unobservable)
LQGLTR_DEFINE_ERROR(NotStabilizable)
LQGLTR_DEFINE_ERROR(NotSISO)
LQGLTR_DEFINE_ERROR(InvalidParams)
LQGLTR_DEFINE_ERROR(DimensionMismatch)
LQGLTR_DEFINE_ERROR(MissingIntegralGain)
LQGLTR_DEFINE_ERROR(DegenerateNumerator)
LQGLTR_DEFINE_ERROR(Diverged)
LQGLTR_DEFINE_ERROR(UnstableClosedLoop)
LQGLTR_DEFINE_ERROR(ObjectiveNaN)

#undef LQGLTR_DEFINE_ERROR

}  // namespace lqgltr
