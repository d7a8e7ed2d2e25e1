#pragma once

#include <stdexcept>
#include <string>

namespace rgbethe {

enum class ErrorCode {
    DuplicateParameter,
    NonpositiveParameter,
    CoincidentArguments,
    DuplicateLevel,
    ZeroCoupling,
    NonpositiveEta0,
    NonpositiveLevel,
    DimensionMismatch,
    WrongVariant,
    NoConvergence,
    PoleCollision,
    SeedDimensionMismatch,
    SpinNotHalf,
    IncompleteEnumeration,
    NonrealLambda,
    RootFindingFailure,
    BadPartition,
    PathStalled,
    GaugeCollision,
    SectorMismatch,
    TooLarge,
    SingularDual,
    LinearSystemSingular,
    UnknownOperator,
    EigensolverFailure,
    NoMatch,
    InvalidInput,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace rgbethe
