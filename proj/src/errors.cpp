#include "rgbethe/errors.hpp"

namespace rgbethe {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateParameter: return "DuplicateParameter";
        case ErrorCode::NonpositiveParameter: return "NonpositiveParameter";
        case ErrorCode::CoincidentArguments: return "CoincidentArguments";
        case ErrorCode::DuplicateLevel: return "DuplicateLevel";
        case ErrorCode::ZeroCoupling: return "ZeroCoupling";
        case ErrorCode::NonpositiveEta0: return "NonpositiveEta0";
        case ErrorCode::NonpositiveLevel: return "NonpositiveLevel";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::WrongVariant: return "WrongVariant";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::PoleCollision: return "PoleCollision";
        case ErrorCode::SeedDimensionMismatch: return "SeedDimensionMismatch";
        case ErrorCode::SpinNotHalf: return "SpinNotHalf";
        case ErrorCode::IncompleteEnumeration: return "IncompleteEnumeration";
        case ErrorCode::NonrealLambda: return "NonrealLambda";
        case ErrorCode::RootFindingFailure: return "RootFindingFailure";
        case ErrorCode::BadPartition: return "BadPartition";
        case ErrorCode::PathStalled: return "PathStalled";
        case ErrorCode::GaugeCollision: return "GaugeCollision";
        case ErrorCode::SectorMismatch: return "SectorMismatch";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::SingularDual: return "SingularDual";
        case ErrorCode::LinearSystemSingular: return "LinearSystemSingular";
        case ErrorCode::UnknownOperator: return "UnknownOperator";
        case ErrorCode::EigensolverFailure: return "EigensolverFailure";
        case ErrorCode::NoMatch: return "NoMatch";
        case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

}  // namespace rgbethe
