#include "gfe/error.hpp"

namespace gfe {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::CBoundViolated: return "CBoundViolated";
        case ErrorCode::KUnbounded: return "KUnbounded";
        case ErrorCode::RatioDensityNotNormalized: return "RatioDensityNotNormalized";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::Diverged: return "Diverged";
        case ErrorCode::FlowDiverged: return "FlowDiverged";
        case ErrorCode::NoHits: return "NoHits";
        case ErrorCode::BracketFailure: return "BracketFailure";
        case ErrorCode::DivergentDerivative: return "DivergentDerivative";
        case ErrorCode::BoundViolated: return "BoundViolated";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::DriftZero: return "DriftZero";
        case ErrorCode::DomainTooSmall: return "DomainTooSmall";
        case ErrorCode::CflViolation: return "CflViolation";
        case ErrorCode::MomentDiverged: return "MomentDiverged";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

ErrorKind kind_of(ErrorCode code) {
    switch (code) {
        case ErrorCode::CBoundViolated:
        case ErrorCode::KUnbounded:
        case ErrorCode::RatioDensityNotNormalized:
        case ErrorCode::InvalidParameter:
        case ErrorCode::ConfigError:
            return ErrorKind::Validation;
        case ErrorCode::IoError:
            return ErrorKind::Io;
        default:
            return ErrorKind::Estimation;
    }
}

}  // namespace gfe
