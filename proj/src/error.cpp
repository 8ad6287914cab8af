#include "arcweave/error.hpp"

namespace arcweave {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::CenterMismatch: return "CenterMismatch";
        case ErrorCode::OrderMismatch: return "OrderMismatch";
        case ErrorCode::DivisionBySingular: return "DivisionBySingular";
        case ErrorCode::BranchAtSingularity: return "BranchAtSingularity";
        case ErrorCode::SeedInconsistent: return "SeedInconsistent";
        case ErrorCode::InnerNotCentered: return "InnerNotCentered";
        case ErrorCode::NotLocallyInvertible: return "NotLocallyInvertible";
        case ErrorCode::StepExceedsRadius: return "StepExceedsRadius";
        case ErrorCode::NonRealCenter: return "NonRealCenter";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SingularAtCenter: return "SingularAtCenter";
        case ErrorCode::BranchJumpDetected: return "BranchJumpDetected";
        case ErrorCode::UnknownBuiltin: return "UnknownBuiltin";
        case ErrorCode::ZeroDerivative: return "ZeroDerivative";
        case ErrorCode::ObstructionDetected: return "ObstructionDetected";
        case ErrorCode::DriftUnrecoverable: return "DriftUnrecoverable";
        case ErrorCode::QuadratureNonconvergent: return "QuadratureNonconvergent";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
        case ErrorCode::MalformedTrace: return "MalformedTrace";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace arcweave
