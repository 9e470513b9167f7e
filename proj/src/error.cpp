#include "thriftidx/error.hpp"

namespace thriftidx {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::BadNumber: return "BadNumber";
        case ErrorCode::BadField: return "BadField";
        case ErrorCode::ConflictingDuplicate: return "ConflictingDuplicate";
        case ErrorCode::NoQualifyingCountries: return "NoQualifyingCountries";
        case ErrorCode::InvalidRoleMap: return "InvalidRoleMap";
        case ErrorCode::AllZeroWeights: return "AllZeroWeights";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::DegenerateX: return "DegenerateX";
        case ErrorCode::TooFewPoints: return "TooFewPoints";
        case ErrorCode::EmptyAfterScreen: return "EmptyAfterScreen";
        case ErrorCode::EmptyYearRange: return "EmptyYearRange";
        case ErrorCode::InvalidPath: return "InvalidPath";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
        case ErrorCode::UnknownScreenLevel: return "UnknownScreenLevel";
        case ErrorCode::EmptySeries: return "EmptySeries";
        case ErrorCode::SnapshotMissing: return "SnapshotMissing";
        case ErrorCode::BadSnapshot: return "BadSnapshot";
        case ErrorCode::PortInUse: return "PortInUse";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace thriftidx
