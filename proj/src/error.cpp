#include "lvke/error.hpp"

namespace lvke {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::DegenerateCooccurrence: return "DegenerateCooccurrence";
    case ErrorCode::InvalidComponentCount: return "InvalidComponentCount";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::EmptyGold: return "EmptyGold";
    case ErrorCode::EmptyCollection: return "EmptyCollection";
    case ErrorCode::InsufficientDocuments: return "InsufficientDocuments";
    case ErrorCode::PosMisaligned: return "PosMisaligned";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace lvke
