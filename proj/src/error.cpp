#include "cubecx/error.hpp"

namespace cubecx {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyGraph: return "EmptyGraph";
        case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
        case ErrorCode::LoopEdge: return "LoopEdge";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
        case ErrorCode::HalfspaceViolation: return "HalfspaceViolation";
        case ErrorCode::MedianViolation: return "MedianViolation";
        case ErrorCode::NonCrossingPair: return "NonCrossingPair";
        case ErrorCode::NoSuchCube: return "NoSuchCube";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::SpecTooLarge: return "SpecTooLarge";
        case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
        case ErrorCode::RadiusExceedsDiameter: return "RadiusExceedsDiameter";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace cubecx
