#include "knotdimer/error.hpp"

namespace knotdimer {

std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedInput: return "MalformedInput";
    case ErrorKind::NonPlanar: return "NonPlanar";
    case ErrorKind::BadLabeling: return "BadLabeling";
    case ErrorKind::EmptyDiagram: return "EmptyDiagram";
    case ErrorKind::UnknownKnot: return "UnknownKnot";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NotPlanarEmbedding: return "NotPlanarEmbedding";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::NotNormalizable: return "NotNormalizable";
    case ErrorKind::FaceNotAdjacent: return "FaceNotAdjacent";
    case ErrorKind::FaceUnbounded: return "FaceUnbounded";
    case ErrorKind::KasteleynCheckFailed: return "KasteleynCheckFailed";
    case ErrorKind::InvalidColoring: return "InvalidColoring";
    case ErrorKind::InvalidRepresentation: return "InvalidRepresentation";
    case ErrorKind::NotSingleCrossing: return "NotSingleCrossing";
    case ErrorKind::RewriteCheckFailed: return "RewriteCheckFailed";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + detail), kind_(kind) {}

}  // namespace knotdimer
