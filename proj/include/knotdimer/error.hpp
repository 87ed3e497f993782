#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace knotdimer {

enum class ErrorKind {
  MalformedInput,
  NonPlanar,
  BadLabeling,
  EmptyDiagram,
  UnknownKnot,
  NotSquare,
  NotPlanarEmbedding,
  Disconnected,
  NotNormalizable,
  FaceNotAdjacent,
  FaceUnbounded,
  KasteleynCheckFailed,
  InvalidColoring,
  InvalidRepresentation,
  NotSingleCrossing,
  RewriteCheckFailed,
};

std::string_view kind_name(ErrorKind kind);

// Every failure the library reports carries one of the kinds above; the CLI
// prints kind_name() as the diagnostic tag.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace knotdimer
