#include "mcox/error.hpp"

namespace mcox {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kInvalidPose: return "invalid-pose";
    case ErrorKind::kInvalidObservation: return "invalid-observation";
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kGeneration: return "generation";
    case ErrorKind::kNoCandidate: return "no-candidate";
    case ErrorKind::kUnreachable: return "unreachable";
    case ErrorKind::kParseFailure: return "parse-failure";
    case ErrorKind::kEndpoint: return "endpoint";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kUndefinedComparison: return "undefined-comparison";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace mcox
