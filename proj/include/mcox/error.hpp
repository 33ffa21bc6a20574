#pragma once

#include <stdexcept>
#include <string>

namespace mcox {

enum class ErrorKind {
  kInvalidArgument,
  kInvalidPose,
  kInvalidObservation,
  kDimensionMismatch,
  kGeneration,
  kNoCandidate,
  kUnreachable,
  kParseFailure,
  kEndpoint,
  kConfig,
  kUndefinedComparison,
  kIo,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mcox
