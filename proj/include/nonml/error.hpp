#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nonml {

// Every failure the library reports is an Error tagged with a kind; the CLI
// maps kinds to distinct exit codes.
enum class ErrorKind {
  Io,
  Parse,
  Asymmetric,
  SelfLoop,
  UnknownLabel,
  DuplicateLabel,
  EmptyInput,
  Dimension,
  Invariant,
  UnknownStatistic,
  InvalidParameter,
  FixedLayer,
  Precondition,
  Singular,
  NonConvergence,
  Degeneracy,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nonml
