#pragma once

#include <stdexcept>
#include <string>

namespace qrf {

enum class ErrorKind {
    RegisterConflict,
    UnknownParticle,
    SystemNotVirgin,
    AlreadyPrepared,
    SupportViolation,
    DimensionMismatch,
    EmptyConservingSet,
    InvalidArgument,
};

// All library errors carry a machine-checkable kind plus a human message.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

const char* error_kind_name(ErrorKind kind);

} // namespace qrf
