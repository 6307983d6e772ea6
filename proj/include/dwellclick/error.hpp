#pragma once

#include <stdexcept>
#include <string>

namespace dwell {

// Failure categories. The CLI maps these onto its exit codes.
enum class ErrorKind {
    io,
    schema,
    contract,
    insufficient_data,
    fit_failure,
    undefined_pivot,
    validation,
    lookup,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

const char* to_string(ErrorKind kind);

}  // namespace dwell
