#pragma once

#include <stdexcept>
#include <string>

namespace sqlfill {

/// Diagnostic category of a failure. The CLI maps each category to an exit code.
enum class ErrorKind {
  usage,         // bad flags or arguments
  format,        // malformed JSON / unparseable input file
  validation,    // structurally valid input that breaks an invariant
  binding,       // SQL references an unknown table or column
  grammar,       // SQL construct outside the supported dialect
  context,       // value slot without a resolvable column context
  availability,  // database file or directory missing
  corpus,        // gold query fails to execute
  internal,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Exit status for a given error category: 1 usage, 2 input/format, 3 database
/// availability, 4 internal.
int exit_code_for(ErrorKind kind);

}  // namespace sqlfill
