#include "sqlfill/errors.hpp"

namespace sqlfill {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::format: return "format";
    case ErrorKind::validation: return "validation";
    case ErrorKind::binding: return "binding";
    case ErrorKind::grammar: return "grammar";
    case ErrorKind::context: return "context";
    case ErrorKind::availability: return "availability";
    case ErrorKind::corpus: return "corpus";
    case ErrorKind::internal: return "internal";
  }
  return "internal";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return 1;
    case ErrorKind::format:
    case ErrorKind::validation:
    case ErrorKind::binding:
    case ErrorKind::grammar:
    case ErrorKind::context:
    case ErrorKind::corpus: return 2;
    case ErrorKind::availability: return 3;
    case ErrorKind::internal: return 4;
  }
  return 4;
}

}  // namespace sqlfill
