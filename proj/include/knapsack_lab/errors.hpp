#pragma once

#include <stdexcept>
#include <string>

namespace knapsack_lab {

enum class ErrorKind {
  invalid_modulus,
  no_inverse,
  domain,
  parameter,
  length_mismatch,
  message_range,
  malformed_ciphertext,
  format,
  too_large,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_modulus: return "invalid-modulus";
    case ErrorKind::no_inverse: return "no-inverse";
    case ErrorKind::domain: return "domain";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::length_mismatch: return "length-mismatch";
    case ErrorKind::message_range: return "message-range";
    case ErrorKind::malformed_ciphertext: return "malformed-ciphertext";
    case ErrorKind::format: return "format";
    case ErrorKind::too_large: return "too-large";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace knapsack_lab
