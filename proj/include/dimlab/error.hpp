#pragma once

#include <stdexcept>
#include <string>

namespace dimlab {

enum class ErrorKind {
  invalid_argument,
  resolution_exceeded,
  insufficient_scales,
  insufficient_tail,
  no_valid_scale_pairs,
  dimension_mismatch,
  cutoff_exceeds_resolution,
  unknown_example,
  invalid_config,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::resolution_exceeded: return "resolution-exceeded";
    case ErrorKind::insufficient_scales: return "insufficient-scales";
    case ErrorKind::insufficient_tail: return "insufficient-tail";
    case ErrorKind::no_valid_scale_pairs: return "no-valid-scale-pairs";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::cutoff_exceeds_resolution: return "cutoff-exceeds-resolution";
    case ErrorKind::unknown_example: return "unknown-example";
    case ErrorKind::invalid_config: return "invalid-config";
  }
  return "error";
}

}  // namespace dimlab
