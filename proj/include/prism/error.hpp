#pragma once

#include <stdexcept>
#include <string>

namespace prism {

/// Condition codes for everything this library can refuse to do.
enum class errc {
  file_not_found,
  unsupported_format,
  corrupt_image,
  parse_error,
  empty_manifest,
  dimension_mismatch,
  degenerate_class,
  singular_scatter,
  missing_prompt_id,
  invalid_ratio,
  unknown_label,
  length_mismatch,
  empty_class,
  invalid_argument,
  io_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
  throw Error(code, message);
}

inline const char* errc_name(errc code) {
  switch (code) {
    case errc::file_not_found: return "FileNotFound";
    case errc::unsupported_format: return "UnsupportedFormat";
    case errc::corrupt_image: return "CorruptImage";
    case errc::parse_error: return "ParseError";
    case errc::empty_manifest: return "EmptyManifest";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::degenerate_class: return "DegenerateClass";
    case errc::singular_scatter: return "SingularScatter";
    case errc::missing_prompt_id: return "MissingPromptId";
    case errc::invalid_ratio: return "InvalidRatio";
    case errc::unknown_label: return "UnknownLabel";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::empty_class: return "EmptyClass";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace prism
