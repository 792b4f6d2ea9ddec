#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cricket_rules {

/// Failure taxonomy shared by the library, the CLI (exit codes) and the
/// HTTP service (status codes).
enum class ErrorCode {
  MalformedHeader,
  FileUnreadable,
  EmptyCorpus,
  MalformedLexicon,
  InvalidFilter,
  UnknownPlayer,
  EmptySelection,
  AllZeroMatrix,
  DegenerateMatrix,
  RankZero,
  AnchorUnobserved,
  EmptySide,
  LabelMismatch,
  DegenerateConfiguration,
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::FileUnreadable: return "FileUnreadable";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::MalformedLexicon: return "MalformedLexicon";
    case ErrorCode::InvalidFilter: return "InvalidFilter";
    case ErrorCode::UnknownPlayer: return "UnknownPlayer";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::AllZeroMatrix: return "AllZeroMatrix";
    case ErrorCode::DegenerateMatrix: return "DegenerateMatrix";
    case ErrorCode::RankZero: return "RankZero";
    case ErrorCode::AnchorUnobserved: return "AnchorUnobserved";
    case ErrorCode::EmptySide: return "EmptySide";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
  }
  return "Unknown";
}

/// Process exit code for a failure. 0 is success, 1 is reserved for
/// unexpected failures, 2 for command-line usage errors.
inline int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidFilter: return 2;
    case ErrorCode::FileUnreadable: return 3;
    case ErrorCode::EmptyCorpus: return 4;
    case ErrorCode::MalformedLexicon: return 5;
    case ErrorCode::UnknownPlayer: return 6;
    case ErrorCode::EmptySelection: return 7;
    case ErrorCode::AllZeroMatrix: return 8;
    case ErrorCode::DegenerateMatrix: return 9;
    case ErrorCode::RankZero: return 10;
    case ErrorCode::AnchorUnobserved: return 11;
    case ErrorCode::EmptySide: return 12;
    case ErrorCode::LabelMismatch: return 13;
    case ErrorCode::DegenerateConfiguration: return 14;
    case ErrorCode::MalformedHeader: return 15;
  }
  return 1;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cricket_rules
