#include "prosper/error.hpp"

namespace prosper {

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kInvalidArgument: return "invalid-argument";
    case ErrorCategory::kCoverageViolation: return "coverage-violation";
    case ErrorCategory::kIncompleteLog: return "incomplete-log";
    case ErrorCategory::kParse: return "parse-error";
    case ErrorCategory::kRankDeficiency: return "rank-deficiency";
    case ErrorCategory::kNoPairs: return "no-pairs";
    case ErrorCategory::kIo: return "io-error";
  }
  return "unknown";
}

}  // namespace prosper
