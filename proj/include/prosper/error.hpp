#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace prosper {

enum class ErrorCategory {
  kInvalidArgument,
  kCoverageViolation,
  kIncompleteLog,
  kParse,
  kRankDeficiency,
  kNoPairs,
  kIo,
};

// Machine-parsable name, e.g. "invalid-argument".
std::string_view to_string(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorCategory::kInvalidArgument, message);
}

}  // namespace prosper
