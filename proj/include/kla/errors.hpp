#pragma once

#include <stdexcept>
#include <string>

namespace kla {

enum class ErrorCode {
    Parse,
    NotOrderP,
    NotContained,
    InfiniteQuotient,
    NonSplitUnknownJ,
    UnknownJ,
    NotFree,
    NotRegular,
    EvenP,
    DecorationNeedsZ,
    NoApplicableTheorem,
    QuotientTooLarge,
    Invalid,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace kla
