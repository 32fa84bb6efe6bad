#pragma once

#include <stdexcept>
#include <string>

namespace domainlens {

// Broad failure categories; the CLI maps them onto exit codes 2/3/4.
enum class ErrorCategory { Config, Data, Invariant };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), category_(category), code_(std::move(code)) {}

    ErrorCategory category() const noexcept { return category_; }
    // Short machine-readable tag, e.g. "DuplicateDomain".
    const std::string& code() const noexcept { return code_; }

private:
    ErrorCategory category_;
    std::string code_;
};

inline Error config_error(std::string code, const std::string& detail) {
    return Error(ErrorCategory::Config, std::move(code), detail);
}

inline Error data_error(std::string code, const std::string& detail) {
    return Error(ErrorCategory::Data, std::move(code), detail);
}

inline Error invariant_error(std::string code, const std::string& detail) {
    return Error(ErrorCategory::Invariant, std::move(code), detail);
}

}  // namespace domainlens
