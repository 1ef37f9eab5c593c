#pragma once

#include <stdexcept>
#include <string>

namespace wwf {

// Error classes map to CLI exit codes (usage errors exit 2, etc.).
enum class ErrorCategory {
    usage = 2,
    io = 3,
    validation = 4,
    numeric = 5,
    insufficient_data = 6,
    fit_failure = 7,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const { return category_; }
    int exit_code() const { return static_cast<int>(category_); }

private:
    ErrorCategory category_;
};

} // namespace wwf
