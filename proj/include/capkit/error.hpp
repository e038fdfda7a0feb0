#pragma once

#include <stdexcept>
#include <string>

namespace capkit {

// Error categories map 1:1 onto CLI exit codes (io=1, malformed=2,
// consistency=3).
enum class ErrorCategory { io, malformed, consistency, internal };

class Error : public std::runtime_error {
  public:
    Error(ErrorCategory category, std::string code, const std::string& message)
        : std::runtime_error("error:" + category_name(category) + ": [" + code + "] " + message),
          category_(category),
          code_(std::move(code)) {}

    ErrorCategory category() const { return category_; }

    // Stable machine-checkable error code, e.g. "MalformedLine".
    const std::string& code() const { return code_; }

    static std::string category_name(ErrorCategory c) {
        switch (c) {
            case ErrorCategory::io: return "io";
            case ErrorCategory::malformed: return "malformed";
            case ErrorCategory::consistency: return "consistency";
            case ErrorCategory::internal: return "internal";
        }
        return "internal";
    }

  private:
    ErrorCategory category_;
    std::string code_;
};

inline Error io_error(const std::string& code, const std::string& msg) {
    return Error(ErrorCategory::io, code, msg);
}
inline Error malformed_error(const std::string& code, const std::string& msg) {
    return Error(ErrorCategory::malformed, code, msg);
}
inline Error consistency_error(const std::string& code, const std::string& msg) {
    return Error(ErrorCategory::consistency, code, msg);
}
inline Error internal_error(const std::string& code, const std::string& msg) {
    return Error(ErrorCategory::internal, code, msg);
}

}  // namespace capkit
