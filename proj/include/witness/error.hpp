#pragma once
#include <stdexcept>
#include <string>

namespace witness {

// Domain errors carry a stable kind tag ("SyntaxError", "BudgetExceeded", ...)
// that the CLI prints and tests match on.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace witness
