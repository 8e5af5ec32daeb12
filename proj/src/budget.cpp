#include "witness/budget.hpp"

#include <string>

namespace witness {

void Budget::charge(std::uint64_t units) {
    used_ += units;
    if (used_ > limit_)
        fail("BudgetExceeded", "work budget of " + std::to_string(limit_) + " exhausted");
}

Nat parse_nat(const std::string& text) {
    if (text.empty()) fail("SyntaxError", "expected a natural number");
    for (char c : text)
        if (c < '0' || c > '9') fail("SyntaxError", "not a natural number: " + text);
    return Nat(text);
}

}  // namespace witness
