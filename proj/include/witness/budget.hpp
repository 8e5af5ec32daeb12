#pragma once
#include <cstdint>
#include <optional>

#include "witness/error.hpp"
#include "witness/nat.hpp"

namespace witness {

// Work counter shared by a single computation. Exceeding the limit throws
// Error("BudgetExceeded").
class Budget {
public:
    explicit Budget(std::uint64_t limit) : limit_(limit) {}
    void charge(std::uint64_t units = 1);
    // One unit plus the limb count of the value just produced.
    void charge_nat(const Nat& produced) { charge(1 + limbs(produced)); }
    std::uint64_t used() const { return used_; }
    std::uint64_t limit() const { return limit_; }
    std::uint64_t remaining() const { return used_ >= limit_ ? 0 : limit_ - used_; }

private:
    std::uint64_t limit_;
    std::uint64_t used_ = 0;
};

struct Budgeted {
    std::optional<Nat> value;
    std::uint64_t work = 0;
    bool ok() const { return value.has_value(); }
};

constexpr std::uint64_t kDefaultBudget = 1000000;

}  // namespace witness
