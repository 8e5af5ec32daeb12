#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace witness {

using Nat = boost::multiprecision::cpp_int;

inline std::string to_string(const Nat& n) { return n.str(); }

Nat parse_nat(const std::string& text);

// Number of 64-bit limbs, used for work accounting.
inline std::uint64_t limbs(const Nat& n) {
    if (n == 0) return 1;
    return static_cast<std::uint64_t>(boost::multiprecision::msb(n) / 64 + 1);
}

}  // namespace witness
