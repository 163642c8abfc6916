#pragma once

#include <array>
#include <cmath>
#include <string>

#include "cgnet/errors.hpp"
#include "cgnet/so3.hpp"

namespace cgnet::detail {

// CG prefactors need (l1 + l2 + l + 1)!, so the table covers 3 * kMaxDegree + 1.
inline constexpr int kFactorialTableSize = 3 * kMaxDegree + 2;

inline const std::array<double, kFactorialTableSize>& log_factorials() {
    static const auto table = [] {
        std::array<double, kFactorialTableSize> t{};
        long double acc = 0.0L;
        t[0] = 0.0;
        for (int n = 1; n < kFactorialTableSize; ++n) {
            acc += std::log(static_cast<long double>(n));
            t[n] = static_cast<double>(acc);
        }
        return t;
    }();
    return table;
}

inline double log_factorial(int n) { return log_factorials()[static_cast<std::size_t>(n)]; }

inline void check_degree(int ell, const char* what) {
    if (ell > kMaxDegree) {
        throw CapacityError(std::string(what) + ": degree " + std::to_string(ell) +
                            " exceeds factorial table limit " + std::to_string(kMaxDegree));
    }
}

}  // namespace cgnet::detail
