#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cgnet/errors.hpp"
#include "cgnet/so3.hpp"
#include "factorial_table.hpp"

namespace cgnet {

namespace {

bool valid_triangle(int l1, int l2, int l) {
    return l1 >= 0 && l2 >= 0 && l >= std::abs(l1 - l2) && l <= l1 + l2;
}

}  // namespace

// Racah's closed form. The alternating sum is accumulated in long double and
// results below the cancellation noise floor are reported as exact zeros, so
// accidental zeros such as <1 0; 1 0 | 1 0> do not leave 1e-17 residue in
// the sparse blocks.
double clebsch_gordan_coeff(int l1, int l2, int l, int m1, int m2, int m) {
    if (std::abs(m1) > l1 || std::abs(m2) > l2 || std::abs(m) > l) {
        throw ArgumentError("clebsch_gordan_coeff: |m| exceeds degree");
    }
    detail::check_degree(std::max({l1, l2, l}), "clebsch_gordan_coeff");
    if (m1 + m2 != m || !valid_triangle(l1, l2, l)) return 0.0;
    // Coupling with the trivial representation is the identity.
    if (l1 == 0 || l2 == 0) return 1.0;

    using detail::log_factorial;
    const double log_pref =
        0.5 * (std::log(2.0 * l + 1.0) + log_factorial(l + l1 - l2) + log_factorial(l - l1 + l2) +
               log_factorial(l1 + l2 - l) - log_factorial(l1 + l2 + l + 1) + log_factorial(l + m) +
               log_factorial(l - m) + log_factorial(l1 - m1) + log_factorial(l1 + m1) + log_factorial(l2 - m2) +
               log_factorial(l2 + m2));

    const int k_lo = std::max({0, l2 - l - m1, l1 - l + m2});
    const int k_hi = std::min({l1 + l2 - l, l1 - m1, l2 + m2});

    long double sum = 0.0L;
    long double magnitude = 0.0L;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double log_den = log_factorial(k) + log_factorial(l1 + l2 - l - k) + log_factorial(l1 - m1 - k) +
                               log_factorial(l2 + m2 - k) + log_factorial(l - l2 + m1 + k) +
                               log_factorial(l - l1 - m2 + k);
        const long double term = std::exp(static_cast<long double>(log_pref - log_den));
        sum += (k % 2 == 0) ? term : -term;
        magnitude += term;
    }
    if (std::abs(sum) <= 64.0L * std::numeric_limits<double>::epsilon() * magnitude) return 0.0;
    return static_cast<double>(sum);
}

RealMatrix CGBlock::dense() const {
    RealMatrix c = RealMatrix::Zero(rows(), cols());
    for (const auto& e : entries) c(row_index(e.m1, e.m2), e.m + ell) = e.value;
    return c;
}

CGBlock cg_block(int l1, int l2, int l) {
    if (!valid_triangle(l1, l2, l)) {
        throw ArgumentError("cg_block: (" + std::to_string(l1) + ", " + std::to_string(l2) + ", " +
                            std::to_string(l) + ") violates the triangle inequality");
    }
    CGBlock block{l1, l2, l, {}};
    for (int m = -l; m <= l; ++m) {
        const int m1_lo = std::max(-l1, m - l2);
        const int m1_hi = std::min(l1, m + l2);
        for (int m1 = m1_lo; m1 <= m1_hi; ++m1) {
            const int m2 = m - m1;
            const double v = clebsch_gordan_coeff(l1, l2, l, m1, m2, m);
            if (v != 0.0) block.entries.push_back({m1, m2, m, v});
        }
    }
    return block;
}

CGTable::CGTable(int max_ell) : max_ell_(max_ell) {
    if (max_ell < 0) throw ArgumentError("CGTable: negative band limit");
    detail::check_degree(max_ell, "CGTable");
    const auto n = static_cast<std::size_t>(max_ell + 1);
    blocks_.resize(n * n * n);
    for (int l1 = 0; l1 <= max_ell; ++l1) {
        for (int l2 = 0; l2 <= max_ell; ++l2) {
            for (int l = std::abs(l1 - l2); l <= std::min(l1 + l2, max_ell); ++l) {
                blocks_[slot(l1, l2, l)] = cg_block(l1, l2, l);
            }
        }
    }
}

std::size_t CGTable::slot(int l1, int l2, int l) const {
    if (l1 < 0 || l2 < 0 || l > max_ell_ || l1 > max_ell_ || l2 > max_ell_ || !valid_triangle(l1, l2, l)) {
        throw ArgumentError("CGTable: no block for (" + std::to_string(l1) + ", " + std::to_string(l2) + ", " +
                            std::to_string(l) + ")");
    }
    const auto n = static_cast<std::size_t>(max_ell_ + 1);
    return (static_cast<std::size_t>(l1) * n + static_cast<std::size_t>(l2)) * n + static_cast<std::size_t>(l);
}

const CGBlock& CGTable::block(int l1, int l2, int l) const { return blocks_[slot(l1, l2, l)]; }

CGBlock& CGTable::mutable_block(int l1, int l2, int l) { return blocks_[slot(l1, l2, l)]; }

}  // namespace cgnet
