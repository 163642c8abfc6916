#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "cgnet/activation.hpp"
#include "cgnet/sht.hpp"

namespace cgnet::tu {

inline void fill_gaussian(ComplexMatrix& m, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const double re = normal(rng);
        m.data()[i] = {re, normal(rng)};
    }
}

inline CovariantActivation random_activation(const ActivationType& type, std::mt19937_64& rng) {
    auto a = CovariantActivation::zeros(type);
    for (auto& p : a.parts) fill_gaussian(p, rng);
    return a;
}

inline HarmonicCoefficients random_coefficients(int bandlimit, int channels, std::mt19937_64& rng) {
    HarmonicCoefficients c(bandlimit, channels);
    for (auto& b : c.blocks) fill_gaussian(b, rng);
    return c;
}

inline double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Relative error with a floor on the denominator so that entries that are
// zero on both sides compare as equal.
inline double rel_err(double a, double b, double floor = 1e-8) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace cgnet::tu
