#pragma once

#include <cstddef>
#include <vector>

#include "cgnet/sht.hpp"
#include "cgnet/so3.hpp"

namespace cgnet {

/// Fragment counts (tau_0, ..., tau_L) of a covariant activation.
struct ActivationType {
    std::vector<int> tau;

    ActivationType() = default;
    explicit ActivationType(std::vector<int> counts);
    static ActivationType uniform(int bandlimit, int count);

    int bandlimit() const { return static_cast<int>(tau.size()) - 1; }
    int operator[](int ell) const { return tau[static_cast<std::size_t>(ell)]; }
    /// Total scalar entries: sum over l of (2l+1) tau_l.
    std::size_t scalar_count() const;
    /// Number of fragments summed over all degrees.
    int fragment_count() const;

    friend bool operator==(const ActivationType&, const ActivationType&) = default;
};

/// One (2l+1) x tau_l complex matrix per degree; column j of parts[l] is a
/// rho_l-covariant fragment.
struct CovariantActivation {
    std::vector<ComplexMatrix> parts;

    CovariantActivation() = default;
    explicit CovariantActivation(std::vector<ComplexMatrix> blocks) : parts(std::move(blocks)) {}
    static CovariantActivation zeros(const ActivationType& type);

    int bandlimit() const { return static_cast<int>(parts.size()) - 1; }
    ActivationType type() const;
    ComplexMatrix& operator[](int ell) { return parts[static_cast<std::size_t>(ell)]; }
    const ComplexMatrix& operator[](int ell) const { return parts[static_cast<std::size_t>(ell)]; }

    bool all_finite() const;
    double squared_norm() const;

    CovariantActivation& operator+=(const CovariantActivation& other);
};

/// Layer-0 activation: the harmonic coefficients of all input channels, type (n_in, ..., n_in).
CovariantActivation to_activation(const HarmonicCoefficients& coeffs);

/// D^l(R) for l = 0..max_ell.
std::vector<ComplexMatrix> wigner_D_all(int max_ell, const EulerAngles& rotation);

/// Left-multiplies every part by its Wigner matrix: F_l -> D^l(R) F_l.
CovariantActivation rotate(const CovariantActivation& activation, const std::vector<ComplexMatrix>& wigner);
CovariantActivation rotate(const CovariantActivation& activation, const EulerAngles& rotation);

/// ||A - B||_F / ||B||_F with the Frobenius norm taken over all parts.
double relative_difference(const CovariantActivation& a, const CovariantActivation& b);

}  // namespace cgnet
