#pragma once

#include <vector>

#include "cgnet/so3.hpp"

namespace cgnet {

/// Complex samples on the 2b x 2b Driscoll-Healy grid, one matrix per channel.
/// Row j is colatitude theta_j = pi (2j + 1) / (4b), column k is azimuth phi_k = pi k / b.
struct SphericalSignal {
    int bandwidth = 0;
    std::vector<ComplexMatrix> channels;

    SphericalSignal() = default;
    SphericalSignal(int b, int n_channels);

    int n_channels() const { return static_cast<int>(channels.size()); }
    int grid_size() const { return 2 * bandwidth; }
};

/// Harmonic coefficients up to band limit L. blocks[l] is (2l+1) x n_channels
/// with row m + l holding the coefficient of Y_l^m.
struct HarmonicCoefficients {
    std::vector<ComplexMatrix> blocks;

    HarmonicCoefficients() = default;
    HarmonicCoefficients(int bandlimit, int n_channels);

    int bandlimit() const { return static_cast<int>(blocks.size()) - 1; }
    int n_channels() const { return blocks.empty() ? 0 : static_cast<int>(blocks.front().cols()); }

    Complex& at(int ell, int m, int channel) { return blocks[ell](m + ell, channel); }
    const Complex& at(int ell, int m, int channel) const { return blocks[ell](m + ell, channel); }
};

double grid_colatitude(int b, int j);
double grid_azimuth(int b, int k);

/// Driscoll-Healy colatitude weights w_j. For f band-limited below b,
/// the surface integral of f equals (pi / b) * sum_{j,k} w_j f(theta_j, phi_k).
std::vector<double> quadrature_weights(int b);

/// Projection onto conj(Y_l^m) by Driscoll-Healy quadrature. Requires L < b.
HarmonicCoefficients forward_sht(const SphericalSignal& signal, int bandlimit);

/// Pointwise synthesis sum_{l,m} c_l^m Y_l^m on the 2b x 2b grid. Requires L < b.
SphericalSignal inverse_sht(const HarmonicCoefficients& coeffs, int b);

/// Evaluate one channel of the expansion at an arbitrary point.
Complex synthesize_at(const HarmonicCoefficients& coeffs, int channel, double theta, double phi);

/// c_l -> D^l(R) c_l for every degree: the coefficients of x -> f(R^{-1} x).
HarmonicCoefficients rotate_coefficients(const HarmonicCoefficients& coeffs, const EulerAngles& rotation);

/// Grid samples of x -> f(R^{-1} x) by direct evaluation at rotated sample points.
SphericalSignal resample_rotated(const HarmonicCoefficients& coeffs, const EulerAngles& rotation, int b);

/// Quadrature estimate of the integral of |f|^2 over the sphere for one channel.
double grid_energy(const SphericalSignal& signal, int channel);

}  // namespace cgnet
