#include "cgnet/sht.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cgnet/errors.hpp"

namespace cgnet {

namespace {

void check_band(int bandlimit, int b, const char* what) {
    if (b <= 0) throw ArgumentError(std::string(what) + ": bandwidth must be positive");
    if (bandlimit < 0) throw ArgumentError(std::string(what) + ": negative band limit");
    if (bandlimit >= b) {
        throw ArgumentError(std::string(what) + ": band limit " + std::to_string(bandlimit) +
                            " must be below bandwidth " + std::to_string(b));
    }
}

Eigen::Vector3d unit_vector(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

}  // namespace

SphericalSignal::SphericalSignal(int b, int n_channels)
    : bandwidth(b), channels(static_cast<std::size_t>(n_channels), ComplexMatrix::Zero(2 * b, 2 * b)) {}

HarmonicCoefficients::HarmonicCoefficients(int bandlimit, int n_channels) {
    blocks.reserve(static_cast<std::size_t>(bandlimit + 1));
    for (int l = 0; l <= bandlimit; ++l) blocks.push_back(ComplexMatrix::Zero(2 * l + 1, n_channels));
}

double grid_colatitude(int b, int j) { return std::numbers::pi * (2.0 * j + 1.0) / (4.0 * b); }

double grid_azimuth(int b, int k) { return std::numbers::pi * k / b; }

std::vector<double> quadrature_weights(int b) {
    std::vector<double> w(static_cast<std::size_t>(2 * b));
    for (int j = 0; j < 2 * b; ++j) {
        double acc = 0.0;
        for (int k = 0; k < b; ++k) {
            acc += std::sin((2.0 * j + 1.0) * (2.0 * k + 1.0) * std::numbers::pi / (4.0 * b)) / (2.0 * k + 1.0);
        }
        w[static_cast<std::size_t>(j)] = (2.0 / b) * std::sin(grid_colatitude(b, j)) * acc;
    }
    return w;
}

HarmonicCoefficients forward_sht(const SphericalSignal& signal, int bandlimit) {
    const int b = signal.bandwidth;
    check_band(bandlimit, b, "forward_sht");
    const int n = signal.n_channels();
    for (const auto& ch : signal.channels) {
        if (ch.rows() != 2 * b || ch.cols() != 2 * b) throw ArgumentError("forward_sht: grid is not 2b x 2b");
    }

    const auto weights = quadrature_weights(b);
    const double area = std::numbers::pi / b;
    HarmonicCoefficients out(bandlimit, n);
    for (int j = 0; j < 2 * b; ++j) {
        const double theta = grid_colatitude(b, j);
        const double wj = area * weights[static_cast<std::size_t>(j)];
        for (int k = 0; k < 2 * b; ++k) {
            const auto y = spherical_harmonics_upto(bandlimit, theta, grid_azimuth(b, k));
            for (int c = 0; c < n; ++c) {
                const Complex f = wj * signal.channels[static_cast<std::size_t>(c)](j, k);
                for (int l = 0; l <= bandlimit; ++l) {
                    for (int m = -l; m <= l; ++m) {
                        out.at(l, m, c) += f * std::conj(y[static_cast<std::size_t>(l * l + l + m)]);
                    }
                }
            }
        }
    }
    return out;
}

SphericalSignal inverse_sht(const HarmonicCoefficients& coeffs, int b) {
    const int bandlimit = coeffs.bandlimit();
    check_band(bandlimit, b, "inverse_sht");
    const int n = coeffs.n_channels();
    SphericalSignal out(b, n);
    for (int j = 0; j < 2 * b; ++j) {
        const double theta = grid_colatitude(b, j);
        for (int k = 0; k < 2 * b; ++k) {
            const auto y = spherical_harmonics_upto(bandlimit, theta, grid_azimuth(b, k));
            for (int c = 0; c < n; ++c) {
                Complex acc = 0.0;
                for (int l = 0; l <= bandlimit; ++l) {
                    for (int m = -l; m <= l; ++m) acc += coeffs.at(l, m, c) * y[static_cast<std::size_t>(l * l + l + m)];
                }
                out.channels[static_cast<std::size_t>(c)](j, k) = acc;
            }
        }
    }
    return out;
}

Complex synthesize_at(const HarmonicCoefficients& coeffs, int channel, double theta, double phi) {
    const int bandlimit = coeffs.bandlimit();
    const auto y = spherical_harmonics_upto(bandlimit, theta, phi);
    Complex acc = 0.0;
    for (int l = 0; l <= bandlimit; ++l) {
        for (int m = -l; m <= l; ++m) acc += coeffs.at(l, m, channel) * y[static_cast<std::size_t>(l * l + l + m)];
    }
    return acc;
}

HarmonicCoefficients rotate_coefficients(const HarmonicCoefficients& coeffs, const EulerAngles& rotation) {
    HarmonicCoefficients out = coeffs;
    for (int l = 1; l <= coeffs.bandlimit(); ++l) {
        out.blocks[static_cast<std::size_t>(l)] = wigner_D(l, rotation).matrix * coeffs.blocks[static_cast<std::size_t>(l)];
    }
    return out;
}

SphericalSignal resample_rotated(const HarmonicCoefficients& coeffs, const EulerAngles& rotation, int b) {
    check_band(coeffs.bandlimit(), b, "resample_rotated");
    const Matrix3 inv = rotation_matrix(rotation).transpose();
    const int n = coeffs.n_channels();
    SphericalSignal out(b, n);
    for (int j = 0; j < 2 * b; ++j) {
        for (int k = 0; k < 2 * b; ++k) {
            const Eigen::Vector3d p = inv * unit_vector(grid_colatitude(b, j), grid_azimuth(b, k));
            const double theta = std::atan2(std::hypot(p.x(), p.y()), p.z());
            const double phi = std::atan2(p.y(), p.x());
            for (int c = 0; c < n; ++c) out.channels[static_cast<std::size_t>(c)](j, k) = synthesize_at(coeffs, c, theta, phi);
        }
    }
    return out;
}

double grid_energy(const SphericalSignal& signal, int channel) {
    const int b = signal.bandwidth;
    const auto weights = quadrature_weights(b);
    const auto& grid = signal.channels.at(static_cast<std::size_t>(channel));
    double acc = 0.0;
    for (int j = 0; j < 2 * b; ++j) acc += weights[static_cast<std::size_t>(j)] * grid.row(j).squaredNorm();
    return acc * std::numbers::pi / b;
}

}  // namespace cgnet
