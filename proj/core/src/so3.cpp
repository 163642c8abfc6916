#include "cgnet/so3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cgnet/errors.hpp"
#include "factorial_table.hpp"

namespace cgnet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return a;
}

Matrix3 rot_z(double a) {
    Matrix3 r;
    const double c = std::cos(a), s = std::sin(a);
    r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
    return r;
}

Matrix3 rot_y(double a) {
    Matrix3 r;
    const double c = std::cos(a), s = std::sin(a);
    r << c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c;
    return r;
}

}  // namespace

Matrix3 rotation_matrix(const EulerAngles& angles) {
    return rot_z(angles.alpha) * rot_y(angles.beta) * rot_z(angles.gamma);
}

EulerAngles euler_from_matrix(const Matrix3& r) {
    EulerAngles out;
    const double sin_beta = std::hypot(r(0, 2), r(1, 2));
    out.beta = std::atan2(sin_beta, r(2, 2));
    if (sin_beta > 1e-12) {
        out.alpha = std::atan2(r(1, 2), r(0, 2));
        out.gamma = std::atan2(r(2, 1), -r(2, 0));
    } else if (r(2, 2) > 0.0) {
        // R = Rz(alpha + gamma)
        out.alpha = std::atan2(r(1, 0), r(0, 0));
        out.gamma = 0.0;
    } else {
        // R = Rz(alpha - gamma) diag(-1, 1, -1)
        out.alpha = std::atan2(-r(1, 0), -r(0, 0));
        out.gamma = 0.0;
    }
    out.alpha = wrap_angle(out.alpha);
    out.gamma = wrap_angle(out.gamma);
    return out;
}

EulerAngles compose(const EulerAngles& first, const EulerAngles& second) {
    return euler_from_matrix(rotation_matrix(first) * rotation_matrix(second));
}

EulerAngles inverse(const EulerAngles& angles) {
    // Rz(-g) Ry(-b) Rz(-a) with Ry(-b) = Rz(pi) Ry(b) Rz(-pi).
    if (angles.beta == 0.0) return {wrap_angle(-angles.gamma), 0.0, wrap_angle(-angles.alpha)};
    return {wrap_angle(std::numbers::pi - angles.gamma), angles.beta, wrap_angle(-std::numbers::pi - angles.alpha)};
}

RealMatrix wigner_d_small(int ell, double beta) {
    if (ell < 0) throw ArgumentError("wigner_d_small: negative degree");
    detail::check_degree(ell, "wigner_d_small");

    const int dim = 2 * ell + 1;
    RealMatrix d = RealMatrix::Zero(dim, dim);
    const double c = std::cos(0.5 * beta);
    const double s = std::sin(0.5 * beta);

    for (int mp = -ell; mp <= ell; ++mp) {
        for (int m = -ell; m <= ell; ++m) {
            // Split so that the diagonal term at beta = 0 is exp(0) exactly.
            const double log_pref = 0.5 * (detail::log_factorial(ell + mp) + detail::log_factorial(ell - mp)) +
                                    0.5 * (detail::log_factorial(ell + m) + detail::log_factorial(ell - m));
            const int s_lo = std::max(0, m - mp);
            const int s_hi = std::min(ell + m, ell - mp);
            double sum = 0.0;
            for (int k = s_lo; k <= s_hi; ++k) {
                const double log_den = detail::log_factorial(ell + m - k) + detail::log_factorial(k) +
                                       detail::log_factorial(mp - m + k) + detail::log_factorial(ell - mp - k);
                const int cos_pow = 2 * ell + m - mp - 2 * k;
                const int sin_pow = mp - m + 2 * k;
                const double sign = ((mp - m + k) % 2 == 0) ? 1.0 : -1.0;
                sum += sign * std::exp(log_pref - log_den) * std::pow(c, cos_pow) * std::pow(s, sin_pow);
            }
            d(mp + ell, m + ell) = sum;
        }
    }
    return d;
}

WignerD wigner_D(int ell, const EulerAngles& angles) {
    const RealMatrix d = wigner_d_small(ell, angles.beta);
    const int dim = 2 * ell + 1;
    WignerD out{ell, ComplexMatrix(dim, dim)};
    for (int i = 0; i < dim; ++i) {
        const Complex left = std::polar(1.0, -(i - ell) * angles.alpha);
        for (int j = 0; j < dim; ++j) {
            const Complex right = std::polar(1.0, -(j - ell) * angles.gamma);
            out.matrix(i, j) = left * d(i, j) * right;
        }
    }
    return out;
}

std::vector<Complex> spherical_harmonics_upto(int max_ell, double theta, double phi) {
    if (max_ell < 0) throw ArgumentError("spherical_harmonics_upto: negative degree");
    detail::check_degree(max_ell, "spherical_harmonics_upto");

    const int n = max_ell + 1;
    const double x = std::cos(theta);
    const double sx = std::sin(theta);

    // Fully normalised associated Legendre values (Condon-Shortley phase included),
    // stored at index l * n + m for m >= 0.
    std::vector<double> p(static_cast<std::size_t>(n * n), 0.0);
    auto at = [&](int l, int m) -> double& { return p[static_cast<std::size_t>(l * n + m)]; };

    at(0, 0) = 1.0 / std::sqrt(4.0 * std::numbers::pi);
    for (int m = 1; m <= max_ell; ++m) {
        at(m, m) = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sx * at(m - 1, m - 1);
    }
    for (int m = 0; m < max_ell; ++m) {
        at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * x * at(m, m);
    }
    for (int m = 0; m <= max_ell; ++m) {
        for (int l = m + 2; l <= max_ell; ++l) {
            const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
            const double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - static_cast<double>(m) * m) /
                                       (4.0 * (l - 1) * (l - 1) - 1.0));
            at(l, m) = a * (x * at(l - 1, m) - b * at(l - 2, m));
        }
    }

    std::vector<Complex> y(static_cast<std::size_t>(n * n));
    for (int l = 0; l <= max_ell; ++l) {
        const std::size_t base = static_cast<std::size_t>(l * l + l);
        y[base] = at(l, 0);
        for (int m = 1; m <= l; ++m) {
            const Complex pos = at(l, m) * std::polar(1.0, m * phi);
            y[base + m] = pos;
            y[base - m] = ((m % 2 == 0) ? 1.0 : -1.0) * std::conj(pos);
        }
    }
    return y;
}

Complex spherical_harmonic(int ell, int m, double theta, double phi) {
    if (ell < 0 || std::abs(m) > ell) {
        throw ArgumentError("spherical_harmonic: require |m| <= l, got l=" + std::to_string(ell) +
                            " m=" + std::to_string(m));
    }
    return spherical_harmonics_upto(ell, theta, phi)[static_cast<std::size_t>(ell * ell + ell + m)];
}

EulerAngles random_rotation(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    EulerAngles r;
    r.alpha = kTwoPi * unit(rng);
    r.beta = std::acos(std::clamp(1.0 - 2.0 * unit(rng), -1.0, 1.0));
    r.gamma = kTwoPi * unit(rng);
    return r;
}

}  // namespace cgnet
