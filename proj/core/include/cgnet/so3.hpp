#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace cgnet {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using Matrix3 = Eigen::Matrix3d;

/// Highest degree supported by the factorial tables.
inline constexpr int kMaxDegree = 64;

/// ZYZ Euler angles of an active rotation R = Rz(alpha) Ry(beta) Rz(gamma).
struct EulerAngles {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

// Haar measure on SO(3) in these coordinates: alpha, gamma uniform on [0, 2pi),
// cos(beta) uniform on [-1, 1]. random_rotation() samples from it.

Matrix3 rotation_matrix(const EulerAngles& angles);

/// Inverse of rotation_matrix. Angles are normalised to alpha, gamma in [0, 2pi), beta in [0, pi].
EulerAngles euler_from_matrix(const Matrix3& rotation);

/// Euler angles of the composition first * second (apply `second`, then `first`).
EulerAngles compose(const EulerAngles& first, const EulerAngles& second);

EulerAngles inverse(const EulerAngles& angles);

/// Wigner small-d matrix d^l(beta), rows m' and columns m running -l..l.
/// Evaluated by the explicit alternating factorial sum: accurate to ~1e-13
/// up to l = 10 and ~1e-9 at l = 20; cancellation grows quickly beyond that.
RealMatrix wigner_d_small(int ell, double beta);

/// Wigner D-matrix D^l_{m'm} = exp(-i m' alpha) d^l_{m'm}(beta) exp(-i m gamma).
struct WignerD {
    int ell = 0;
    ComplexMatrix matrix;
};

WignerD wigner_D(int ell, const EulerAngles& angles);

/// Orthonormal spherical harmonic with the Condon-Shortley phase.
/// theta is colatitude in [0, pi], phi is azimuth.
Complex spherical_harmonic(int ell, int m, double theta, double phi);

/// All Y_l^m for l <= max_ell at one point, packed at index l*l + l + m.
std::vector<Complex> spherical_harmonics_upto(int max_ell, double theta, double phi);

/// Haar-distributed random rotation.
EulerAngles random_rotation(std::mt19937_64& rng);

/// Real Clebsch-Gordan coefficient <l1 m1; l2 m2 | l m>, Condon-Shortley convention.
double clebsch_gordan_coeff(int ell1, int ell2, int ell, int m1, int m2, int m);

struct CGEntry {
    int m1 = 0;
    int m2 = 0;
    int m = 0;
    double value = 0.0;
};

/// Sparse block C_{l1,l2,l}: rows (m1, m2) in Kronecker order, columns m.
/// Entries are sorted by m, then m1, and always satisfy m1 + m2 == m.
struct CGBlock {
    int ell1 = 0;
    int ell2 = 0;
    int ell = 0;
    std::vector<CGEntry> entries;

    int rows() const { return (2 * ell1 + 1) * (2 * ell2 + 1); }
    int cols() const { return 2 * ell + 1; }
    int row_index(int m1, int m2) const { return (m1 + ell1) * (2 * ell2 + 1) + (m2 + ell2); }

    RealMatrix dense() const;
};

CGBlock cg_block(int ell1, int ell2, int ell);

/// Precomputed CG blocks for every valid triple with l1, l2, l <= max_ell.
/// Blocks are shared read-only during a forward pass; mutable access exists
/// for deliberately corrupting a table in sensitivity tests.
class CGTable {
public:
    explicit CGTable(int max_ell);

    int max_ell() const { return max_ell_; }
    const CGBlock& block(int ell1, int ell2, int ell) const;
    CGBlock& mutable_block(int ell1, int ell2, int ell);

private:
    std::size_t slot(int ell1, int ell2, int ell) const;

    int max_ell_;
    std::vector<CGBlock> blocks_;
};

}  // namespace cgnet
