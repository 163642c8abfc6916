#include "cgnet/activation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cgnet/errors.hpp"

namespace cgnet {

ActivationType::ActivationType(std::vector<int> counts) : tau(std::move(counts)) {
    if (tau.empty()) throw ArgumentError("ActivationType: need at least one degree");
    for (int t : tau) {
        if (t < 0) throw ArgumentError("ActivationType: negative fragment count");
    }
}

ActivationType ActivationType::uniform(int bandlimit, int count) {
    return ActivationType(std::vector<int>(static_cast<std::size_t>(bandlimit + 1), count));
}

std::size_t ActivationType::scalar_count() const {
    std::size_t n = 0;
    for (int l = 0; l <= bandlimit(); ++l) n += static_cast<std::size_t>((2 * l + 1) * (*this)[l]);
    return n;
}

int ActivationType::fragment_count() const {
    int n = 0;
    for (int t : tau) n += t;
    return n;
}

CovariantActivation CovariantActivation::zeros(const ActivationType& type) {
    CovariantActivation a;
    a.parts.reserve(type.tau.size());
    for (int l = 0; l <= type.bandlimit(); ++l) a.parts.push_back(ComplexMatrix::Zero(2 * l + 1, type[l]));
    return a;
}

ActivationType CovariantActivation::type() const {
    std::vector<int> tau;
    tau.reserve(parts.size());
    for (const auto& p : parts) tau.push_back(static_cast<int>(p.cols()));
    return ActivationType(std::move(tau));
}

bool CovariantActivation::all_finite() const {
    return std::all_of(parts.begin(), parts.end(), [](const ComplexMatrix& p) { return p.allFinite(); });
}

double CovariantActivation::squared_norm() const {
    double s = 0.0;
    for (const auto& p : parts) s += p.squaredNorm();
    return s;
}

CovariantActivation& CovariantActivation::operator+=(const CovariantActivation& other) {
    if (other.parts.size() != parts.size()) throw ArgumentError("CovariantActivation: band limit mismatch in +=");
    for (std::size_t l = 0; l < parts.size(); ++l) {
        if (parts[l].rows() != other.parts[l].rows() || parts[l].cols() != other.parts[l].cols()) {
            throw ArgumentError("CovariantActivation: shape mismatch in +=");
        }
        parts[l] += other.parts[l];
    }
    return *this;
}

CovariantActivation to_activation(const HarmonicCoefficients& coeffs) { return CovariantActivation(coeffs.blocks); }

std::vector<ComplexMatrix> wigner_D_all(int max_ell, const EulerAngles& rotation) {
    std::vector<ComplexMatrix> out;
    out.reserve(static_cast<std::size_t>(max_ell + 1));
    for (int l = 0; l <= max_ell; ++l) out.push_back(wigner_D(l, rotation).matrix);
    return out;
}

CovariantActivation rotate(const CovariantActivation& activation, const std::vector<ComplexMatrix>& wigner) {
    if (static_cast<int>(wigner.size()) <= activation.bandlimit()) {
        throw ArgumentError("rotate: not enough Wigner matrices for band limit");
    }
    CovariantActivation out = activation;
    for (std::size_t l = 1; l < out.parts.size(); ++l) out.parts[l] = wigner[l] * activation.parts[l];
    return out;
}

CovariantActivation rotate(const CovariantActivation& activation, const EulerAngles& rotation) {
    return rotate(activation, wigner_D_all(activation.bandlimit(), rotation));
}

double relative_difference(const CovariantActivation& a, const CovariantActivation& b) {
    if (a.parts.size() != b.parts.size()) throw ArgumentError("relative_difference: band limit mismatch");
    double diff = 0.0;
    for (std::size_t l = 0; l < a.parts.size(); ++l) {
        if (a.parts[l].rows() != b.parts[l].rows() || a.parts[l].cols() != b.parts[l].cols()) {
            throw ArgumentError("relative_difference: shape mismatch");
        }
        diff += (a.parts[l] - b.parts[l]).squaredNorm();
    }
    const double scale = std::sqrt(b.squared_norm());
    return std::sqrt(diff) / std::max(scale, std::numeric_limits<double>::min());
}

}  // namespace cgnet
