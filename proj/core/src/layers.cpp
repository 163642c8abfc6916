#include "cgnet/layers.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "cgnet/errors.hpp"

namespace cgnet {

LayerWeights LayerWeights::zeros(const ActivationType& in, const ActivationType& out) {
    if (in.bandlimit() != out.bandlimit()) throw ArgumentError("LayerWeights: band limit mismatch");
    LayerWeights w;
    for (int l = 0; l <= in.bandlimit(); ++l) w.per_ell.push_back(ComplexMatrix::Zero(in[l], out[l]));
    return w;
}

ActivationType LayerWeights::input_type() const {
    std::vector<int> tau;
    for (const auto& w : per_ell) tau.push_back(static_cast<int>(w.rows()));
    return ActivationType(std::move(tau));
}

ActivationType LayerWeights::output_type() const {
    std::vector<int> tau;
    for (const auto& w : per_ell) tau.push_back(static_cast<int>(w.cols()));
    return ActivationType(std::move(tau));
}

CovariantActivation covariant_linear(const CovariantActivation& input, const LayerWeights& weights) {
    if (input.parts.size() != weights.per_ell.size()) {
        throw ArgumentError("covariant_linear: activation has band limit " + std::to_string(input.bandlimit()) +
                            " but weights cover " + std::to_string(weights.per_ell.size()) + " degrees");
    }
    CovariantActivation out;
    out.parts.reserve(input.parts.size());
    for (std::size_t l = 0; l < input.parts.size(); ++l) {
        const auto& f = input.parts[l];
        const auto& w = weights.per_ell[l];
        if (f.cols() != w.rows()) {
            throw ArgumentError("covariant_linear: degree " + std::to_string(l) + " has " + std::to_string(f.cols()) +
                                " fragments but W has " + std::to_string(w.rows()) + " rows");
        }
        out.parts.push_back(f * w);
    }
    return out;
}

LinearGrads backward_linear(const CovariantActivation& output_adjoint, const CovariantActivation& input,
                            const LayerWeights& weights) {
    if (input.parts.size() != weights.per_ell.size() || output_adjoint.parts.size() != weights.per_ell.size()) {
        throw ArgumentError("backward_linear: band limit mismatch");
    }
    LinearGrads g;
    for (std::size_t l = 0; l < weights.per_ell.size(); ++l) {
        const auto& w = weights.per_ell[l];
        const auto& f = input.parts[l];
        const auto& gbar = output_adjoint.parts[l];
        if (f.cols() != w.rows() || gbar.cols() != w.cols() || gbar.rows() != f.rows()) {
            throw ArgumentError("backward_linear: shape mismatch at degree " + std::to_string(l));
        }
        g.input.parts.push_back(gbar * w.adjoint());
        g.weights.per_ell.push_back(f.adjoint() * gbar);
    }
    return g;
}

NormState::NormState(const ActivationType& type) : type_(type) {
    for (int l = 0; l <= type.bandlimit(); ++l) scales_.emplace_back(static_cast<std::size_t>(type[l]), 1.0);
}

double NormState::divisor(int ell, int fragment) const { return std::max(raw_scale(ell, fragment), kEpsilon); }

void NormState::update(std::span<const CovariantActivation> batch) {
    if (batch.empty()) return;
    const auto n = static_cast<double>(batch.size());
    const auto seen = static_cast<double>(count_);
    for (int l = 0; l <= type_.bandlimit(); ++l) {
        for (int j = 0; j < type_[l]; ++j) {
            double sq = 0.0;
            for (const auto& a : batch) sq += a[l].col(j).squaredNorm();
            const double batch_scale = std::sqrt(sq / (n * (2 * l + 1)));
            auto& s = scales_[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
            s = count_ == 0 ? batch_scale : (seen * s + n * batch_scale) / (seen + n);
        }
    }
    count_ += batch.size();
}

CovariantActivation covariant_normalize(const CovariantActivation& input, const NormState& norm) {
    if (input.type() != norm.type()) throw ArgumentError("covariant_normalize: type does not match norm state");
    CovariantActivation out = input;
    for (int l = 0; l <= input.bandlimit(); ++l) {
        for (int j = 0; j < norm.type()[l]; ++j) out[l].col(j) /= norm.divisor(l, j);
    }
    return out;
}

std::vector<CovariantActivation> covariant_normalize(std::span<const CovariantActivation> batch, NormState& norm,
                                                     bool training) {
    for (const auto& a : batch) {
        if (a.type() != norm.type()) throw ArgumentError("covariant_normalize: type does not match norm state");
    }
    if (training) norm.update(batch);
    std::vector<CovariantActivation> out;
    out.reserve(batch.size());
    for (const auto& a : batch) out.push_back(covariant_normalize(a, std::as_const(norm)));
    return out;
}

CovariantActivation covariant_normalize(const CovariantActivation& input, NormState& norm, bool training) {
    return covariant_normalize(std::span<const CovariantActivation>(&input, 1), norm, training).front();
}

CovariantActivation backward_normalize(const CovariantActivation& output_adjoint, const NormState& norm) {
    return covariant_normalize(output_adjoint, norm);
}

CovariantActivation layer_forward(const CovariantActivation& input, const LayerWeights& weights, const CGTable& table,
                                  const CGLayout& layout, const NormState* norm) {
    CovariantActivation h = cg_product(input, table, layout);
    if (norm) h = covariant_normalize(h, *norm);
    return covariant_linear(h, weights);
}

std::vector<double> invariant_head(std::span<const CovariantActivation> layer_outputs, const ComplexMatrix& input_l0) {
    std::vector<double> out;
    auto push = [&out](const ComplexMatrix& row) {
        for (Eigen::Index j = 0; j < row.cols(); ++j) {
            out.push_back(row(0, j).real());
            out.push_back(row(0, j).imag());
        }
    };
    if (layer_outputs.empty()) throw ArgumentError("invariant_head: need at least one layer");
    if (input_l0.rows() != 1) throw ArgumentError("invariant_head: input l=0 block must have one row");
    push(input_l0);
    for (const auto& a : layer_outputs) {
        if (a.parts.empty()) throw ArgumentError("invariant_head: layer output has no l=0 part");
        push(a[0]);
    }
    return out;
}

std::size_t invariant_head_width(std::span<const int> layer_tau0, int n_in) {
    std::size_t n = static_cast<std::size_t>(n_in);
    for (int t : layer_tau0) n += static_cast<std::size_t>(t);
    return 2 * n;
}

}  // namespace cgnet
