#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cgnet/activation.hpp"
#include "cgnet/cg_product.hpp"

namespace cgnet {

/// Per-degree mixing matrices W_l of shape (input fragments) x (output fragments).
struct LayerWeights {
    std::vector<ComplexMatrix> per_ell;

    static LayerWeights zeros(const ActivationType& in, const ActivationType& out);
    ActivationType input_type() const;
    ActivationType output_type() const;
};

/// G_l = F_l W_l for every degree.
CovariantActivation covariant_linear(const CovariantActivation& input, const LayerWeights& weights);

struct LinearGrads {
    CovariantActivation input;
    LayerWeights weights;
};

/// Adjoint of covariant_linear: dF_l = dG_l W_l^H, dW_l = F_l^H dG_l.
LinearGrads backward_linear(const CovariantActivation& output_adjoint, const CovariantActivation& input,
                            const LayerWeights& weights);

/// Running per-fragment scales for the covariant normaliser. Each scale is an
/// expanding average, over every example seen, of the fragment's root-mean-
/// square entry magnitude. No mean is ever subtracted.
class NormState {
public:
    static constexpr double kEpsilon = 1e-8;

    NormState() = default;
    explicit NormState(const ActivationType& type);

    const ActivationType& type() const { return type_; }
    std::uint64_t examples_seen() const { return count_; }

    /// Scale used for division, floored at kEpsilon.
    double divisor(int ell, int fragment) const;
    double raw_scale(int ell, int fragment) const { return scales_[static_cast<std::size_t>(ell)][static_cast<std::size_t>(fragment)]; }

    /// Folds the batch's per-fragment scales into the running average.
    void update(std::span<const CovariantActivation> batch);

    std::vector<std::vector<double>>& scales() { return scales_; }
    const std::vector<std::vector<double>>& scales() const { return scales_; }
    void set_examples_seen(std::uint64_t n) { count_ = n; }

private:
    ActivationType type_;
    std::vector<std::vector<double>> scales_;
    std::uint64_t count_ = 0;
};

/// Divides every fragment by its running scale (eval mode: state untouched).
CovariantActivation covariant_normalize(const CovariantActivation& input, const NormState& norm);

/// Training mode updates the state with this batch first; eval mode only divides.
std::vector<CovariantActivation> covariant_normalize(std::span<const CovariantActivation> batch, NormState& norm,
                                                     bool training);

/// Single-example form of the batch overload.
CovariantActivation covariant_normalize(const CovariantActivation& input, NormState& norm, bool training);

/// Scales are constants during backpropagation, so the adjoint is a plain division.
CovariantActivation backward_normalize(const CovariantActivation& output_adjoint, const NormState& norm);

/// CG product, optional normalisation, then covariant_linear.
CovariantActivation layer_forward(const CovariantActivation& input, const LayerWeights& weights, const CGTable& table,
                                  const CGLayout& layout, const NormState* norm = nullptr);

/// Invariant vector: the input's l = 0 coefficients followed by every layer's
/// F_0 entries, each complex value split into (real, imag).
std::vector<double> invariant_head(std::span<const CovariantActivation> layer_outputs,
                                   const ComplexMatrix& input_l0);

/// Length of invariant_head's output: 2 * (sum_s tau_0^s + n_in).
std::size_t invariant_head_width(std::span<const int> layer_tau0, int n_in);

}  // namespace cgnet
