#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cgnet/activation.hpp"
#include "cgnet/cg_product.hpp"
#include "cgnet/layers.hpp"

namespace cgnet {

/// Architecture of an S-layer CG network with a one-hidden-layer real head.
struct NetworkSpec {
    int bandlimit = 5;
    int n_in = 1;
    /// Output type of each covariant layer. Only tau_0 of the last layer is used.
    std::vector<ActivationType> layer_types;
    PairPolicy pair_policy = PairPolicy::Unordered;
    int head_hidden = 64;
    int n_out = 4;

    int depth() const { return static_cast<int>(layer_types.size()); }
    ActivationType input_type() const { return ActivationType::uniform(bandlimit, n_in); }
    std::size_t head_width() const;
    void validate() const;
};

/// A validated spec together with its CG coefficient table and per-layer layouts.
class CGNetwork {
public:
    explicit CGNetwork(NetworkSpec spec);

    const NetworkSpec& spec() const { return spec_; }
    int depth() const { return spec_.depth(); }
    const CGLayout& layout(int layer) const { return layouts_[static_cast<std::size_t>(layer)]; }
    /// Type produced by layer s. The last layer only produces degree 0.
    const ActivationType& output_type(int layer) const { return output_types_[static_cast<std::size_t>(layer)]; }

    const CGTable& cg_table() const { return table_; }
    CGTable& mutable_cg_table() { return table_; }

private:
    NetworkSpec spec_;
    CGTable table_;
    std::vector<CGLayout> layouts_;
    std::vector<ActivationType> output_types_;
};

struct HeadWeights {
    Eigen::MatrixXd hidden_w;  // hidden x head_width
    Eigen::VectorXd hidden_b;
    Eigen::MatrixXd out_w;     // n_out x hidden
    Eigen::VectorXd out_b;
};

/// Every learnable parameter. Also used as the container for gradients.
struct NetworkWeights {
    std::vector<LayerWeights> layers;
    HeadWeights head;

    static NetworkWeights zeros(const CGNetwork& net);

    /// Real scalar count: complex entries count twice.
    std::size_t parameter_count() const;
    /// Flat real view: layers (degree ascending, column-major, re/im pairs),
    /// then hidden_w (column-major), hidden_b, out_w (column-major), out_b.
    std::vector<double> pack() const;
    void unpack(std::span<const double> flat);
    /// Sum of squared magnitudes over every weight except biases.
    double penalty_norm() const;
    bool all_finite() const;
};

NetworkWeights init_weights(const CGNetwork& net, std::uint64_t seed);
NetworkWeights init_weights(const NetworkSpec& spec, std::uint64_t seed);

/// Fresh normaliser state (all scales 1) for each layer's post-CG type.
std::vector<NormState> make_norm_states(const CGNetwork& net);

/// Every intermediate of one example's forward pass.
struct ForwardTrace {
    CovariantActivation input;
    std::vector<CovariantActivation> cg;
    std::vector<CovariantActivation> normalized;
    std::vector<CovariantActivation> outputs;
    std::vector<double> features;
};

/// Eval-mode forward pass. `norms` may be null to skip normalisation.
ForwardTrace trace_forward(const CGNetwork& net, const NetworkWeights& weights, const std::vector<NormState>* norms,
                           const CovariantActivation& input);

/// Layer-synchronous batch forward pass; in training mode each layer's norm
/// state is updated with the batch before it is applied.
std::vector<ForwardTrace> trace_forward_batch(const CGNetwork& net, const NetworkWeights& weights,
                                              std::vector<NormState>* norms,
                                              std::span<const CovariantActivation> inputs, bool training);

/// Invariant feature vector of one input.
std::vector<double> network_forward(const CGNetwork& net, const NetworkWeights& weights,
                                    const std::vector<NormState>* norms, const CovariantActivation& input);

struct HeadTrace {
    Eigen::VectorXd features;
    Eigen::VectorXd pre_activation;
    Eigen::VectorXd hidden;
    Eigen::VectorXd dropout_mask;  // empty when dropout is off
    Eigen::VectorXd logits;
};

HeadTrace head_forward(const HeadWeights& head, std::span<const double> features);
Eigen::VectorXd head_logits(const HeadWeights& head, std::span<const double> features);
int predict(const CGNetwork& net, const NetworkWeights& weights, const std::vector<NormState>* norms,
            const CovariantActivation& input);

}  // namespace cgnet
