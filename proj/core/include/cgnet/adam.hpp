#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cgnet/network.hpp"

namespace cgnet {

struct AdamConfig {
    double lr = 5e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    /// Coupled L2 decay: lambda * w is added to the gradient before the moment updates.
    double weight_decay = 1e-5;
};

struct AdamState {
    AdamConfig config;
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    std::uint64_t step = 0;

    AdamState() = default;
    AdamState(std::size_t parameter_count, AdamConfig cfg);
};

/// One bias-corrected ADAM update of a flat parameter vector.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads);

/// Same update applied to the packed form of a weight set.
void adam_step(AdamState& state, NetworkWeights& weights, const NetworkWeights& grads);

}  // namespace cgnet
