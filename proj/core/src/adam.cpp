#include "cgnet/adam.hpp"

#include <cmath>
#include <string>

#include "cgnet/errors.hpp"

namespace cgnet {

AdamState::AdamState(std::size_t parameter_count, AdamConfig cfg)
    : config(cfg), first_moment(parameter_count, 0.0), second_moment(parameter_count, 0.0) {}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads) {
    if (params.size() != grads.size() || params.size() != state.first_moment.size() ||
        params.size() != state.second_moment.size()) {
        throw ArgumentError("adam_step: parameter, gradient and moment sizes differ (" +
                            std::to_string(params.size()) + ", " + std::to_string(grads.size()) + ", " +
                            std::to_string(state.first_moment.size()) + ")");
    }
    const auto& c = state.config;
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double bias1 = 1.0 - std::pow(c.beta1, t);
    const double bias2 = 1.0 - std::pow(c.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i] + c.weight_decay * params[i];
        double& m = state.first_moment[i];
        double& v = state.second_moment[i];
        m = c.beta1 * m + (1.0 - c.beta1) * g;
        v = c.beta2 * v + (1.0 - c.beta2) * g * g;
        params[i] -= c.lr * (m / bias1) / (std::sqrt(v / bias2) + c.eps);
    }
}

void adam_step(AdamState& state, NetworkWeights& weights, const NetworkWeights& grads) {
    std::vector<double> p = weights.pack();
    const std::vector<double> g = grads.pack();
    adam_step(state, p, g);
    weights.unpack(p);
}

}  // namespace cgnet
