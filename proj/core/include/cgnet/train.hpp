#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cgnet/adam.hpp"
#include "cgnet/network.hpp"

namespace cgnet {

struct Example {
    CovariantActivation input;
    int label = 0;
};

/// Reverse pass through the covariant layers given the adjoint of the
/// invariant feature vector. Returns weight gradients (head entries zero);
/// writes the adjoint of the network input when `input_adjoint` is non-null.
NetworkWeights backward_network(const CGNetwork& net, const NetworkWeights& weights,
                                const std::vector<NormState>* norms, const ForwardTrace& trace,
                                std::span<const double> feature_adjoint, CovariantActivation* input_adjoint = nullptr);

struct LossOptions {
    /// Coefficient of the lambda * ||weights||^2 penalty (biases excluded).
    double l2 = 0.0;
    /// Training mode folds each batch into the norm states before using them.
    bool training = false;
    /// Dropout probability on the head's hidden layer; only active in training mode.
    double dropout = 0.0;
    std::uint64_t dropout_seed = 0;
};

struct LossResult {
    double loss = 0.0;       // mean cross-entropy plus penalty
    double data_loss = 0.0;  // mean cross-entropy alone
    double accuracy = 0.0;
    NetworkWeights grads;
};

/// Softmax cross-entropy over the batch with gradients for every parameter.
/// Norm scales are treated as constants. Throws NumericError naming the first
/// example whose loss is not finite.
LossResult loss_and_grad(const CGNetwork& net, const NetworkWeights& weights, std::vector<NormState>* norms,
                         std::span<const Example> batch, const LossOptions& options);

struct TrainOptions {
    int steps = 2000;
    int batch_size = 32;
    AdamConfig adam{};
    double l2 = 1e-5;
    double dropout = 0.0;
    std::uint64_t seed = 0;
    /// Wall-clock limit in seconds; 0 means unlimited.
    double time_budget_s = 0.0;
};

/// Tab-separated training log row: step loss train_acc lr wall_ms.
struct StepLog {
    std::uint64_t step = 0;
    double loss = 0.0;
    double train_accuracy = 0.0;
    double lr = 0.0;
    double wall_ms = 0.0;
};

/// Dataset indices used at a given step. Each epoch is a fresh permutation
/// derived from (seed, epoch), so a run can resume from any step count.
std::vector<std::size_t> batch_indices(std::uint64_t seed, std::uint64_t step, std::size_t batch_size,
                                       std::size_t dataset_size);

/// Runs ADAM until `adam.step` reaches `options.steps` or the time budget runs
/// out. Resumes from whatever step count `adam` already holds. Returns false
/// if the budget stopped it early. An empty `norms` disables normalisation.
bool train(const CGNetwork& net, NetworkWeights& weights, std::vector<NormState>& norms, AdamState& adam,
           std::span<const Example> data, const TrainOptions& options,
           const std::function<void(const StepLog&)>& on_step = {});

struct EvalReport {
    double accuracy = 0.0;
    std::vector<std::vector<int>> confusion;  // [true][predicted]
    std::vector<int> predictions;
};

/// Eval-mode accuracy and confusion matrix; empty `norms` as in train().
/// Throws ArgumentError on an empty set.
EvalReport evaluate(const CGNetwork& net, const NetworkWeights& weights, const std::vector<NormState>& norms,
                    std::span<const Example> data);

}  // namespace cgnet
