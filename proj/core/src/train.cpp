#include "cgnet/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "cgnet/errors.hpp"

namespace cgnet {

namespace {

NetworkWeights zeros_like(const NetworkWeights& w) {
    NetworkWeights z;
    for (const auto& layer : w.layers) {
        LayerWeights lz;
        for (const auto& m : layer.per_ell) lz.per_ell.push_back(ComplexMatrix::Zero(m.rows(), m.cols()));
        z.layers.push_back(std::move(lz));
    }
    z.head.hidden_w = Eigen::MatrixXd::Zero(w.head.hidden_w.rows(), w.head.hidden_w.cols());
    z.head.hidden_b = Eigen::VectorXd::Zero(w.head.hidden_b.size());
    z.head.out_w = Eigen::MatrixXd::Zero(w.head.out_w.rows(), w.head.out_w.cols());
    z.head.out_b = Eigen::VectorXd::Zero(w.head.out_b.size());
    return z;
}

void add_layers(NetworkWeights& dst, const NetworkWeights& src) {
    for (std::size_t s = 0; s < dst.layers.size(); ++s) {
        for (std::size_t l = 0; l < dst.layers[s].per_ell.size(); ++l) {
            dst.layers[s].per_ell[l] += src.layers[s].per_ell[l];
        }
    }
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a * 0x9E3779B97F4A7C15ull ^ (b + 0x632BE59BD9B4E019ull + (a << 6) + (a >> 2));
    x ^= x >> 31;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    return x;
}

}  // namespace

NetworkWeights backward_network(const CGNetwork& net, const NetworkWeights& weights,
                                const std::vector<NormState>* norms, const ForwardTrace& trace,
                                std::span<const double> feature_adjoint, CovariantActivation* input_adjoint) {
    const int depth = net.depth();
    const int n_in = net.spec().n_in;
    if (feature_adjoint.size() != trace.features.size()) {
        throw ArgumentError("backward_network: feature adjoint has " + std::to_string(feature_adjoint.size()) +
                            " entries, expected " + std::to_string(trace.features.size()));
    }

    std::vector<std::size_t> offsets(static_cast<std::size_t>(depth));
    std::size_t off = 2 * static_cast<std::size_t>(n_in);
    for (int s = 0; s < depth; ++s) {
        offsets[static_cast<std::size_t>(s)] = off;
        off += 2 * static_cast<std::size_t>(trace.outputs[static_cast<std::size_t>(s)][0].cols());
    }

    NetworkWeights grads = zeros_like(weights);
    CovariantActivation adj = CovariantActivation::zeros(trace.outputs.back().type());
    for (int s = depth - 1; s >= 0; --s) {
        const auto us = static_cast<std::size_t>(s);
        for (Eigen::Index j = 0; j < adj[0].cols(); ++j) {
            const std::size_t k = offsets[us] + 2 * static_cast<std::size_t>(j);
            adj[0](0, j) += Complex(feature_adjoint[k], feature_adjoint[k + 1]);
        }
        LinearGrads lin = backward_linear(adj, trace.normalized[us], weights.layers[us]);
        grads.layers[us] = std::move(lin.weights);
        const CovariantActivation adj_cg = norms ? backward_normalize(lin.input, (*norms)[us]) : lin.input;
        const CovariantActivation& layer_in = s == 0 ? trace.input : trace.outputs[us - 1];
        adj = backward_cg(adj_cg, layer_in, net.cg_table(), net.layout(s));
    }
    if (input_adjoint) {
        for (int j = 0; j < n_in; ++j) {
            adj[0](0, j) += Complex(feature_adjoint[2 * static_cast<std::size_t>(j)],
                                    feature_adjoint[2 * static_cast<std::size_t>(j) + 1]);
        }
        *input_adjoint = std::move(adj);
    }
    return grads;
}

LossResult loss_and_grad(const CGNetwork& net, const NetworkWeights& weights, std::vector<NormState>* norms,
                         std::span<const Example> batch, const LossOptions& options) {
    if (batch.empty()) throw ArgumentError("loss_and_grad: empty batch");
    const int n_out = net.spec().n_out;
    std::vector<CovariantActivation> inputs;
    inputs.reserve(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        if (batch[i].label < 0 || batch[i].label >= n_out) {
            throw ArgumentError("loss_and_grad: label " + std::to_string(batch[i].label) + " of example " +
                                std::to_string(i) + " is outside [0, " + std::to_string(n_out) + ")");
        }
        inputs.push_back(batch[i].input);
    }

    const auto traces = trace_forward_batch(net, weights, norms, inputs, options.training);
    const double inv_batch = 1.0 / static_cast<double>(batch.size());
    const bool use_dropout = options.training && options.dropout > 0.0;
    std::mt19937_64 rng(options.dropout_seed);
    std::bernoulli_distribution keep(1.0 - options.dropout);

    LossResult result;
    result.grads = zeros_like(weights);
    auto& hg = result.grads.head;
    int correct = 0;

    for (std::size_t i = 0; i < batch.size(); ++i) {
        HeadTrace h = head_forward(weights.head, traces[i].features);
        if (use_dropout) {
            h.dropout_mask = Eigen::VectorXd(h.hidden.size());
            for (Eigen::Index k = 0; k < h.hidden.size(); ++k) {
                h.dropout_mask(k) = keep(rng) ? 1.0 / (1.0 - options.dropout) : 0.0;
            }
            h.hidden = h.hidden.cwiseProduct(h.dropout_mask);
            h.logits = weights.head.out_w * h.hidden + weights.head.out_b;
        }

        const double zmax = h.logits.maxCoeff();
        const Eigen::VectorXd e = (h.logits.array() - zmax).exp().matrix();
        const double lse = zmax + std::log(e.sum());
        const int y = batch[i].label;
        const double li = lse - h.logits(y);
        if (!std::isfinite(li)) {
            throw NumericError("non-finite loss at example " + std::to_string(i), static_cast<std::ptrdiff_t>(i));
        }
        result.data_loss += li * inv_batch;
        Eigen::Index best = 0;
        h.logits.maxCoeff(&best);
        if (best == y) ++correct;

        Eigen::VectorXd dz = e / e.sum();
        dz(y) -= 1.0;
        dz *= inv_batch;

        hg.out_w += dz * h.hidden.transpose();
        hg.out_b += dz;
        Eigen::VectorXd dh = weights.head.out_w.transpose() * dz;
        if (use_dropout) dh = dh.cwiseProduct(h.dropout_mask);
        const Eigen::VectorXd dpre = (h.pre_activation.array() > 0.0).select(dh, 0.0);
        hg.hidden_w += dpre * h.features.transpose();
        hg.hidden_b += dpre;
        const Eigen::VectorXd dx = weights.head.hidden_w.transpose() * dpre;

        add_layers(result.grads, backward_network(net, weights, norms, traces[i],
                                                  std::span<const double>(dx.data(), static_cast<std::size_t>(dx.size()))));
    }

    result.accuracy = static_cast<double>(correct) * inv_batch;
    result.loss = result.data_loss;
    if (options.l2 != 0.0) {
        result.loss += options.l2 * weights.penalty_norm();
        for (std::size_t s = 0; s < weights.layers.size(); ++s) {
            for (std::size_t l = 0; l < weights.layers[s].per_ell.size(); ++l) {
                result.grads.layers[s].per_ell[l] += 2.0 * options.l2 * weights.layers[s].per_ell[l];
            }
        }
        hg.hidden_w += 2.0 * options.l2 * weights.head.hidden_w;
        hg.out_w += 2.0 * options.l2 * weights.head.out_w;
    }
    if (!std::isfinite(result.loss)) throw NumericError("non-finite loss after weight penalty");
    return result;
}

std::vector<std::size_t> batch_indices(std::uint64_t seed, std::uint64_t step, std::size_t batch_size,
                                       std::size_t dataset_size) {
    if (dataset_size == 0) throw ArgumentError("batch_indices: empty dataset");
    std::map<std::uint64_t, std::vector<std::size_t>> perms;
    auto perm = [&](std::uint64_t epoch) -> const std::vector<std::size_t>& {
        auto it = perms.find(epoch);
        if (it != perms.end()) return it->second;
        std::vector<std::size_t> p(dataset_size);
        std::iota(p.begin(), p.end(), std::size_t{0});
        std::mt19937_64 rng(mix(seed, epoch));
        std::shuffle(p.begin(), p.end(), rng);
        return perms.emplace(epoch, std::move(p)).first->second;
    };
    std::vector<std::size_t> out;
    out.reserve(batch_size);
    for (std::size_t k = 0; k < batch_size; ++k) {
        const std::uint64_t pos = step * batch_size + k;
        out.push_back(perm(pos / dataset_size)[pos % dataset_size]);
    }
    return out;
}

bool train(const CGNetwork& net, NetworkWeights& weights, std::vector<NormState>& norms, AdamState& adam,
           std::span<const Example> data, const TrainOptions& options,
           const std::function<void(const StepLog&)>& on_step) {
    if (data.empty()) throw ArgumentError("train: empty dataset");
    if (options.batch_size < 1) throw ArgumentError("train: batch size must be positive");
    if (adam.first_moment.size() != weights.parameter_count()) {
        throw ArgumentError("train: optimizer state does not match the weight count");
    }
    const auto batch_size = static_cast<std::size_t>(options.batch_size);
    const auto start = std::chrono::steady_clock::now();
    std::vector<Example> batch;
    while (adam.step < static_cast<std::uint64_t>(options.steps)) {
        if (options.time_budget_s > 0.0 &&
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > options.time_budget_s) {
            return false;
        }
        batch.clear();
        for (std::size_t i : batch_indices(options.seed, adam.step, batch_size, data.size())) batch.push_back(data[i]);

        LossOptions lo;
        lo.l2 = options.l2;
        lo.training = true;
        lo.dropout = options.dropout;
        lo.dropout_seed = mix(options.seed ^ 0xD20F0u, adam.step);
        LossResult r;
        try {
            r = loss_and_grad(net, weights, norms.empty() ? nullptr : &norms, batch, lo);
        } catch (const NumericError& e) {
            throw NumericError("step " + std::to_string(adam.step + 1) + ": " + e.what(), e.example_index());
        }
        adam_step(adam, weights, r.grads);
        if (!weights.all_finite()) {
            throw NumericError("step " + std::to_string(adam.step) + ": weights became non-finite");
        }
        if (on_step) {
            const auto now = std::chrono::steady_clock::now();
            on_step({adam.step, r.loss, r.accuracy, adam.config.lr,
                     std::chrono::duration<double, std::milli>(now - start).count()});
        }
    }
    return true;
}

EvalReport evaluate(const CGNetwork& net, const NetworkWeights& weights, const std::vector<NormState>& norms,
                    std::span<const Example> data) {
    if (data.empty()) throw ArgumentError("evaluate: empty dataset");
    const int k = net.spec().n_out;
    EvalReport report;
    report.confusion.assign(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(k), 0));
    int correct = 0;
    for (const auto& ex : data) {
        if (ex.label < 0 || ex.label >= k) throw ArgumentError("evaluate: label outside the model's class range");
        const int p = predict(net, weights, norms.empty() ? nullptr : &norms, ex.input);
        report.predictions.push_back(p);
        ++report.confusion[static_cast<std::size_t>(ex.label)][static_cast<std::size_t>(p)];
        if (p == ex.label) ++correct;
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    return report;
}

}  // namespace cgnet
