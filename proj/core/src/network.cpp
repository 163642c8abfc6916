#include "cgnet/network.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "cgnet/errors.hpp"

namespace cgnet {

std::size_t NetworkSpec::head_width() const {
    std::vector<int> tau0;
    for (const auto& t : layer_types) tau0.push_back(t[0]);
    return invariant_head_width(tau0, n_in);
}

void NetworkSpec::validate() const {
    if (bandlimit < 0) throw ArgumentError("NetworkSpec: negative band limit");
    if (n_in < 1) throw ArgumentError("NetworkSpec: need at least one input channel");
    if (layer_types.empty()) throw ArgumentError("NetworkSpec: need at least one layer");
    for (std::size_t s = 0; s < layer_types.size(); ++s) {
        if (layer_types[s].bandlimit() != bandlimit) {
            throw ArgumentError("NetworkSpec: layer " + std::to_string(s + 1) + " type has band limit " +
                                std::to_string(layer_types[s].bandlimit()) + ", expected " +
                                std::to_string(bandlimit));
        }
    }
    if (head_hidden < 1) throw ArgumentError("NetworkSpec: head needs at least one hidden unit");
    if (n_out < 1) throw ArgumentError("NetworkSpec: need at least one output");
}

namespace {

NetworkSpec validated(NetworkSpec spec) {
    spec.validate();
    return spec;
}

}  // namespace

CGNetwork::CGNetwork(NetworkSpec spec) : spec_(validated(std::move(spec))), table_(spec_.bandlimit) {
    ActivationType in = spec_.input_type();
    for (int s = 0; s < spec_.depth(); ++s) {
        const bool last = s + 1 == spec_.depth();
        const int out_max = last ? 0 : spec_.bandlimit;
        layouts_.emplace_back(in, out_max, spec_.pair_policy);
        const ActivationType& declared = spec_.layer_types[static_cast<std::size_t>(s)];
        ActivationType out = last ? ActivationType({declared[0]}) : declared;
        // A degree with no CG inputs cannot produce fragments.
        for (int l = 0; l <= out.bandlimit(); ++l) {
            if (layouts_.back().output_type()[l] == 0) out.tau[static_cast<std::size_t>(l)] = 0;
        }
        output_types_.push_back(out);
        in = out;
    }
}

NetworkWeights NetworkWeights::zeros(const CGNetwork& net) {
    NetworkWeights w;
    for (int s = 0; s < net.depth(); ++s) {
        w.layers.push_back(LayerWeights::zeros(net.layout(s).output_type(), net.output_type(s)));
    }
    const auto& spec = net.spec();
    const auto width = static_cast<Eigen::Index>(spec.head_width());
    w.head.hidden_w = Eigen::MatrixXd::Zero(spec.head_hidden, width);
    w.head.hidden_b = Eigen::VectorXd::Zero(spec.head_hidden);
    w.head.out_w = Eigen::MatrixXd::Zero(spec.n_out, spec.head_hidden);
    w.head.out_b = Eigen::VectorXd::Zero(spec.n_out);
    return w;
}

std::size_t NetworkWeights::parameter_count() const {
    std::size_t n = 0;
    for (const auto& layer : layers) {
        for (const auto& w : layer.per_ell) n += 2 * static_cast<std::size_t>(w.size());
    }
    n += static_cast<std::size_t>(head.hidden_w.size() + head.hidden_b.size() + head.out_w.size() + head.out_b.size());
    return n;
}

std::vector<double> NetworkWeights::pack() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (const auto& layer : layers) {
        for (const auto& w : layer.per_ell) {
            for (Eigen::Index i = 0; i < w.size(); ++i) {
                flat.push_back(w.data()[i].real());
                flat.push_back(w.data()[i].imag());
            }
        }
    }
    auto append = [&flat](const auto& m) { flat.insert(flat.end(), m.data(), m.data() + m.size()); };
    append(head.hidden_w);
    append(head.hidden_b);
    append(head.out_w);
    append(head.out_b);
    return flat;
}

void NetworkWeights::unpack(std::span<const double> flat) {
    if (flat.size() != parameter_count()) {
        throw ArgumentError("NetworkWeights::unpack: expected " + std::to_string(parameter_count()) +
                            " values, got " + std::to_string(flat.size()));
    }
    std::size_t pos = 0;
    for (auto& layer : layers) {
        for (auto& w : layer.per_ell) {
            for (Eigen::Index i = 0; i < w.size(); ++i) {
                w.data()[i] = {flat[pos], flat[pos + 1]};
                pos += 2;
            }
        }
    }
    auto take = [&](auto& m) {
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos), m.size(), m.data());
        pos += static_cast<std::size_t>(m.size());
    };
    take(head.hidden_w);
    take(head.hidden_b);
    take(head.out_w);
    take(head.out_b);
}

double NetworkWeights::penalty_norm() const {
    double s = 0.0;
    for (const auto& layer : layers) {
        for (const auto& w : layer.per_ell) s += w.squaredNorm();
    }
    return s + head.hidden_w.squaredNorm() + head.out_w.squaredNorm();
}

bool NetworkWeights::all_finite() const {
    for (const auto& layer : layers) {
        for (const auto& w : layer.per_ell) {
            if (!w.allFinite()) return false;
        }
    }
    return head.hidden_w.allFinite() && head.hidden_b.allFinite() && head.out_w.allFinite() && head.out_b.allFinite();
}

NetworkWeights init_weights(const CGNetwork& net, std::uint64_t seed) {
    NetworkWeights w = NetworkWeights::zeros(net);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& layer : w.layers) {
        for (auto& m : layer.per_ell) {
            if (m.rows() == 0) continue;
            // E|w|^2 = 1 / fan_in, split evenly between real and imaginary parts.
            const double sd = 1.0 / std::sqrt(2.0 * static_cast<double>(m.rows()));
            for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = {sd * normal(rng), sd * normal(rng)};
        }
    }
    auto fill_real = [&](Eigen::MatrixXd& m) {
        const double sd = 1.0 / std::sqrt(static_cast<double>(m.cols()));
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = sd * normal(rng);
    };
    fill_real(w.head.hidden_w);
    fill_real(w.head.out_w);
    return w;
}

NetworkWeights init_weights(const NetworkSpec& spec, std::uint64_t seed) { return init_weights(CGNetwork(spec), seed); }

std::vector<NormState> make_norm_states(const CGNetwork& net) {
    std::vector<NormState> norms;
    for (int s = 0; s < net.depth(); ++s) norms.emplace_back(net.layout(s).output_type());
    return norms;
}

namespace {

std::vector<double> head_features(const ForwardTrace& t) { return invariant_head(t.outputs, t.input[0]); }

void check_input(const CGNetwork& net, const CovariantActivation& input) {
    if (input.type() != net.spec().input_type()) {
        throw ArgumentError("network input type does not match (n_in, ..., n_in) for the network band limit");
    }
}

}  // namespace

ForwardTrace trace_forward(const CGNetwork& net, const NetworkWeights& weights, const std::vector<NormState>* norms,
                           const CovariantActivation& input) {
    check_input(net, input);
    if (weights.layers.size() != static_cast<std::size_t>(net.depth())) {
        throw ArgumentError("trace_forward: weight layer count does not match network depth");
    }
    ForwardTrace t;
    t.input = input;
    const CovariantActivation* current = &t.input;
    for (int s = 0; s < net.depth(); ++s) {
        t.cg.push_back(cg_product(*current, net.cg_table(), net.layout(s)));
        t.normalized.push_back(norms ? covariant_normalize(t.cg.back(), (*norms)[static_cast<std::size_t>(s)])
                                     : t.cg.back());
        t.outputs.push_back(covariant_linear(t.normalized.back(), weights.layers[static_cast<std::size_t>(s)]));
        current = &t.outputs.back();
    }
    t.features = head_features(t);
    return t;
}

std::vector<ForwardTrace> trace_forward_batch(const CGNetwork& net, const NetworkWeights& weights,
                                              std::vector<NormState>* norms,
                                              std::span<const CovariantActivation> inputs, bool training) {
    if (weights.layers.size() != static_cast<std::size_t>(net.depth())) {
        throw ArgumentError("trace_forward_batch: weight layer count does not match network depth");
    }
    std::vector<ForwardTrace> traces(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        check_input(net, inputs[i]);
        traces[i].input = inputs[i];
    }
    for (int s = 0; s < net.depth(); ++s) {
        std::vector<CovariantActivation> cg;
        cg.reserve(inputs.size());
        for (auto& t : traces) {
            const CovariantActivation& in = s == 0 ? t.input : t.outputs.back();
            cg.push_back(cg_product(in, net.cg_table(), net.layout(s)));
        }
        std::vector<CovariantActivation> normalized =
            norms ? covariant_normalize(cg, (*norms)[static_cast<std::size_t>(s)], training) : cg;
        for (std::size_t i = 0; i < traces.size(); ++i) {
            traces[i].outputs.push_back(covariant_linear(normalized[i], weights.layers[static_cast<std::size_t>(s)]));
            traces[i].cg.push_back(std::move(cg[i]));
            traces[i].normalized.push_back(std::move(normalized[i]));
        }
    }
    for (auto& t : traces) t.features = head_features(t);
    return traces;
}

std::vector<double> network_forward(const CGNetwork& net, const NetworkWeights& weights,
                                    const std::vector<NormState>* norms, const CovariantActivation& input) {
    return trace_forward(net, weights, norms, input).features;
}

HeadTrace head_forward(const HeadWeights& head, std::span<const double> features) {
    if (static_cast<Eigen::Index>(features.size()) != head.hidden_w.cols()) {
        throw ArgumentError("head: expected " + std::to_string(head.hidden_w.cols()) + " features, got " +
                            std::to_string(features.size()));
    }
    HeadTrace t;
    t.features = Eigen::Map<const Eigen::VectorXd>(features.data(), static_cast<Eigen::Index>(features.size()));
    t.pre_activation = head.hidden_w * t.features + head.hidden_b;
    t.hidden = t.pre_activation.cwiseMax(0.0);
    t.logits = head.out_w * t.hidden + head.out_b;
    return t;
}

Eigen::VectorXd head_logits(const HeadWeights& head, std::span<const double> features) {
    return head_forward(head, features).logits;
}

int predict(const CGNetwork& net, const NetworkWeights& weights, const std::vector<NormState>* norms,
            const CovariantActivation& input) {
    const auto logits = head_logits(weights.head, network_forward(net, weights, norms, input));
    Eigen::Index best = 0;
    logits.maxCoeff(&best);
    return static_cast<int>(best);
}

}  // namespace cgnet
