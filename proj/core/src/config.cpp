#include "cgnet/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cgnet/errors.hpp"
#include "cgnet/kv_text.hpp"

namespace cgnet {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::NrNr: return "NR/NR";
        case Regime::NrR: return "NR/R";
        case Regime::RR: return "R/R";
    }
    return "?";
}

Regime parse_regime(std::string_view text) {
    if (text == "NR/NR") return Regime::NrNr;
    if (text == "NR/R") return Regime::NrR;
    if (text == "R/R") return Regime::RR;
    throw ArgumentError("unknown rotation regime '" + std::string(text) + "' (expected NR/NR, NR/R or R/R)");
}

std::string to_string(PairPolicy p) { return p == PairPolicy::Ordered ? "ordered" : "unordered"; }

PairPolicy parse_pair_policy(std::string_view text) {
    if (text == "unordered") return PairPolicy::Unordered;
    if (text == "ordered") return PairPolicy::Ordered;
    throw ArgumentError("unknown pair policy '" + std::string(text) + "' (expected ordered or unordered)");
}

ActivationType TauSchedule::resolve(int bandlimit) const {
    std::vector<int> tau(static_cast<std::size_t>(bandlimit + 1));
    for (int l = 0; l <= bandlimit; ++l) {
        switch (kind) {
            case Kind::Uniform: tau[static_cast<std::size_t>(l)] = uniform; break;
            case Kind::Rule:
                tau[static_cast<std::size_t>(l)] = static_cast<int>(std::ceil(12.0 / std::sqrt(2.0 * l + 1.0)));
                break;
            case Kind::Explicit:
                if (counts.size() != static_cast<std::size_t>(bandlimit + 1)) {
                    throw ArgumentError("tau list has " + std::to_string(counts.size()) + " entries, band limit " +
                                        std::to_string(bandlimit) + " needs " + std::to_string(bandlimit + 1));
                }
                tau[static_cast<std::size_t>(l)] = counts[static_cast<std::size_t>(l)];
                break;
        }
    }
    return ActivationType(std::move(tau));
}

std::string TauSchedule::to_text() const {
    switch (kind) {
        case Kind::Uniform: return std::to_string(uniform);
        case Kind::Rule: return std::string(kTauRule);
        case Kind::Explicit: {
            std::string s;
            for (std::size_t i = 0; i < counts.size(); ++i) s += (i ? " " : "") + std::to_string(counts[i]);
            return s;
        }
    }
    return {};
}

TauSchedule TauSchedule::parse(std::string_view text, int line) {
    TauSchedule t;
    std::string compact;
    for (char c : text) {
        if (c != ' ' && c != '\t') compact += c;
    }
    if (compact == kTauRule) {
        t.kind = Kind::Rule;
        return t;
    }
    std::istringstream in{std::string(text)};
    std::vector<int> values;
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        int v = -1;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || v < 0) throw ParseError("tau must be a count, a list of counts or " + std::string(kTauRule), line);
        values.push_back(v);
    }
    if (values.empty()) throw ParseError("empty tau", line);
    if (values.size() == 1) {
        t.kind = Kind::Uniform;
        t.uniform = values.front();
    } else {
        t.kind = Kind::Explicit;
        t.counts = std::move(values);
    }
    return t;
}

void ExperimentConfig::validate() const {
    if (bandlimit < 0) throw ArgumentError("bandlimit must be non-negative");
    if (bandlimit >= bandwidth) throw ArgumentError("bandlimit must be below bandwidth (L < b)");
    if (layers < 1) throw ArgumentError("need at least one layer");
    if (classes < 2) throw ArgumentError("need at least two classes");
    if (train_per_class < 1 || test_per_class < 1) throw ArgumentError("per-class example counts must be positive");
    if (noise_sigma < 0.0) throw ArgumentError("noise_sigma must be non-negative");
    if (batch_size < 1 || steps < 0) throw ArgumentError("batch_size must be positive and steps non-negative");
    if (dropout < 0.0 || dropout >= 1.0) throw ArgumentError("dropout must lie in [0, 1)");
    tau.resolve(bandlimit);
}

NetworkSpec ExperimentConfig::network_spec() const {
    NetworkSpec spec;
    spec.bandlimit = bandlimit;
    spec.n_in = 1;
    spec.layer_types.assign(static_cast<std::size_t>(layers), tau.resolve(bandlimit));
    spec.pair_policy = pair_policy;
    spec.head_hidden = head_hidden;
    spec.n_out = classes;
    return spec;
}

TrainOptions ExperimentConfig::train_options() const {
    TrainOptions o;
    o.steps = steps;
    o.batch_size = batch_size;
    o.adam = {lr, beta1, beta2, eps, 0.0};
    o.l2 = weight_decay;
    o.dropout = dropout;
    o.seed = seed;
    o.time_budget_s = time_budget_s;
    return o;
}

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "bandlimit", "bandwidth", "layers", "tau", "pair_policy", "normalize", "head_hidden", "dropout",
        "classes", "train_per_class", "test_per_class", "noise_sigma", "regime", "steps", "batch_size", "lr",
        "beta1", "beta2", "eps", "weight_decay", "time_budget_s", "seed"};
    return keys;
}

bool parse_bool(const std::string& text, int line) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ParseError("expected true or false, got '" + text + "'", line);
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    const KeyValueText kv = KeyValueText::parse(text);
    for (const auto& key : kv.keys()) {
        if (!known_keys().count(key)) throw ParseError("unknown key '" + key + "'", kv.line_of(key));
    }
    ExperimentConfig c;
    c.bandlimit = kv.get_int_or("bandlimit", c.bandlimit);
    c.bandwidth = kv.get_int_or("bandwidth", c.bandwidth);
    c.layers = kv.get_int_or("layers", c.layers);
    if (kv.contains("tau")) c.tau = TauSchedule::parse(kv.get("tau"), kv.line_of("tau"));
    auto wrap = [&kv](const char* key, auto&& fn) {
        try {
            fn();
        } catch (const ArgumentError& e) {
            throw ParseError(e.what(), kv.line_of(key));
        }
    };
    if (kv.contains("pair_policy")) wrap("pair_policy", [&] { c.pair_policy = parse_pair_policy(kv.get("pair_policy")); });
    if (kv.contains("normalize")) c.normalize = parse_bool(kv.get("normalize"), kv.line_of("normalize"));
    c.head_hidden = kv.get_int_or("head_hidden", c.head_hidden);
    c.dropout = kv.get_double_or("dropout", c.dropout);
    c.classes = kv.get_int_or("classes", c.classes);
    c.train_per_class = kv.get_int_or("train_per_class", c.train_per_class);
    c.test_per_class = kv.get_int_or("test_per_class", c.test_per_class);
    c.noise_sigma = kv.get_double_or("noise_sigma", c.noise_sigma);
    if (kv.contains("regime")) wrap("regime", [&] { c.regime = parse_regime(kv.get("regime")); });
    c.steps = kv.get_int_or("steps", c.steps);
    c.batch_size = kv.get_int_or("batch_size", c.batch_size);
    c.lr = kv.get_double_or("lr", c.lr);
    c.beta1 = kv.get_double_or("beta1", c.beta1);
    c.beta2 = kv.get_double_or("beta2", c.beta2);
    c.eps = kv.get_double_or("eps", c.eps);
    c.weight_decay = kv.get_double_or("weight_decay", c.weight_decay);
    c.time_budget_s = kv.get_double_or("time_budget_s", c.time_budget_s);
    c.seed = kv.get_u64_or("seed", c.seed);
    try {
        c.validate();
    } catch (const ArgumentError& e) {
        throw ParseError(std::string("invalid configuration: ") + e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::string serialize_config(const ExperimentConfig& c) {
    KeyValueText kv;
    kv.set("bandlimit", std::to_string(c.bandlimit));
    kv.set("bandwidth", std::to_string(c.bandwidth));
    kv.set("layers", std::to_string(c.layers));
    kv.set("tau", c.tau.to_text());
    kv.set("pair_policy", to_string(c.pair_policy));
    kv.set("normalize", c.normalize ? "true" : "false");
    kv.set("head_hidden", std::to_string(c.head_hidden));
    kv.set("dropout", format_double(c.dropout));
    kv.set("classes", std::to_string(c.classes));
    kv.set("train_per_class", std::to_string(c.train_per_class));
    kv.set("test_per_class", std::to_string(c.test_per_class));
    kv.set("noise_sigma", format_double(c.noise_sigma));
    kv.set("regime", to_string(c.regime));
    kv.set("steps", std::to_string(c.steps));
    kv.set("batch_size", std::to_string(c.batch_size));
    kv.set("lr", format_double(c.lr));
    kv.set("beta1", format_double(c.beta1));
    kv.set("beta2", format_double(c.beta2));
    kv.set("eps", format_double(c.eps));
    kv.set("weight_decay", format_double(c.weight_decay));
    kv.set("time_budget_s", format_double(c.time_budget_s));
    kv.set("seed", std::to_string(c.seed));
    return kv.serialize();
}

}  // namespace cgnet
