#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cgnet/adam.hpp"
#include "cgnet/cg_product.hpp"
#include "cgnet/network.hpp"
#include "cgnet/train.hpp"

namespace cgnet {

/// Training/test rotation regime: NR/NR, NR/R or R/R.
enum class Regime { NrNr, NrR, RR };

std::string to_string(Regime r);
Regime parse_regime(std::string_view text);

std::string to_string(PairPolicy p);
PairPolicy parse_pair_policy(std::string_view text);

/// Fragment counts per degree: a single uniform count, an explicit list, or
/// the rule tau_l = ceil(12 / sqrt(2l + 1)).
struct TauSchedule {
    enum class Kind { Uniform, Explicit, Rule };
    Kind kind = Kind::Uniform;
    int uniform = 4;
    std::vector<int> counts;

    ActivationType resolve(int bandlimit) const;
    std::string to_text() const;
    static TauSchedule parse(std::string_view text, int line = 0);

    friend bool operator==(const TauSchedule&, const TauSchedule&) = default;
};

inline constexpr std::string_view kTauRule = "ceil(12/sqrt(2l+1))";

/// Everything that determines one run. Defaults are the desk-scale setup.
struct ExperimentConfig {
    int bandlimit = 5;
    int bandwidth = 8;
    int layers = 3;
    TauSchedule tau{};
    PairPolicy pair_policy = PairPolicy::Unordered;
    bool normalize = true;
    int head_hidden = 64;
    double dropout = 0.0;

    int classes = 4;
    int train_per_class = 50;
    int test_per_class = 25;
    double noise_sigma = 0.3;
    Regime regime = Regime::RR;

    int steps = 2000;
    int batch_size = 32;
    double lr = 5e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 1e-5;
    double time_budget_s = 600.0;
    std::uint64_t seed = 1;

    void validate() const;
    NetworkSpec network_spec() const;
    TrainOptions train_options() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Unknown keys and malformed values raise ParseError with the line number.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

}  // namespace cgnet
