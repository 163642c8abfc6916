#include "cgnet/dataset.hpp"

#include <cmath>
#include <random>

#include "cgnet/errors.hpp"
#include "cgnet/signal_io.hpp"

namespace cgnet {

namespace {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

HarmonicCoefficients gaussian_coefficients(int bandlimit, double sigma, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, sigma / std::sqrt(2.0));
    HarmonicCoefficients c(bandlimit, 1);
    for (auto& block : c.blocks) {
        for (Eigen::Index i = 0; i < block.size(); ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            block.data()[i] = {re, im};
        }
    }
    return c;
}

HarmonicCoefficients add(HarmonicCoefficients a, const HarmonicCoefficients& b) {
    for (std::size_t l = 0; l < a.blocks.size(); ++l) a.blocks[l] += b.blocks[l];
    return a;
}

}  // namespace

GeneratedData gen_data(const ExperimentConfig& config) {
    config.validate();
    const int L = config.bandlimit;
    const int b = config.bandwidth;
    const int k = config.classes;

    std::mt19937_64 template_rng(stream_seed(config.seed, 1));
    std::vector<HarmonicCoefficients> templates;
    for (int c = 0; c < k; ++c) templates.push_back(gaussian_coefficients(L, 1.0, template_rng));

    auto make_split = [&](const std::string& name, std::uint64_t stream, int per_class, bool rotated) {
        SyntheticDataset ds;
        ds.split = name;
        ds.seed = stream_seed(config.seed, stream);
        std::mt19937_64 noise_rng(ds.seed);
        std::mt19937_64 rot_rng(stream_seed(config.seed, stream + 100));
        for (int i = 0; i < per_class * k; ++i) {
            const int label = i % k;
            HarmonicCoefficients c =
                add(templates[static_cast<std::size_t>(label)], gaussian_coefficients(L, config.noise_sigma, noise_rng));
            const EulerAngles r = random_rotation(rot_rng);
            if (rotated) c = rotate_coefficients(c, r);
            ds.signals.push_back(inverse_sht(c, b));
            ds.labels.push_back(label);
        }
        return ds;
    };

    const bool rotate_train = config.regime == Regime::RR;
    GeneratedData out;
    out.train = make_split("train", 2, config.train_per_class, rotate_train);
    // Same stream for both test splits: identical noise draws and rotations,
    // applied or not.
    out.test_nr = make_split("test_nr", 3, config.test_per_class, false);
    out.test_r = make_split("test_r", 3, config.test_per_class, true);
    return out;
}

void save_dataset(const std::filesystem::path& dir, const SyntheticDataset& data) {
    std::filesystem::create_directories(dir);
    save_signals(dir / (data.split + ".sph"), data.signals);
    save_labels(dir / (data.split + ".labels"), data.labels);
}

SyntheticDataset load_dataset(const std::filesystem::path& dir, const std::string& split) {
    SyntheticDataset ds;
    ds.split = split;
    ds.signals = load_signals(dir / (split + ".sph"));
    ds.labels = load_labels(dir / (split + ".labels"));
    if (ds.signals.size() != ds.labels.size()) {
        throw IoError(split + ": " + std::to_string(ds.signals.size()) + " signals but " +
                      std::to_string(ds.labels.size()) + " labels");
    }
    return ds;
}

std::vector<Example> to_examples(const SyntheticDataset& data, int bandlimit) {
    std::vector<Example> out;
    out.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        out.push_back({to_activation(forward_sht(data.signals[i], bandlimit)), data.labels[i]});
    }
    return out;
}

}  // namespace cgnet
