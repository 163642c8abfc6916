#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cgnet/config.hpp"
#include "cgnet/sht.hpp"
#include "cgnet/train.hpp"

namespace cgnet {

struct SyntheticDataset {
    std::string split;  // "train", "test_nr" or "test_r"
    std::uint64_t seed = 0;
    std::vector<SphericalSignal> signals;
    std::vector<int> labels;

    std::size_t size() const { return labels.size(); }
};

/// The three splits written by gen-data. test_r holds exactly the examples of
/// test_nr, each rotated by its own Haar-random rotation.
struct GeneratedData {
    SyntheticDataset train;
    SyntheticDataset test_nr;
    SyntheticDataset test_r;

    /// The test split that matches the configured regime.
    const SyntheticDataset& regime_test(Regime regime) const { return regime == Regime::NrNr ? test_nr : test_r; }
};

/// K random band-limited templates (i.i.d. complex Gaussian coefficients up to
/// L), examples = template + coefficient noise, rotated per the regime in
/// coefficient space and synthesised onto the grid. Class-balanced.
GeneratedData gen_data(const ExperimentConfig& config);

/// Writes <dir>/<split>.sph and <dir>/<split>.labels.
void save_dataset(const std::filesystem::path& dir, const SyntheticDataset& data);
SyntheticDataset load_dataset(const std::filesystem::path& dir, const std::string& split);

/// Forward SHT of every signal up to `bandlimit`.
std::vector<Example> to_examples(const SyntheticDataset& data, int bandlimit);

}  // namespace cgnet
