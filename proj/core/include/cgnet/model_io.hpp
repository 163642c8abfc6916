#pragma once

#include <filesystem>
#include <vector>

#include "cgnet/adam.hpp"
#include "cgnet/network.hpp"

namespace cgnet {

/// A trained (or freshly initialised) network: architecture, weights and
/// normaliser state. `norms` is empty when normalisation is disabled.
struct Model {
    NetworkSpec spec;
    NetworkWeights weights;
    std::vector<NormState> norms;

    const std::vector<NormState>* norm_states() const { return norms.empty() ? nullptr : &norms; }
    std::vector<NormState>* norm_states() { return norms.empty() ? nullptr : &norms; }
};

// A model directory holds:
//   model.manifest  flat key = value text: format, band limit, depth, n_in,
//                   per-layer tau, pair policy, head sizes, parameter and
//                   normaliser counts, and the blob's value order.
//   model.bin       "CGW1", u64 parameter count, the packed parameters as
//                   little-endian f64 (NetworkWeights::pack order), u64 layer
//                   count, then per layer: u64 examples seen and every
//                   running scale (degree ascending, fragment ascending).
// A checkpoint directory adds adam.bin: "ADM1", f64 lr, beta1, beta2, eps,
// weight_decay, u64 step, u64 n, n first moments, n second moments.

inline constexpr const char* kManifestFile = "model.manifest";
inline constexpr const char* kWeightsFile = "model.bin";
inline constexpr const char* kAdamFile = "adam.bin";

void save_model(const std::filesystem::path& dir, const Model& model);
Model load_model(const std::filesystem::path& dir);

void save_adam(const std::filesystem::path& path, const AdamState& state);
AdamState load_adam(const std::filesystem::path& path);

}  // namespace cgnet
