#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cgnet/config.hpp"
#include "cgnet/model_io.hpp"

namespace cgnet {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumeric = 2, kExitAudit = 3 };

inline constexpr double kAuditTolerance = 1e-7;

/// Errors of one (input, rotation) pair. Layer errors are relative Frobenius
/// deviations of f(Rx) from D(R) f(x) per layer output; the head error is the
/// relative deviation of the invariant feature vector.
struct EquivarianceReport {
    std::vector<double> layer_error;
    double head_error = 0.0;
    int trials = 0;

    double max_error() const;
    /// Keeps the elementwise maximum.
    void merge(const EquivarianceReport& other);
};

EquivarianceReport audit_pair(const CGNetwork& net, const NetworkWeights& weights,
                              const std::vector<NormState>* norms, const CovariantActivation& input,
                              const EulerAngles& rotation);

/// `trials` random Gaussian inputs of the network's input type, each paired
/// with a Haar-random rotation.
EquivarianceReport audit_equivariance(const CGNetwork& net, const NetworkWeights& weights,
                                      const std::vector<NormState>* norms, int trials, std::uint64_t seed);

/// Negates one coefficient of a CG block that the first layer consumes.
void corrupt_cg_table(CGNetwork& net);

int cmd_gen_data(const ExperimentConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

/// Trains on <data_dir>/train and writes the model files, adam.bin, config.txt
/// and train.log into out_dir. With `resume`, weights, norm state and the
/// optimiser are loaded from that checkpoint and training continues from its
/// step count.
int cmd_train(const ExperimentConfig& config, const std::filesystem::path& data_dir,
              const std::filesystem::path& out_dir, const std::optional<std::filesystem::path>& resume,
              std::ostream& log);

/// Accuracy and confusion matrix for every split present in data_dir.
int cmd_eval(const std::filesystem::path& checkpoint, const std::filesystem::path& data_dir, std::ostream& out);

int cmd_audit(const std::filesystem::path& checkpoint, int trials, std::uint64_t seed, bool corrupt_cg,
              std::ostream& out);

/// One line `l1 l2 l m1 m2 m value` per stored coefficient.
void dump_cg(int l1, int l2, int l, std::ostream& out);

}  // namespace cgnet
