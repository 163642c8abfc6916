#include "cgnet/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>

#include "cgnet/dataset.hpp"
#include "cgnet/errors.hpp"
#include "cgnet/kv_text.hpp"

namespace cgnet {

namespace fs = std::filesystem;

double EquivarianceReport::max_error() const {
    double m = head_error;
    for (double e : layer_error) m = std::max(m, e);
    return m;
}

void EquivarianceReport::merge(const EquivarianceReport& other) {
    if (layer_error.size() < other.layer_error.size()) layer_error.resize(other.layer_error.size(), 0.0);
    for (std::size_t s = 0; s < other.layer_error.size(); ++s) {
        layer_error[s] = std::max(layer_error[s], other.layer_error[s]);
    }
    head_error = std::max(head_error, other.head_error);
    trials += other.trials;
}

EquivarianceReport audit_pair(const CGNetwork& net, const NetworkWeights& weights,
                              const std::vector<NormState>* norms, const CovariantActivation& input,
                              const EulerAngles& rotation) {
    const auto wigner = wigner_D_all(net.spec().bandlimit, rotation);
    const ForwardTrace plain = trace_forward(net, weights, norms, input);
    const ForwardTrace turned = trace_forward(net, weights, norms, rotate(input, wigner));

    EquivarianceReport report;
    report.trials = 1;
    for (std::size_t s = 0; s < plain.outputs.size(); ++s) {
        const auto& out = plain.outputs[s];
        std::vector<ComplexMatrix> w(wigner.begin(), wigner.begin() + static_cast<long>(out.parts.size()));
        report.layer_error.push_back(relative_difference(turned.outputs[s], rotate(out, w)));
    }
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < plain.features.size(); ++i) {
        diff += (turned.features[i] - plain.features[i]) * (turned.features[i] - plain.features[i]);
        ref += plain.features[i] * plain.features[i];
    }
    report.head_error = ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
    return report;
}

EquivarianceReport audit_equivariance(const CGNetwork& net, const NetworkWeights& weights,
                                      const std::vector<NormState>* norms, int trials, std::uint64_t seed) {
    if (trials < 1) throw ArgumentError("audit: trials must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
    EquivarianceReport total;
    for (int t = 0; t < trials; ++t) {
        auto input = CovariantActivation::zeros(net.spec().input_type());
        for (auto& part : input.parts) {
            for (Eigen::Index i = 0; i < part.size(); ++i) {
                const double re = normal(rng);
                part.data()[i] = {re, normal(rng)};
            }
        }
        total.merge(audit_pair(net, weights, norms, input, random_rotation(rng)));
    }
    return total;
}

void corrupt_cg_table(CGNetwork& net) {
    for (const auto& seg : net.layout(0).segments()) {
        if (seg.ell1 < 1) continue;
        auto& block = net.mutable_cg_table().mutable_block(seg.ell1, seg.ell2, seg.ell);
        if (block.entries.empty()) continue;
        block.entries.front().value = -block.entries.front().value;
        return;
    }
    throw ArgumentError("corrupt_cg_table: first layer uses no block with l1 >= 1");
}

namespace {

Model fresh_model(const ExperimentConfig& config) {
    Model m;
    m.spec = config.network_spec();
    const CGNetwork net(m.spec);
    m.weights = init_weights(net, config.seed);
    if (config.normalize) m.norms = make_norm_states(net);
    return m;
}

void check_compatible(const Model& model, const SyntheticDataset& data) {
    if (data.size() == 0) throw ArgumentError("dataset split '" + data.split + "' is empty");
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& sig = data.signals[i];
        if (static_cast<int>(sig.channels.size()) != model.spec.n_in) {
            throw ArgumentError("example " + std::to_string(i) + " of '" + data.split + "' has " +
                                std::to_string(sig.channels.size()) + " channels, model expects " +
                                std::to_string(model.spec.n_in));
        }
        if (sig.bandwidth <= model.spec.bandlimit) {
            throw ArgumentError("example " + std::to_string(i) + " of '" + data.split + "' has bandwidth " +
                                std::to_string(sig.bandwidth) + ", model band limit " +
                                std::to_string(model.spec.bandlimit) + " needs more than that");
        }
        if (data.labels[i] < 0 || data.labels[i] >= model.spec.n_out) {
            throw ArgumentError("example " + std::to_string(i) + " of '" + data.split + "' has label " +
                                std::to_string(data.labels[i]) + " outside [0, " +
                                std::to_string(model.spec.n_out) + ")");
        }
    }
}

void print_confusion(const EvalReport& r, std::ostream& out) {
    out << "  confusion (rows true, columns predicted):\n";
    for (const auto& row : r.confusion) {
        out << "   ";
        for (int v : row) out << ' ' << std::setw(5) << v;
        out << '\n';
    }
}

}  // namespace

int cmd_gen_data(const ExperimentConfig& config, const fs::path& out_dir, std::ostream& log) {
    const GeneratedData data = gen_data(config);
    fs::create_directories(out_dir);
    for (const auto* split : {&data.train, &data.test_nr, &data.test_r}) {
        save_dataset(out_dir, *split);
        log << split->split << ": " << split->size() << " examples\n";
    }
    std::ofstream(out_dir / "config.txt") << serialize_config(config);
    return kExitOk;
}

int cmd_train(const ExperimentConfig& config, const fs::path& data_dir, const fs::path& out_dir,
              const std::optional<fs::path>& resume, std::ostream& log) {
    config.validate();
    const SyntheticDataset train_set = load_dataset(data_dir, "train");

    Model model;
    AdamState adam;
    if (resume) {
        model = load_model(*resume);
        adam = load_adam(*resume / kAdamFile);
    } else {
        model = fresh_model(config);
        adam = AdamState(model.weights.parameter_count(), config.train_options().adam);
    }
    check_compatible(model, train_set);
    const CGNetwork net(model.spec);
    const auto examples = to_examples(train_set, model.spec.bandlimit);

    fs::create_directories(out_dir);
    std::ofstream(out_dir / "config.txt") << serialize_config(config);
    std::ofstream train_log(out_dir / "train.log", resume ? std::ios::app : std::ios::trunc);
    if (!train_log) throw IoError("cannot write " + (out_dir / "train.log").string());

    // Without normalisation the norm vector stays empty and train() skips it.
    const TrainOptions options = config.train_options();
    const std::uint64_t start_step = adam.step;
    const bool finished = train(net, model.weights, model.norms, adam, examples, options, [&](const StepLog& s) {
        train_log << s.step << '\t' << format_double(s.loss) << '\t' << format_double(s.train_accuracy) << '\t'
                  << format_double(s.lr) << '\t' << format_double(s.wall_ms) << '\n';
        if (s.step % 100 == 0 || s.step == static_cast<std::uint64_t>(options.steps)) {
            log << "step " << s.step << "  loss " << s.loss << "  train_acc " << s.train_accuracy << '\n';
        }
    });

    save_model(out_dir, model);
    save_adam(out_dir / kAdamFile, adam);
    log << "trained " << (adam.step - start_step) << " steps (total " << adam.step << ")";
    if (!finished) log << ", stopped by the " << config.time_budget_s << " s time budget";
    log << "; checkpoint in " << out_dir.string() << '\n';
    return kExitOk;
}

int cmd_eval(const fs::path& checkpoint, const fs::path& data_dir, std::ostream& out) {
    const Model model = load_model(checkpoint);
    const CGNetwork net(model.spec);

    std::optional<double> acc_nr;
    std::optional<double> acc_r;
    bool any = false;
    for (const char* split : {"train", "test_nr", "test_r"}) {
        if (!fs::exists(data_dir / (std::string(split) + ".sph"))) continue;
        any = true;
        const SyntheticDataset data = load_dataset(data_dir, split);
        check_compatible(model, data);
        const auto examples = to_examples(data, model.spec.bandlimit);
        const EvalReport r = evaluate(net, model.weights, model.norms, examples);
        out << split << ": accuracy " << std::fixed << std::setprecision(4) << r.accuracy << " ("
            << examples.size() << " examples)\n";
        out.unsetf(std::ios::floatfield);
        print_confusion(r, out);
        if (std::string(split) == "test_nr") acc_nr = r.accuracy;
        if (std::string(split) == "test_r") acc_r = r.accuracy;
    }
    if (!any) throw IoError("no dataset splits found in " + data_dir.string());
    if (acc_nr && acc_r) out << "|acc(test_nr) - acc(test_r)| = " << std::abs(*acc_nr - *acc_r) << '\n';
    return kExitOk;
}

int cmd_audit(const fs::path& checkpoint, int trials, std::uint64_t seed, bool corrupt_cg, std::ostream& out) {
    const Model model = load_model(checkpoint);
    CGNetwork net(model.spec);
    if (corrupt_cg) {
        corrupt_cg_table(net);
        out << "CG table corrupted: one coefficient negated\n";
    }
    const EquivarianceReport r = audit_equivariance(net, model.weights, model.norm_states(), trials, seed);
    out << "trials " << r.trials << '\n';
    out << std::scientific << std::setprecision(3);
    for (std::size_t s = 0; s < r.layer_error.size(); ++s) {
        out << "layer " << s + 1 << " covariance error " << r.layer_error[s] << '\n';
    }
    out << "head invariance error " << r.head_error << '\n';
    const bool pass = r.max_error() <= kAuditTolerance;
    out << (pass ? "PASS" : "FAIL") << " (tolerance " << kAuditTolerance << ")\n";
    out.unsetf(std::ios::floatfield);
    return pass ? kExitOk : kExitAudit;
}

void dump_cg(int l1, int l2, int l, std::ostream& out) {
    const CGBlock block = cg_block(l1, l2, l);
    char buf[64];
    for (const auto& e : block.entries) {
        std::snprintf(buf, sizeof buf, "%.17g", e.value);
        out << l1 << ' ' << l2 << ' ' << l << ' ' << e.m1 << ' ' << e.m2 << ' ' << e.m << ' ' << buf << '\n';
    }
}

}  // namespace cgnet
