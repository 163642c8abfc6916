// cgnet command-line harness: gen-data, train, eval, audit, dump-cg.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cgnet/commands.hpp"
#include "cgnet/errors.hpp"

namespace fs = std::filesystem;

namespace {

cgnet::ExperimentConfig read_config(const std::string& path, const std::optional<std::uint64_t>& seed) {
    cgnet::ExperimentConfig config = path.empty() ? cgnet::ExperimentConfig{} : cgnet::load_config(path);
    if (seed) config.seed = *seed;
    config.validate();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clebsch-Gordan spherical networks: data, training, evaluation and equivariance audits"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string data_dir;
    std::string checkpoint;
    std::optional<std::string> resume;
    int trials = 10;
    bool corrupt = false;
    int l1 = 0, l2 = 0, l = 0;

    auto* gen = app.add_subcommand("gen-data", "Generate the synthetic train/test_nr/test_r splits");
    gen->add_option("--config", config_path, "Experiment config file")->check(CLI::ExistingFile);
    gen->add_option("--seed", seed, "Override the config seed");
    gen->add_option("--out", out_dir, "Output directory")->required();

    auto* tr = app.add_subcommand("train", "Train a network and write a checkpoint");
    tr->add_option("--config", config_path, "Experiment config file")->check(CLI::ExistingFile);
    tr->add_option("--seed", seed, "Override the config seed");
    tr->add_option("--data", data_dir, "Dataset directory from gen-data")->required();
    tr->add_option("--out", out_dir, "Checkpoint directory")->required();
    tr->add_option("--resume", resume, "Continue from this checkpoint directory");

    auto* ev = app.add_subcommand("eval", "Accuracy and confusion matrix per split");
    ev->add_option("--checkpoint", checkpoint, "Checkpoint directory")->required();
    ev->add_option("--data", data_dir, "Dataset directory")->required();

    auto* au = app.add_subcommand("audit", "Check exact rotation equivariance of a checkpoint");
    au->add_option("--checkpoint", checkpoint, "Checkpoint directory")->required();
    au->add_option("--trials", trials, "Random (input, rotation) pairs")->check(CLI::PositiveNumber);
    au->add_option("--seed", seed, "Seed for inputs and rotations");
    au->add_flag("--corrupt-cg", corrupt, "Negate one CG coefficient first (sensitivity check)");

    auto* dump = app.add_subcommand("dump-cg", "Print a Clebsch-Gordan block");
    dump->add_option("l1", l1)->required()->check(CLI::NonNegativeNumber);
    dump->add_option("l2", l2)->required()->check(CLI::NonNegativeNumber);
    dump->add_option("l", l)->required()->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cgnet::kExitOk : cgnet::kExitUsage;
    }

    try {
        if (*gen) return cgnet::cmd_gen_data(read_config(config_path, seed), out_dir, std::cout);
        if (*tr) {
            std::optional<fs::path> from;
            if (resume) from = fs::path(*resume);
            return cgnet::cmd_train(read_config(config_path, seed), data_dir, out_dir, from, std::cout);
        }
        if (*ev) return cgnet::cmd_eval(checkpoint, data_dir, std::cout);
        if (*au) return cgnet::cmd_audit(checkpoint, trials, seed.value_or(1), corrupt, std::cout);
        if (*dump) {
            cgnet::dump_cg(l1, l2, l, std::cout);
            return cgnet::kExitOk;
        }
    } catch (const cgnet::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return cgnet::kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cgnet::kExitUsage;
    }
    return cgnet::kExitUsage;
}
