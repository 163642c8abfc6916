#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "cgnet/commands.hpp"
#include "cgnet/dataset.hpp"
#include "cgnet/errors.hpp"
#include "cgnet/signal_io.hpp"
#include "test_util.hpp"

using namespace cgnet;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("cgnet_cmd_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.bandlimit = 3;
    c.bandwidth = 5;
    c.layers = 2;
    c.tau.uniform = 2;
    c.head_hidden = 8;
    c.classes = 2;
    c.train_per_class = 4;
    c.test_per_class = 3;
    c.steps = 3;
    c.batch_size = 4;
    return c;
}

#ifdef CGNET_CLI_PATH
int run_cli(const std::string& args, std::string* output = nullptr) {
    const std::string cmd = std::string(CGNET_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return -1;
    std::string out;
    char buf[512];
    while (std::fgets(buf, sizeof buf, pipe)) out += buf;
    const int status = pclose(pipe);
    if (output) *output = out;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
#endif

}  // namespace

TEST(GenData, NoiselessUnrotatedClassesAreIdentical) {
    ExperimentConfig c = small_config();
    c.noise_sigma = 0.0;
    c.regime = Regime::NrNr;
    const auto data = gen_data(c);
    ASSERT_EQ(data.train.size(), 8u);
    for (std::size_t i = 0; i < data.train.size(); ++i) {
        for (std::size_t j = 0; j < data.train.size(); ++j) {
            const double d = tu::max_abs(data.train.signals[i].channels[0] - data.train.signals[j].channels[0]);
            if (data.train.labels[i] == data.train.labels[j]) {
                EXPECT_EQ(d, 0.0);
            } else {
                EXPECT_GT(d, 1e-3);
            }
        }
    }
    std::vector<int> counts(2, 0);
    for (int l : data.test_nr.labels) ++counts[static_cast<std::size_t>(l)];
    EXPECT_EQ(counts[0], counts[1]);
}

TEST(GenData, RotatedCopiesShareInvariantFeatures) {
    ExperimentConfig c = small_config();
    c.noise_sigma = 0.0;
    const auto data = gen_data(c);
    const auto nr = to_examples(data.test_nr, c.bandlimit);
    const auto r = to_examples(data.test_r, c.bandlimit);
    const CGNetwork net(c.network_spec());
    const auto w = init_weights(net, 12);
    for (std::size_t i = 0; i < nr.size(); ++i) {
        EXPECT_GT(tu::max_abs(data.test_nr.signals[i].channels[0] - data.test_r.signals[i].channels[0]), 1e-3);
        const auto f = network_forward(net, w, nullptr, nr[i].input);
        const auto g = network_forward(net, w, nullptr, r[i].input);
        double diff = 0.0, ref = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k) {
            diff += (f[k] - g[k]) * (f[k] - g[k]);
            ref += f[k] * f[k];
        }
        EXPECT_LT(std::sqrt(diff / ref), 1e-8);
    }
    // Same class, different rotation: grids differ.
    EXPECT_GT(tu::max_abs(data.train.signals[0].channels[0] - data.train.signals[2].channels[0]), 1e-3);
}

TEST(GenData, FixedSeedGivesIdenticalFiles) {
    const ExperimentConfig c = small_config();
    const fs::path a = scratch_dir("gen_a"), b = scratch_dir("gen_b");
    std::ostringstream log;
    cmd_gen_data(c, a, log);
    cmd_gen_data(c, b, log);
    for (const char* f : {"train.sph", "train.labels", "test_nr.sph", "test_r.sph", "test_r.labels"}) {
        EXPECT_EQ(read_file(a / f), read_file(b / f)) << f;
        EXPECT_FALSE(read_file(a / f).empty());
    }
    const auto loaded = load_dataset(a, "train");
    EXPECT_EQ(loaded.size(), 8u);
    EXPECT_EQ(load_labels(a / "train.labels"), gen_data(c).train.labels);
}

TEST(Commands, TrainEvalResume) {
    const ExperimentConfig c = small_config();
    const fs::path data = scratch_dir("tr_data"), ck = scratch_dir("tr_ck"), ck2 = scratch_dir("tr_ck2");
    std::ostringstream log;
    cmd_gen_data(c, data, log);
    ASSERT_EQ(cmd_train(c, data, ck, std::nullopt, log), kExitOk);
    for (const char* f : {"model.manifest", "model.bin", "adam.bin", "train.log", "config.txt"}) EXPECT_TRUE(fs::exists(ck / f)) << f;
    const Model m = load_model(ck);
    EXPECT_EQ(load_adam(ck / "adam.bin").step, 3u);

    // Resuming to 6 steps equals a straight 6-step run.
    ExperimentConfig six = c;
    six.steps = 6;
    ASSERT_EQ(cmd_train(six, data, ck, ck, log), kExitOk);
    ASSERT_EQ(cmd_train(six, data, ck2, std::nullopt, log), kExitOk);
    EXPECT_EQ(load_model(ck).weights.pack(), load_model(ck2).weights.pack());
    std::ifstream train_log(ck / "train.log");
    std::string line;
    int rows = 0;
    while (std::getline(train_log, line)) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), '\t'), 4);
    }
    EXPECT_EQ(rows, 6);

    std::ostringstream report;
    ASSERT_EQ(cmd_eval(ck, data, report), kExitOk);
    EXPECT_NE(report.str().find("test_nr: accuracy"), std::string::npos);
    EXPECT_NE(report.str().find("|acc(test_nr) - acc(test_r)| = 0"), std::string::npos);
}

TEST(Commands, EvalRejectsEmptyAndMismatchedData) {
    const ExperimentConfig c = small_config();
    const fs::path data = scratch_dir("ev_data"), ck = scratch_dir("ev_ck");
    std::ostringstream log;
    cmd_gen_data(c, data, log);
    cmd_train(c, data, ck, std::nullopt, log);

    const fs::path empty = scratch_dir("ev_empty");
    save_signals(empty / "test_nr.sph", {});
    save_labels(empty / "test_nr.labels", {});
    std::ostringstream out;
    EXPECT_THROW(cmd_eval(ck, empty, out), ArgumentError);
    EXPECT_THROW(cmd_eval(ck, scratch_dir("ev_none"), out), IoError);

    ExperimentConfig coarse = c;
    coarse.bandwidth = 3;
    coarse.bandlimit = 2;
    const fs::path other = scratch_dir("ev_other");
    cmd_gen_data(coarse, other, log);
    try {
        cmd_eval(ck, other, out);
        FAIL() << "expected a shape error";
    } catch (const ArgumentError& e) {
        EXPECT_NE(std::string(e.what()).find("bandwidth"), std::string::npos);
    }
}

TEST(Commands, MemorisesTinyTrainingSet) {
    ExperimentConfig c = small_config();
    c.steps = 150;
    c.lr = 1e-2;
    c.batch_size = 8;
    const fs::path data = scratch_dir("mem_data"), ck = scratch_dir("mem_ck");
    std::ostringstream log;
    cmd_gen_data(c, data, log);
    cmd_train(c, data, ck, std::nullopt, log);
    const Model m = load_model(ck);
    const CGNetwork net(m.spec);
    const auto examples = to_examples(load_dataset(data, "train"), m.spec.bandlimit);
    EXPECT_EQ(evaluate(net, m.weights, m.norms, examples).accuracy, 1.0);
}

TEST(Audit, IdentityRotationIsExact) {
    const CGNetwork net(small_config().network_spec());
    const auto w = init_weights(net, 1);
    std::mt19937_64 rng(3);
    const auto x = tu::random_activation(net.spec().input_type(), rng);
    const auto r = audit_pair(net, w, nullptr, x, {});
    EXPECT_EQ(r.max_error(), 0.0);
}

TEST(Audit, RandomNetworkPassesCorruptedTableFails) {
    CGNetwork net(ExperimentConfig{}.network_spec());
    const auto w = init_weights(net, 2);
    const auto norms = make_norm_states(net);
    const auto ok = audit_equivariance(net, w, &norms, 10, 4);
    EXPECT_EQ(ok.trials, 10);
    EXPECT_EQ(ok.layer_error.size(), 3u);
    EXPECT_LT(ok.max_error(), 1e-8);
    corrupt_cg_table(net);
    EXPECT_GT(audit_equivariance(net, w, &norms, 10, 4).max_error(), 1e-3);
}

TEST(DumpCg, FormatsSeventeenDigits) {
    std::ostringstream out;
    dump_cg(1, 1, 0, out);
    std::istringstream in(out.str());
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        int l1, l2, l, m1, m2, m;
        double v;
        std::istringstream fields(line);
        ASSERT_TRUE(fields >> l1 >> l2 >> l >> m1 >> m2 >> m >> v);
        EXPECT_EQ(m1 + m2, m);
        EXPECT_EQ(v, clebsch_gordan_coeff(l1, l2, l, m1, m2, m));
        ++n;
    }
    EXPECT_EQ(n, 3);
    EXPECT_THROW(dump_cg(1, 1, 3, out), ArgumentError);
}

#ifdef CGNET_CLI_PATH
TEST(Cli, ExitCodes) {
    const fs::path dir = scratch_dir("cli");
    std::string out;
    EXPECT_EQ(run_cli("", &out), kExitUsage);
    EXPECT_EQ(run_cli("frobnicate", &out), kExitUsage);
    EXPECT_EQ(run_cli("dump-cg 1 1 2", &out), kExitOk);
    EXPECT_NE(out.find("1 1 2 1 1 2 1"), std::string::npos);
    EXPECT_EQ(run_cli("dump-cg 1 1 5", &out), kExitUsage);

    std::ofstream(dir / "bad.cfg") << "steps = 2\nunknown_key = 1\n";
    EXPECT_EQ(run_cli("gen-data --config " + (dir / "bad.cfg").string() + " --out " + (dir / "d").string(), &out),
              kExitUsage);
    EXPECT_NE(out.find("line 2"), std::string::npos);

    std::ofstream(dir / "c.cfg") << serialize_config(small_config());
    const std::string cfg = " --config " + (dir / "c.cfg").string();
    ASSERT_EQ(run_cli("gen-data" + cfg + " --seed 7 --out " + (dir / "d").string(), &out), kExitOk) << out;
    ASSERT_EQ(run_cli("train" + cfg + " --data " + (dir / "d").string() + " --out " + (dir / "ck").string(), &out),
              kExitOk)
        << out;
    EXPECT_EQ(run_cli("eval --checkpoint " + (dir / "ck").string() + " --data " + (dir / "d").string(), &out), kExitOk);
    EXPECT_EQ(run_cli("audit --trials 3 --checkpoint " + (dir / "ck").string(), &out), kExitOk) << out;
    EXPECT_EQ(run_cli("audit --trials 3 --corrupt-cg --checkpoint " + (dir / "ck").string(), &out), kExitAudit) << out;

    std::ofstream(dir / "explode.cfg") << serialize_config(small_config()) << "";
    {
        ExperimentConfig boom = small_config();
        boom.lr = 1e300;
        std::ofstream(dir / "explode.cfg") << serialize_config(boom);
    }
    EXPECT_EQ(run_cli("train --config " + (dir / "explode.cfg").string() + " --data " + (dir / "d").string() +
                          " --out " + (dir / "ck_bad").string(),
                      &out),
              kExitNumeric)
        << out;
}
#endif
