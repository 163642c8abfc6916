#include "cgnet/model_io.hpp"

#include <fstream>
#include <string>

#include "binary_io.hpp"
#include "cgnet/config.hpp"
#include "cgnet/errors.hpp"
#include "cgnet/kv_text.hpp"

namespace cgnet {

namespace {

constexpr char kWeightsMagic[4] = {'C', 'G', 'W', '1'};
constexpr char kAdamMagic[4] = {'A', 'D', 'M', '1'};
constexpr const char* kFormat = "cgnet-model";
constexpr int kFormatVersion = 1;

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
}

void expect_magic(std::istream& in, const char (&magic)[4], const std::string& what) {
    char got[4];
    detail::read_exact(in, got, 4, what.c_str());
    if (std::string(got, 4) != std::string(magic, 4)) throw IoError("bad magic in " + what);
}

std::size_t norm_scale_count(const std::vector<NormState>& norms) {
    std::size_t n = 0;
    for (const auto& s : norms) n += static_cast<std::size_t>(s.type().fragment_count());
    return n;
}

}  // namespace

void save_model(const std::filesystem::path& dir, const Model& model) {
    std::filesystem::create_directories(dir);
    const auto& spec = model.spec;

    KeyValueText kv;
    kv.set("format", kFormat);
    kv.set("version", std::to_string(kFormatVersion));
    kv.set("bandlimit", std::to_string(spec.bandlimit));
    kv.set("layers", std::to_string(spec.depth()));
    kv.set("n_in", std::to_string(spec.n_in));
    for (int s = 0; s < spec.depth(); ++s) {
        kv.set("tau." + std::to_string(s + 1), join(spec.layer_types[static_cast<std::size_t>(s)].tau));
    }
    kv.set("pair_policy", to_string(spec.pair_policy));
    kv.set("normalize", model.norms.empty() ? "false" : "true");
    kv.set("head_width", std::to_string(spec.head_width()));
    kv.set("head_hidden", std::to_string(spec.head_hidden));
    kv.set("n_out", std::to_string(spec.n_out));
    kv.set("parameter_count", std::to_string(model.weights.parameter_count()));
    kv.set("norm_scale_count", std::to_string(norm_scale_count(model.norms)));
    kv.set("weights_blob", kWeightsFile);
    kv.set("blob_order",
           "per layer, per degree ascending: W_l column-major as (re, im) f64 pairs; then head hidden_w "
           "column-major, hidden_b, out_w column-major, out_b; then per layer: examples_seen u64 and scales "
           "by degree then fragment");

    {
        std::ofstream out(dir / kManifestFile);
        if (!out) throw IoError("cannot write " + (dir / kManifestFile).string());
        out << "# cgnet model manifest\n" << kv.serialize();
    }

    std::ofstream out(dir / kWeightsFile, std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir / kWeightsFile).string());
    out.write(kWeightsMagic, 4);
    const auto flat = model.weights.pack();
    detail::put_u64(out, flat.size());
    for (double v : flat) detail::put_f64(out, v);
    detail::put_u64(out, model.norms.size());
    for (const auto& norm : model.norms) {
        detail::put_u64(out, norm.examples_seen());
        for (const auto& per_ell : norm.scales()) {
            for (double s : per_ell) detail::put_f64(out, s);
        }
    }
    if (!out) throw IoError("write failed: " + (dir / kWeightsFile).string());
}

Model load_model(const std::filesystem::path& dir) {
    const KeyValueText kv = KeyValueText::load((dir / kManifestFile).string());
    if (kv.get("format") != kFormat) throw ParseError("not a cgnet model manifest", kv.line_of("format"));
    if (kv.get_int("version") != kFormatVersion) {
        throw ParseError("unsupported model format version " + kv.get("version"), kv.line_of("version"));
    }

    Model model;
    auto& spec = model.spec;
    spec.bandlimit = kv.get_int("bandlimit");
    spec.n_in = kv.get_int("n_in");
    const int depth = kv.get_int("layers");
    for (int s = 0; s < depth; ++s) {
        const std::string key = "tau." + std::to_string(s + 1);
        try {
            spec.layer_types.emplace_back(kv.get_ints(key));
        } catch (const ArgumentError& e) {
            throw ParseError(e.what(), kv.line_of(key));
        }
    }
    spec.pair_policy = parse_pair_policy(kv.get("pair_policy"));
    spec.head_hidden = kv.get_int("head_hidden");
    spec.n_out = kv.get_int("n_out");
    if (static_cast<std::size_t>(kv.get_int("head_width")) != spec.head_width()) {
        throw ParseError("head_width disagrees with the layer types", kv.line_of("head_width"));
    }
    const bool normalize = kv.get_or("normalize", "true") == "true";

    const CGNetwork net(spec);
    model.weights = NetworkWeights::zeros(net);
    if (normalize) model.norms = make_norm_states(net);

    const auto blob_path = dir / kv.get_or("weights_blob", kWeightsFile);
    std::ifstream in(blob_path, std::ios::binary);
    if (!in) throw IoError("cannot open " + blob_path.string());
    expect_magic(in, kWeightsMagic, blob_path.string());
    const std::uint64_t count = detail::get_u64(in, "parameter count");
    if (count != model.weights.parameter_count()) {
        throw IoError("weight blob holds " + std::to_string(count) + " parameters, manifest implies " +
                      std::to_string(model.weights.parameter_count()));
    }
    std::vector<double> flat(count);
    for (auto& v : flat) v = detail::get_f64(in, "weights");
    model.weights.unpack(flat);

    const std::uint64_t layers = detail::get_u64(in, "norm layer count");
    if (layers != model.norms.size()) throw IoError("normaliser layer count does not match manifest");
    for (auto& norm : model.norms) {
        norm.set_examples_seen(detail::get_u64(in, "norm counter"));
        for (auto& per_ell : norm.scales()) {
            for (double& s : per_ell) s = detail::get_f64(in, "norm scales");
        }
    }
    return model;
}

void save_adam(const std::filesystem::path& path, const AdamState& state) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(kAdamMagic, 4);
    const auto& c = state.config;
    for (double v : {c.lr, c.beta1, c.beta2, c.eps, c.weight_decay}) detail::put_f64(out, v);
    detail::put_u64(out, state.step);
    detail::put_u64(out, state.first_moment.size());
    for (double v : state.first_moment) detail::put_f64(out, v);
    for (double v : state.second_moment) detail::put_f64(out, v);
    if (!out) throw IoError("write failed: " + path.string());
}

AdamState load_adam(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    expect_magic(in, kAdamMagic, path.string());
    AdamConfig c;
    c.lr = detail::get_f64(in, "adam config");
    c.beta1 = detail::get_f64(in, "adam config");
    c.beta2 = detail::get_f64(in, "adam config");
    c.eps = detail::get_f64(in, "adam config");
    c.weight_decay = detail::get_f64(in, "adam config");
    const std::uint64_t step = detail::get_u64(in, "adam step");
    const std::uint64_t n = detail::get_u64(in, "adam size");
    AdamState state(n, c);
    state.step = step;
    for (auto& v : state.first_moment) v = detail::get_f64(in, "adam moments");
    for (auto& v : state.second_moment) v = detail::get_f64(in, "adam moments");
    return state;
}

}  // namespace cgnet
