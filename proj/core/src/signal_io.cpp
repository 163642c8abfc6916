#include "cgnet/signal_io.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "binary_io.hpp"
#include "cgnet/errors.hpp"

namespace cgnet {

namespace {
constexpr char kMagic[4] = {'S', 'P', 'H', '1'};
constexpr std::int32_t kMaxBandwidth = 4096;
}  // namespace

void write_signal(std::ostream& out, const SphericalSignal& signal) {
    out.write(kMagic, 4);
    detail::put_i32(out, signal.bandwidth);
    detail::put_i32(out, signal.n_channels());
    const int n = signal.grid_size();
    for (const auto& grid : signal.channels) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                detail::put_f64(out, grid(j, k).real());
                detail::put_f64(out, grid(j, k).imag());
            }
        }
    }
}

SphericalSignal read_signal(std::istream& in) {
    char magic[4];
    detail::read_exact(in, magic, 4, "SPH1 magic");
    if (std::string(magic, 4) != std::string(kMagic, 4)) throw IoError("bad signal magic, expected SPH1");
    const std::int32_t b = detail::get_i32(in, "SPH1 bandwidth");
    const std::int32_t channels = detail::get_i32(in, "SPH1 channel count");
    if (b <= 0 || b > kMaxBandwidth || channels <= 0) {
        throw IoError("invalid SPH1 header: b=" + std::to_string(b) + " n_channels=" + std::to_string(channels));
    }
    SphericalSignal signal(b, channels);
    const int n = 2 * b;
    for (auto& grid : signal.channels) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                const double re = detail::get_f64(in, "SPH1 samples");
                const double im = detail::get_f64(in, "SPH1 samples");
                if (!std::isfinite(re) || !std::isfinite(im)) throw IoError("non-finite sample in SPH1 record");
                grid(j, k) = {re, im};
            }
        }
    }
    return signal;
}

void save_signals(const std::filesystem::path& path, const std::vector<SphericalSignal>& signals) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    for (const auto& s : signals) write_signal(out, s);
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<SphericalSignal> load_signals(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<SphericalSignal> out;
    while (in.peek() != std::char_traits<char>::eof()) out.push_back(read_signal(in));
    return out;
}

void save_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    for (int label : labels) out << label << '\n';
}

std::vector<int> load_labels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<int> labels;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(line, &used);
        } catch (const std::exception&) {
            throw ParseError("label is not an integer: '" + line + "'", lineno);
        }
        if (used != line.size()) throw ParseError("trailing characters after label", lineno);
        labels.push_back(v);
    }
    return labels;
}

}  // namespace cgnet
