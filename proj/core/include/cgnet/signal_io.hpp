#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "cgnet/sht.hpp"

namespace cgnet {

// SPH1 record layout, all little-endian:
//   "SPH1" | int32 b | int32 n_channels | per channel, 2b x 2b samples in
//   row-major order as (float64 real, float64 imag) pairs.
// A signal file is one or more records back to back.

void write_signal(std::ostream& out, const SphericalSignal& signal);

/// Reads one record. Throws IoError on bad magic or truncated data.
SphericalSignal read_signal(std::istream& in);

void save_signals(const std::filesystem::path& path, const std::vector<SphericalSignal>& signals);
std::vector<SphericalSignal> load_signals(const std::filesystem::path& path);

void save_labels(const std::filesystem::path& path, const std::vector<int>& labels);
std::vector<int> load_labels(const std::filesystem::path& path);

}  // namespace cgnet
