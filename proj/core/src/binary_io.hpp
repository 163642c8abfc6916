#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "cgnet/errors.hpp"

namespace cgnet::detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
    char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    out.write(bytes, 4);
}

inline void put_u64(std::ostream& out, std::uint64_t v) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    out.write(bytes, 8);
}

inline void put_i32(std::ostream& out, std::int32_t v) { put_u32(out, static_cast<std::uint32_t>(v)); }
inline void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

inline void read_exact(std::istream& in, char* dst, std::streamsize n, const char* what) {
    in.read(dst, n);
    if (in.gcount() != n) throw IoError(std::string("truncated data while reading ") + what);
}

inline std::uint32_t get_u32(std::istream& in, const char* what) {
    unsigned char bytes[4];
    read_exact(in, reinterpret_cast<char*>(bytes), 4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
    return v;
}

inline std::uint64_t get_u64(std::istream& in, const char* what) {
    unsigned char bytes[8];
    read_exact(in, reinterpret_cast<char*>(bytes), 8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return v;
}

inline std::int32_t get_i32(std::istream& in, const char* what) { return static_cast<std::int32_t>(get_u32(in, what)); }
inline double get_f64(std::istream& in, const char* what) { return std::bit_cast<double>(get_u64(in, what)); }

}  // namespace cgnet::detail
