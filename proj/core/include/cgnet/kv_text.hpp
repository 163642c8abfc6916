#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cgnet {

/// Flat `key = value` text used for experiment configs and model manifests.
/// `#` starts a comment; blank lines are ignored; keys must be unique.
class KeyValueText {
public:
    static KeyValueText parse(std::string_view text);
    static KeyValueText load(const std::string& path);

    bool contains(std::string_view key) const;
    /// Line number of a key in the parsed source, 0 if it was set programmatically.
    int line_of(std::string_view key) const;

    const std::string& get(std::string_view key) const;
    std::string get_or(std::string_view key, std::string fallback) const;
    int get_int(std::string_view key) const;
    int get_int_or(std::string_view key, int fallback) const;
    double get_double(std::string_view key) const;
    double get_double_or(std::string_view key, double fallback) const;
    std::uint64_t get_u64(std::string_view key) const;
    std::uint64_t get_u64_or(std::string_view key, std::uint64_t fallback) const;
    std::vector<int> get_ints(std::string_view key) const;

    void set(std::string key, std::string value);
    std::vector<std::string> keys() const;

    std::string serialize() const;

private:
    struct Entry {
        std::string key;
        std::string value;
        int line = 0;
    };
    const Entry* find(std::string_view key) const;

    std::vector<Entry> entries_;
};

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace cgnet
