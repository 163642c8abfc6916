#include "cgnet/kv_text.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "cgnet/errors.hpp"

namespace cgnet {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T>
T convert(const std::string& text, std::string_view key, int line, const char* kind) {
    T value{};
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError("value of '" + std::string(key) + "' is not " + kind + ": '" + text + "'", line);
    }
    return value;
}

double convert_double(const std::string& text, std::string_view key, int line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw ParseError("value of '" + std::string(key) + "' is not a number: '" + text + "'", line);
    }
    return v;
}

}  // namespace

KeyValueText KeyValueText::parse(std::string_view text) {
    KeyValueText kv;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", lineno);
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", lineno);
        if (key.find_first_of(" \t") != std::string_view::npos) {
            throw ParseError("key '" + std::string(key) + "' contains whitespace", lineno);
        }
        if (const Entry* prev = kv.find(key)) {
            throw ParseError("duplicate key '" + std::string(key) + "' (first set on line " +
                                 std::to_string(prev->line) + ")",
                             lineno);
        }
        kv.entries_.push_back({std::string(key), std::string(value), lineno});
    }
    return kv;
}

KeyValueText KeyValueText::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

const KeyValueText::Entry* KeyValueText::find(std::string_view key) const {
    const auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.key == key; });
    return it == entries_.end() ? nullptr : &*it;
}

bool KeyValueText::contains(std::string_view key) const { return find(key) != nullptr; }

int KeyValueText::line_of(std::string_view key) const {
    const Entry* e = find(key);
    return e ? e->line : 0;
}

const std::string& KeyValueText::get(std::string_view key) const {
    const Entry* e = find(key);
    if (!e) throw ParseError("missing required key '" + std::string(key) + "'");
    return e->value;
}

std::string KeyValueText::get_or(std::string_view key, std::string fallback) const {
    const Entry* e = find(key);
    return e ? e->value : std::move(fallback);
}

int KeyValueText::get_int(std::string_view key) const { return convert<int>(get(key), key, line_of(key), "an integer"); }

int KeyValueText::get_int_or(std::string_view key, int fallback) const {
    return contains(key) ? get_int(key) : fallback;
}

double KeyValueText::get_double(std::string_view key) const { return convert_double(get(key), key, line_of(key)); }

double KeyValueText::get_double_or(std::string_view key, double fallback) const {
    return contains(key) ? get_double(key) : fallback;
}

std::uint64_t KeyValueText::get_u64(std::string_view key) const {
    return convert<std::uint64_t>(get(key), key, line_of(key), "an unsigned integer");
}

std::uint64_t KeyValueText::get_u64_or(std::string_view key, std::uint64_t fallback) const {
    return contains(key) ? get_u64(key) : fallback;
}

std::vector<int> KeyValueText::get_ints(std::string_view key) const {
    std::istringstream in(get(key));
    std::vector<int> out;
    std::string tok;
    while (in >> tok) out.push_back(convert<int>(tok, key, line_of(key), "a list of integers"));
    return out;
}

void KeyValueText::set(std::string key, std::string value) {
    for (auto& e : entries_) {
        if (e.key == key) {
            e.value = std::move(value);
            return;
        }
    }
    entries_.push_back({std::move(key), std::move(value), 0});
}

std::vector<std::string> KeyValueText::keys() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) out.push_back(e.key);
    return out;
}

std::string KeyValueText::serialize() const {
    std::string out;
    for (const auto& e : entries_) out += e.key + " = " + e.value + "\n";
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace cgnet
