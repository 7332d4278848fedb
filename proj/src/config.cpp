#include "liftnet/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace liftnet {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(line_no) + " has no '=': " + t);
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ConfigError("config: empty key on line " + std::to_string(line_no));
        cfg.set(key, trim(t.substr(eq + 1)));
    }
    return cfg;
}

bool Config::has(const std::string& key) const { return lookup(key).has_value(); }

void Config::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = value;
            return;
        }
    }
    entries_.emplace_back(key, value);
}

std::optional<std::string> Config::lookup(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    return std::nullopt;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return lookup(key).value_or(fallback);
}

std::string Config::require_string(const std::string& key) const {
    const auto v = lookup(key);
    if (!v) throw ConfigError("config: missing required key '" + key + "'");
    return *v;
}

int64_t Config::get_int(const std::string& key, int64_t fallback) const {
    const auto v = lookup(key);
    if (!v) return fallback;
    try {
        size_t pos = 0;
        const int64_t out = std::stoll(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument(*v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' is not an integer: " + *v);
    }
}

uint64_t Config::get_u64(const std::string& key, uint64_t fallback) const {
    const auto v = lookup(key);
    if (!v) return fallback;
    try {
        size_t pos = 0;
        const uint64_t out = std::stoull(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument(*v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' is not an unsigned integer: " + *v);
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto v = lookup(key);
    if (!v) return fallback;
    try {
        size_t pos = 0;
        const double out = std::stod(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument(*v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' is not a number: " + *v);
    }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto v = lookup(key);
    if (!v) return fallback;
    std::string s = *v;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
    throw ConfigError("config: key '" + key + "' is not a boolean: " + *v);
}

std::string Config::serialize() const {
    std::ostringstream out;
    for (const auto& [k, v] : entries_) out << k << " = " << v << "\n";
    return out.str();
}

uint64_t Config::hash() const { return fnv1a64(serialize()); }

uint64_t fnv1a64(const std::string& text) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace liftnet
