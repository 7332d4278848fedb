#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace liftnet {

/// Thrown for malformed config files or values; the CLI maps it to exit 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Flat key = value experiment configuration. Insertion order is preserved
/// so a resolved config serializes (and hashes) reproducibly.
class Config {
public:
    Config() = default;

    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    int64_t get_int(const std::string& key, int64_t fallback) const;
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    /// Canonical "key = value" text, one entry per line, insertion order.
    std::string serialize() const;
    /// FNV-1a 64-bit hash of serialize().
    uint64_t hash() const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::optional<std::string> lookup(const std::string& key) const;
    std::vector<std::pair<std::string, std::string>> entries_;
};

uint64_t fnv1a64(const std::string& text);

}  // namespace liftnet
