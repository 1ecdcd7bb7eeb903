#ifndef UMSLI_CONFIG_HPP
#define UMSLI_CONFIG_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "umsli/core.hpp"

namespace umsli {

/// Flat "key = value" text file. '#' starts a comment; blank lines ignored.
/// Consumers mark the keys they understand and then call
/// throw_on_unconsumed() so typos fail fast instead of silently using
/// defaults.
class KeyValueFile {
public:
    KeyValueFile() = default;

    static KeyValueFile parse_file(const std::filesystem::path& path);
    static KeyValueFile parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    /// Keys starting with prefix, in file order.
    std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

    void set(const std::string& key, const std::string& value);

    void throw_on_unconsumed() const;

private:
    const std::string& lookup(const std::string& key) const;

    std::string origin_ = "<empty>";
    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;
    mutable std::set<std::string> consumed_;
};

}  // namespace umsli

#endif
