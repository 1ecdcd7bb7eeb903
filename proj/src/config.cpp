#include "umsli/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace umsli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path.string());
}

KeyValueFile KeyValueFile::parse_string(const std::string& text, const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw FormatError(origin + ": line " + std::to_string(lineno) + " has no '='", 0);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw FormatError(origin + ": line " + std::to_string(lineno) + " has empty key", 0);
        if (kv.values_.count(key))
            throw FormatError(origin + ": duplicate key '" + key + "'", 0);
        kv.values_[key] = value;
        kv.order_.push_back(key);
    }
    return kv;
}

bool KeyValueFile::has(const std::string& key) const { return values_.count(key) != 0; }

const std::string& KeyValueFile::lookup(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end())
        throw InvalidParam(origin_ + ": missing required key '" + key + "'");
    consumed_.insert(key);
    return it->second;
}

std::string KeyValueFile::get_string(const std::string& key) const { return lookup(key); }

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    return lookup(key);
}

double KeyValueFile::get_double(const std::string& key) const {
    const std::string& v = lookup(key);
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw InvalidParam(origin_ + ": key '" + key + "' is not a number: '" + v + "'");
    }
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int KeyValueFile::get_int(const std::string& key) const {
    const std::string& v = lookup(key);
    try {
        std::size_t pos = 0;
        long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return static_cast<int>(d);
    } catch (const std::exception&) {
        throw InvalidParam(origin_ + ": key '" + key + "' is not an integer: '" + v + "'");
    }
}

int KeyValueFile::get_int(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t KeyValueFile::get_u64(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = lookup(key);
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw InvalidParam(origin_ + ": key '" + key + "' is not an unsigned integer: '" + v + "'");
    }
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = lookup(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw InvalidParam(origin_ + ": key '" + key + "' is not a boolean: '" + v + "'");
}

std::vector<std::string> KeyValueFile::keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& k : order_)
        if (k.rfind(prefix, 0) == 0) out.push_back(k);
    return out;
}

void KeyValueFile::set(const std::string& key, const std::string& value) {
    if (!values_.count(key)) order_.push_back(key);
    values_[key] = value;
}

void KeyValueFile::throw_on_unconsumed() const {
    for (const auto& k : order_)
        if (!consumed_.count(k))
            throw InvalidParam(origin_ + ": unknown key '" + k + "'");
}

}  // namespace umsli
