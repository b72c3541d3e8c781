#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace wsabi {

/// Minimal TOML subset used by the race configs: comments, [section] and
/// [section.sub] tables, and key = value with string / integer / float / bool /
/// flat-array values. Keys are flattened to dotted paths.
class TomlTable {
public:
    using Value = std::variant<std::string, long long, double, bool,
                               std::vector<std::string>, std::vector<long long>,
                               std::vector<double>>;

    static TomlTable parse(const std::string& text);
    static TomlTable parse_file(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_double(const std::string& key) const;  // integers promote
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_string_array(const std::string& key) const;
    std::vector<long long> get_int_array(const std::string& key) const;

    std::vector<std::string> keys() const;

private:
    std::map<std::string, Value> values_;
};

}  // namespace wsabi
