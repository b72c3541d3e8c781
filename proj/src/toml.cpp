#include "wsabi/toml.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wsabi {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// strip a trailing comment that is not inside a string literal
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
            return false;
    return true;
}

bool parse_int(const std::string& s, long long& out) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    out = std::stoll(s);
    return true;
}

bool parse_float(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

TomlTable::Value parse_scalar(const std::string& raw, int line_no) {
    const std::string s = trim(raw);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    if (s == "true") return true;
    if (s == "false") return false;
    long long i;
    if (parse_int(s, i)) return i;
    double d;
    if (parse_float(s, d)) return d;
    throw std::runtime_error("toml: bad value at line " + std::to_string(line_no) + ": " + s);
}

}  // namespace

TomlTable TomlTable::parse(const std::string& text) {
    TomlTable table;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("toml: bad section at line " + std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            if (!valid_key(section))
                throw std::runtime_error("toml: bad section name at line " +
                                         std::to_string(line_no));
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("toml: expected key = value at line " +
                                     std::to_string(line_no));
        std::string key = trim(line.substr(0, eq));
        if (key.size() >= 2 && key.front() == '"' && key.back() == '"')
            key = key.substr(1, key.size() - 2);
        if (!valid_key(key))
            throw std::runtime_error("toml: bad key at line " + std::to_string(line_no));
        const std::string full = section.empty() ? key : section + "." + key;
        if (table.values_.count(full))
            throw std::runtime_error("toml: duplicate key '" + full + "' at line " +
                                     std::to_string(line_no));

        std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            throw std::runtime_error("toml: empty value at line " + std::to_string(line_no));

        if (value.front() == '[') {
            if (value.back() != ']')
                throw std::runtime_error("toml: unterminated array at line " +
                                         std::to_string(line_no));
            std::string body = value.substr(1, value.size() - 2);
            std::vector<Value> items;
            std::string cell;
            bool in_str = false;
            for (char c : body) {
                if (c == '"') in_str = !in_str;
                if (c == ',' && !in_str) {
                    if (!trim(cell).empty()) items.push_back(parse_scalar(cell, line_no));
                    cell.clear();
                } else {
                    cell.push_back(c);
                }
            }
            if (!trim(cell).empty()) items.push_back(parse_scalar(cell, line_no));

            // homogeneous arrays only; integers promote to double in mixed numeric arrays
            bool any_str = false, any_double = false, any_bool = false;
            for (const auto& v : items) {
                any_str |= std::holds_alternative<std::string>(v);
                any_double |= std::holds_alternative<double>(v);
                any_bool |= std::holds_alternative<bool>(v);
            }
            if (any_bool || (any_str && items.size() > 0 &&
                             !std::all_of(items.begin(), items.end(), [](const Value& v) {
                                 return std::holds_alternative<std::string>(v);
                             })))
                throw std::runtime_error("toml: unsupported array at line " +
                                         std::to_string(line_no));
            if (any_str) {
                std::vector<std::string> arr;
                for (auto& v : items) arr.push_back(std::get<std::string>(v));
                table.values_[full] = std::move(arr);
            } else if (any_double) {
                std::vector<double> arr;
                for (auto& v : items)
                    arr.push_back(std::holds_alternative<double>(v)
                                      ? std::get<double>(v)
                                      : static_cast<double>(std::get<long long>(v)));
                table.values_[full] = std::move(arr);
            } else {
                std::vector<long long> arr;
                for (auto& v : items) arr.push_back(std::get<long long>(v));
                table.values_[full] = std::move(arr);
            }
        } else {
            table.values_[full] = parse_scalar(value, line_no);
        }
    }
    return table;
}

TomlTable TomlTable::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("toml: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string TomlTable::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("toml: missing key '" + key + "'");
    if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
    throw std::runtime_error("toml: key '" + key + "' is not a string");
}

std::string TomlTable::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

long long TomlTable::get_int(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("toml: missing key '" + key + "'");
    if (const auto* i = std::get_if<long long>(&it->second)) return *i;
    throw std::runtime_error("toml: key '" + key + "' is not an integer");
}

long long TomlTable::get_int(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

double TomlTable::get_double(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("toml: missing key '" + key + "'");
    if (const auto* d = std::get_if<double>(&it->second)) return *d;
    if (const auto* i = std::get_if<long long>(&it->second)) return static_cast<double>(*i);
    throw std::runtime_error("toml: key '" + key + "' is not a number");
}

double TomlTable::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

bool TomlTable::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (const auto* b = std::get_if<bool>(&it->second)) return *b;
    throw std::runtime_error("toml: key '" + key + "' is not a boolean");
}

std::vector<std::string> TomlTable::get_string_array(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("toml: missing key '" + key + "'");
    if (const auto* a = std::get_if<std::vector<std::string>>(&it->second)) return *a;
    if (const auto* s = std::get_if<std::string>(&it->second)) return {*s};
    throw std::runtime_error("toml: key '" + key + "' is not a string array");
}

std::vector<long long> TomlTable::get_int_array(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("toml: missing key '" + key + "'");
    if (const auto* a = std::get_if<std::vector<long long>>(&it->second)) return *a;
    if (const auto* i = std::get_if<long long>(&it->second)) return {*i};
    throw std::runtime_error("toml: key '" + key + "' is not an integer array");
}

std::vector<std::string> TomlTable::keys() const {
    std::vector<std::string> out;
    out.reserve(values_.size());
    for (const auto& [k, v] : values_) out.push_back(k);
    return out;
}

}  // namespace wsabi
