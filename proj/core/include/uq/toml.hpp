#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace uq::toml {

// Minimal TOML subset: [section] headers, key = value pairs, # comments.
// Values: quoted strings, booleans, numbers, flat arrays of numbers or
// strings. Covers the run-configuration schema; nothing more.

using Value =
    std::variant<std::string, bool, double, std::vector<double>,
                 std::vector<std::string>>;

class Table {
 public:
  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  bool get_bool(const std::string& section, const std::string& key) const;
  double get_number(const std::string& section, const std::string& key) const;
  long long get_integer(const std::string& section, const std::string& key) const;
  std::vector<double> get_numbers(const std::string& section,
                                  const std::string& key) const;

  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key,
                   bool fallback) const;
  double get_number_or(const std::string& section, const std::string& key,
                       double fallback) const;
  long long get_integer_or(const std::string& section, const std::string& key,
                           long long fallback) const;

  void set(const std::string& section, const std::string& key, Value v);

  const std::map<std::string, std::map<std::string, Value>>& sections() const {
    return sections_;
  }

 private:
  const Value* find(const std::string& section, const std::string& key) const;
  std::map<std::string, std::map<std::string, Value>> sections_;
};

Table parse(const std::string& text);
Table parse_file(const std::string& path);

}  // namespace uq::toml
