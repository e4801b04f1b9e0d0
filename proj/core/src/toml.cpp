#include "uq/toml.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "uq/errors.hpp"

namespace uq::toml {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

Value parse_scalar(const std::string& tok, int lineno) {
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
    return tok.substr(1, tok.size() - 2);
  }
  if (tok == "true") return true;
  if (tok == "false") return false;
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos == tok.size()) return v;
  } catch (...) {
  }
  throw InvalidInputError("config line " + std::to_string(lineno) +
                          ": cannot parse value '" + tok + "'");
}

Value parse_value(const std::string& raw, int lineno) {
  const std::string v = trim(raw);
  if (v.empty()) {
    throw InvalidInputError("config line " + std::to_string(lineno) +
                            ": empty value");
  }
  if (v.front() == '[') {
    if (v.back() != ']') {
      throw InvalidInputError("config line " + std::to_string(lineno) +
                              ": unterminated array");
    }
    std::vector<Value> items;
    std::string body = v.substr(1, v.size() - 2);
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      if (tok.empty()) continue;
      items.push_back(parse_scalar(tok, lineno));
    }
    if (items.empty()) return std::vector<double>{};
    if (std::holds_alternative<std::string>(items.front())) {
      std::vector<std::string> out;
      for (auto& it : items) out.push_back(std::get<std::string>(it));
      return out;
    }
    std::vector<double> out;
    for (auto& it : items) {
      if (!std::holds_alternative<double>(it)) {
        throw InvalidInputError("config line " + std::to_string(lineno) +
                                ": mixed array types");
      }
      out.push_back(std::get<double>(it));
    }
    return out;
  }
  return parse_scalar(v, lineno);
}

}  // namespace

Table parse(const std::string& text) {
  Table table;
  std::stringstream ss(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw InvalidInputError("config line " + std::to_string(lineno) +
                                ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInputError("config line " + std::to_string(lineno) +
                              ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw InvalidInputError("config line " + std::to_string(lineno) +
                              ": empty key");
    }
    table.set(section, key, parse_value(line.substr(eq + 1), lineno));
  }
  return table;
}

Table parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config: " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return parse(buf.str());
}

void Table::set(const std::string& section, const std::string& key, Value v) {
  sections_[section][key] = std::move(v);
}

const Value* Table::find(const std::string& section, const std::string& key) const {
  auto sit = sections_.find(section);
  if (sit == sections_.end()) return nullptr;
  auto kit = sit->second.find(key);
  if (kit == sit->second.end()) return nullptr;
  return &kit->second;
}

bool Table::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

namespace {
[[noreturn]] void missing(const std::string& section, const std::string& key) {
  throw InvalidInputError("config: missing key [" + section + "] " + key);
}
}  // namespace

std::string Table::get_string(const std::string& section,
                              const std::string& key) const {
  const Value* v = find(section, key);
  if (!v) missing(section, key);
  if (!std::holds_alternative<std::string>(*v)) {
    throw InvalidInputError("config: [" + section + "] " + key +
                            " must be a string");
  }
  return std::get<std::string>(*v);
}

bool Table::get_bool(const std::string& section, const std::string& key) const {
  const Value* v = find(section, key);
  if (!v) missing(section, key);
  if (!std::holds_alternative<bool>(*v)) {
    throw InvalidInputError("config: [" + section + "] " + key +
                            " must be a boolean");
  }
  return std::get<bool>(*v);
}

double Table::get_number(const std::string& section, const std::string& key) const {
  const Value* v = find(section, key);
  if (!v) missing(section, key);
  if (!std::holds_alternative<double>(*v)) {
    throw InvalidInputError("config: [" + section + "] " + key +
                            " must be a number");
  }
  return std::get<double>(*v);
}

long long Table::get_integer(const std::string& section,
                             const std::string& key) const {
  const double d = get_number(section, key);
  const long long i = static_cast<long long>(std::llround(d));
  if (std::abs(d - static_cast<double>(i)) > 1e-9) {
    throw InvalidInputError("config: [" + section + "] " + key +
                            " must be an integer");
  }
  return i;
}

std::vector<double> Table::get_numbers(const std::string& section,
                                       const std::string& key) const {
  const Value* v = find(section, key);
  if (!v) missing(section, key);
  if (std::holds_alternative<double>(*v)) return {std::get<double>(*v)};
  if (!std::holds_alternative<std::vector<double>>(*v)) {
    throw InvalidInputError("config: [" + section + "] " + key +
                            " must be a number array");
  }
  return std::get<std::vector<double>>(*v);
}

std::string Table::get_string_or(const std::string& section,
                                 const std::string& key,
                                 const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

bool Table::get_bool_or(const std::string& section, const std::string& key,
                        bool fallback) const {
  return has(section, key) ? get_bool(section, key) : fallback;
}

double Table::get_number_or(const std::string& section, const std::string& key,
                            double fallback) const {
  return has(section, key) ? get_number(section, key) : fallback;
}

long long Table::get_integer_or(const std::string& section,
                                const std::string& key,
                                long long fallback) const {
  return has(section, key) ? get_integer(section, key) : fallback;
}

}  // namespace uq::toml
