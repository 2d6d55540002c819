#pragma once

// Strict TOML table access shared by the config and sweep-spec readers.

#include <set>
#include <string>
#include <vector>

#include "hwec/errors.hpp"

#define TOML_HEADER_ONLY 1
#include <toml.hpp>

namespace hwec::detail {

// A table view that remembers which keys were read, so leftovers can be
// reported as unknown.
class Section {
 public:
  Section(const toml::table* t, std::string path) : t_(t), path_(std::move(path)) {}

  [[nodiscard]] bool present() const { return t_ != nullptr; }
  [[nodiscard]] const std::string& path() const { return path_; }

  [[nodiscard]] bool has(const std::string& key) {
    seen_.insert(key);
    return t_ && t_->contains(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return require_number(key);
  }
  double number(const std::string& key) {
    if (!has(key)) missing(key);
    return require_number(key);
  }
  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    return require_integer(key);
  }
  int integer(const std::string& key) {
    if (!has(key)) missing(key);
    return require_integer(key);
  }
  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    return require_string(key);
  }
  std::string string(const std::string& key) {
    if (!has(key)) missing(key);
    return require_string(key);
  }
  std::vector<double> numbers(const std::string& key) {
    if (!has(key)) missing(key);
    const toml::array* a = t_->get(key)->as_array();
    if (!a) bad(key, "an array of numbers");
    std::vector<double> out;
    for (const auto& v : *a) out.push_back(as_number(v, key));
    return out;
  }
  std::vector<std::vector<double>> matrix(const std::string& key) {
    if (!has(key)) missing(key);
    const toml::array* a = t_->get(key)->as_array();
    if (!a) bad(key, "an array of arrays");
    std::vector<std::vector<double>> out;
    for (const auto& row : *a) {
      const toml::array* r = row.as_array();
      if (!r) bad(key, "an array of arrays");
      std::vector<double> vals;
      for (const auto& v : *r) vals.push_back(as_number(v, key));
      out.push_back(std::move(vals));
    }
    return out;
  }
  Section sub(const std::string& key) {
    if (!has(key)) return {nullptr, join(key)};
    const toml::table* t = t_->get(key)->as_table();
    if (!t) bad(key, "a table");
    return {t, join(key)};
  }
  std::vector<Section> array_of_tables(const std::string& key) {
    std::vector<Section> out;
    if (!has(key)) return out;
    const toml::array* a = t_->get(key)->as_array();
    if (!a) bad(key, "an array of tables");
    for (std::size_t i = 0; i < a->size(); ++i) {
      const toml::table* t = (*a)[i].as_table();
      if (!t) bad(key, "an array of tables");
      out.emplace_back(t, join(key) + "[" + std::to_string(i) + "]");
    }
    return out;
  }

  /// Throws on keys that were never asked for.
  void finish() const {
    if (!t_) return;
    for (const auto& [k, v] : *t_) {
      const std::string key(k.str());
      if (!seen_.count(key)) throw ValidationError("config: unknown key '" + join(key) + "'");
    }
  }

 private:
  [[nodiscard]] std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  [[noreturn]] void missing(const std::string& key) const {
    throw ValidationError("config: missing required key '" + join(key) + "'");
  }
  [[noreturn]] void bad(const std::string& key, const char* what) const {
    throw ValidationError("config: '" + join(key) + "' must be " + what);
  }
  double as_number(const toml::node& n, const std::string& key) const {
    if (auto v = n.value_exact<double>()) return *v;
    if (auto v = n.value_exact<int64_t>()) return static_cast<double>(*v);
    bad(key, "a number");
  }
  double require_number(const std::string& key) const { return as_number(*t_->get(key), key); }
  int require_integer(const std::string& key) const {
    auto v = t_->get(key)->value_exact<int64_t>();
    if (!v) bad(key, "an integer");
    return static_cast<int>(*v);
  }
  std::string require_string(const std::string& key) const {
    auto v = t_->get(key)->value_exact<std::string>();
    if (!v) bad(key, "a string");
    return *v;
  }

  const toml::table* t_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace hwec::detail
