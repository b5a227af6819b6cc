// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace genop {

// `key = value` lines; `#` comments and blank lines are ignored. Later keys
// override earlier ones. Throws MALFORMED_FRAME with the line number.
class KeyValues {
 public:
  static KeyValues parse(std::string_view text);
  static KeyValues load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string>& entries() const { return values_; }

  std::string get(const std::string& key, const std::string& fallback) const;
  // Throw MALFORMED_FRAME naming the key when the value does not parse.
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;  // comma separated
  std::vector<std::uint64_t> get_uints(const std::string& key) const;

  // For every known key K, an environment variable PREFIX + K upper-cased
  // with '.' mapped to '_' replaces the value.
  void apply_env(const std::string& prefix, const std::vector<std::string>& keys);

 private:
  std::map<std::string, std::string> values_;
};

std::string env_name(const std::string& prefix, const std::string& key);

}  // namespace genop
