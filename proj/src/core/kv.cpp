// SPDX-License-Identifier: Apache-2.0
#include "genop/core/kv.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "genop/core/error.hpp"

namespace genop {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(const std::string& key, std::string_view text) {
  text = trim(text);
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::kMalformedFrame,
                "key '" + key + "': cannot parse '" + std::string(text) + "'");
  }
  return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    auto item = trim(std::string_view(text).substr(start, end - start));
    if (!item.empty()) out.push_back(parse_number<T>(key, item));
    start = end + 1;
  }
  return out;
}

}  // namespace

KeyValues KeyValues::parse(std::string_view text) {
  KeyValues kv;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kMalformedFrame,
                  "line " + std::to_string(line_no) + ": expected key = value");
    }
    auto key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::kMalformedFrame, "line " + std::to_string(line_no) + ": empty key");
    }
    kv.values_[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return kv;
}

KeyValues KeyValues::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMalformedFrame, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string KeyValues::get(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValues::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number<double>(key, it->second);
}

std::int64_t KeyValues::get_int(const std::string& key, std::int64_t fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number<std::int64_t>(key, it->second);
}

std::uint64_t KeyValues::get_uint(const std::string& key, std::uint64_t fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number<std::uint64_t>(key, it->second);
}

std::vector<double> KeyValues::get_doubles(const std::string& key) const {
  auto it = values_.find(key);
  return it == values_.end() ? std::vector<double>{} : parse_list<double>(key, it->second);
}

std::vector<std::uint64_t> KeyValues::get_uints(const std::string& key) const {
  auto it = values_.find(key);
  return it == values_.end() ? std::vector<std::uint64_t>{}
                             : parse_list<std::uint64_t>(key, it->second);
}

std::string env_name(const std::string& prefix, const std::string& key) {
  std::string name = prefix;
  for (char c : key) {
    name += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return name;
}

void KeyValues::apply_env(const std::string& prefix, const std::vector<std::string>& keys) {
  for (const auto& key : keys) {
    if (const char* v = std::getenv(env_name(prefix, key).c_str())) values_[key] = v;
  }
}

}  // namespace genop
