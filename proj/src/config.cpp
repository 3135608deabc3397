// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#include "hiero/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "hiero/common.hpp"

namespace hiero {

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig config;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected `key = value`");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    config.values_[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

bool KeyValueConfig::contains(std::string_view key) const {
  return values_.find(key) != values_.end();
}

std::string KeyValueConfig::get_string(std::string_view key, std::string fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(std::string_view key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto value = parse_number(it->second);
  if (!value) throw ConfigError("`" + std::string(key) + "` is not a number: " + it->second);
  return *value;
}

long KeyValueConfig::get_int(std::string_view key, long fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto value = parse_number(it->second);
  if (!value || *value != static_cast<double>(static_cast<long>(*value))) {
    throw ConfigError("`" + std::string(key) + "` is not an integer: " + it->second);
  }
  return static_cast<long>(*value);
}

bool KeyValueConfig::get_bool(std::string_view key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("`" + std::string(key) + "` is not a boolean: " + v);
}

std::vector<std::string> KeyValueConfig::get_list(std::string_view key,
                                                  std::vector<std::string> fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<std::string> items;
  for (auto item : split(it->second, ',')) {
    item = trim(item);
    if (!item.empty()) items.emplace_back(item);
  }
  return items;
}

std::vector<double> KeyValueConfig::get_doubles(std::string_view key,
                                                std::vector<double> fallback) const {
  if (!contains(key)) return fallback;
  std::vector<double> numbers;
  for (const auto& item : get_list(key, {})) {
    const auto value = parse_number(item);
    if (!value) throw ConfigError("`" + std::string(key) + "` has a non-numeric entry: " + item);
    numbers.push_back(*value);
  }
  return numbers;
}

void KeyValueConfig::require_known(const std::vector<std::string_view>& known) const {
  for (const auto& [key, value] : values_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config key `" + key + "`");
    }
  }
}

std::string KeyValueConfig::canonical() const {
  std::string out;
  for (const auto& [key, value] : values_) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

}  // namespace hiero
