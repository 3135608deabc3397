// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hiero {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` configuration. Blank lines and lines starting with `#`
/// are ignored; later keys override earlier ones.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool contains(std::string_view key) const;
  void set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }

  std::string get_string(std::string_view key, std::string fallback) const;
  double get_double(std::string_view key, double fallback) const;
  long get_int(std::string_view key, long fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  std::vector<std::string> get_list(std::string_view key, std::vector<std::string> fallback) const;
  std::vector<double> get_doubles(std::string_view key, std::vector<double> fallback) const;

  /// Rejects keys not in `known`, so typos in config files surface early.
  void require_known(const std::vector<std::string_view>& known) const;

  const std::map<std::string, std::string, std::less<>>& values() const { return values_; }

  /// Sorted `key=value` lines; the basis of the config hash.
  std::string canonical() const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace hiero
