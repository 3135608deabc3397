// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace hiero {

enum class Sport { Diving, FigureSkating, ArtisticSwimming };

std::string_view to_string(Sport sport);
std::optional<Sport> sport_from_string(std::string_view name);

/// Half-open time interval [start, end) in seconds.
struct TimeInterval {
  double start = 0.0;
  double end = 0.0;

  double length() const { return end - start; }
  bool well_formed() const;

  bool operator==(const TimeInterval&) const = default;
};

std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char separator);
std::string join(const std::vector<std::string>& parts, std::string_view separator);
bool starts_with(std::string_view text, std::string_view prefix);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value, char decimal_separator = '.');

/// Parses the whole of `text` as a finite decimal; nullopt otherwise.
std::optional<double> parse_number(std::string_view text, char decimal_separator = '.');

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// Seeded generator whose output sequence is identical on every platform.
///
/// std::mt19937_64 is fully specified by the standard; the distribution
/// adaptors in <random> are not, so the conversions are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform in [0, n), unbiased. n must be positive.
  std::size_t index(std::size_t n);
  /// Uniform integer in [lo, hi].
  long integer(long lo, long hi);
  bool bernoulli(double p) { return uniform() < p; }
  /// Standard normal (Box-Muller).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace hiero
