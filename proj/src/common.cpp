// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#include "hiero/common.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

namespace hiero {

std::string_view to_string(Sport sport) {
  switch (sport) {
    case Sport::Diving:
      return "diving";
    case Sport::FigureSkating:
      return "figure_skating";
    case Sport::ArtisticSwimming:
      return "artistic_swimming";
  }
  return "unknown";
}

std::optional<Sport> sport_from_string(std::string_view name) {
  if (name == "diving") return Sport::Diving;
  if (name == "figure_skating") return Sport::FigureSkating;
  if (name == "artistic_swimming") return Sport::ArtisticSwimming;
  return std::nullopt;
}

bool TimeInterval::well_formed() const {
  return std::isfinite(start) && std::isfinite(end) && start >= 0.0 && start < end;
}

std::string_view trim(std::string_view text) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = text.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(kSpace);
  return text.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view text, char separator) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    const auto pos = text.find(separator, begin);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(begin));
      break;
    }
    parts.push_back(text.substr(begin, pos - begin));
    begin = pos + 1;
  }
  return parts;
}

std::string join(const std::vector<std::string>& parts, std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += separator;
    out += parts[i];
  }
  return out;
}

bool starts_with(std::string_view text, std::string_view prefix) {
  return text.substr(0, prefix.size()) == prefix;
}

std::string format_number(double value, char decimal_separator) {
  std::array<char, 64> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  std::string text(buffer.data(), result.ptr);
  if (decimal_separator != '.') {
    for (char& c : text) {
      if (c == '.') c = decimal_separator;
    }
  }
  return text;
}

std::optional<double> parse_number(std::string_view text, char decimal_separator) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  std::string normalized(text);
  if (decimal_separator != '.') {
    for (char& c : normalized) {
      if (c == '.') return std::nullopt;
      if (c == decimal_separator) c = '.';
    }
  }
  double value = 0.0;
  const char* first = normalized.data();
  const char* last = first + normalized.size();
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc{} || result.ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  std::array<char, 17> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + 16, value, 16);
  std::string text(buffer.data(), result.ptr);
  return std::string(16 - text.size(), '0') + text;
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

std::size_t Rng::index(std::size_t n) {
  const std::uint64_t bound = n;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return static_cast<std::size_t>(draw % bound);
}

long Rng::integer(long lo, long hi) {
  return lo + static_cast<long>(index(static_cast<std::size_t>(hi - lo + 1)));
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace hiero
