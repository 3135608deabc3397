// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#include "hiero/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>

#include "hiero/kernels.hpp"

namespace hiero {
namespace {

std::string_view to_string(MetricErrorKind kind) {
  switch (kind) {
    case MetricErrorKind::EmptyInput:
      return "EmptyInput";
    case MetricErrorKind::LengthMismatch:
      return "LengthMismatch";
    case MetricErrorKind::Undefined:
      return "Undefined";
    case MetricErrorKind::DegenerateRange:
      return "DegenerateRange";
  }
  return "Unknown";
}

std::optional<double> range_of(const std::vector<double>& values) {
  if (values.size() < 2) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double span = *hi - *lo;
  if (!(span > 0.0)) return std::nullopt;
  return span;
}

/// Mean R-l2 term with the range taken per action category over the ground
/// truth, falling back to the range over all included instances when a
/// category has fewer than two samples or no spread.
std::optional<double> relative_l2_by_category(const std::vector<const ActionInstance*>& gts,
                                              const std::vector<const kernels::InstanceStats*>& stats,
                                              bool difficulty) {
  if (gts.empty()) return std::nullopt;
  const auto value = [&](const ActionInstance& inst) { return difficulty ? inst.difficulty : inst.final_score; };
  std::map<std::string, std::vector<double>> by_category;
  std::vector<double> all;
  for (const auto* inst : gts) {
    by_category[inst->action_label].push_back(value(*inst));
    all.push_back(value(*inst));
  }
  const auto global = range_of(all);
  double sum = 0.0;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    auto range = range_of(by_category[gts[i]->action_label]);
    if (!range) range = global;
    if (!range) return std::nullopt;
    if (!stats[i]->parsed) {
      sum += 1.0;
      continue;
    }
    const double pred = difficulty ? stats[i]->pred_difficulty : stats[i]->pred_score;
    sum += std::abs(value(*gts[i]) - pred) / *range;
  }
  return sum / static_cast<double>(gts.size());
}

std::optional<double> spearman_or_null(const std::vector<const ActionInstance*>& gts,
                                       const std::vector<const kernels::InstanceStats*>& stats, bool difficulty) {
  std::vector<double> truth, pred;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    truth.push_back(difficulty ? gts[i]->difficulty : gts[i]->final_score);
    if (!stats[i]->parsed) {
      pred.push_back(-std::numeric_limits<double>::infinity());
    } else {
      pred.push_back(difficulty ? stats[i]->pred_difficulty : stats[i]->pred_score);
    }
  }
  try {
    return spearman(truth, pred);
  } catch (const MetricError&) {
    return std::nullopt;
  }
}

std::string cell(const std::optional<double>& value) {
  if (!value) return "-";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4f", *value);
  return buffer;
}

std::string pad(std::string text, std::size_t width) {
  if (text.size() < width) text.append(width - text.size(), ' ');
  return text;
}

}  // namespace

MetricError::MetricError(MetricErrorKind kind, const std::string& detail)
    : std::invalid_argument(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

double action_accuracy(std::span<const LabelPair> pairs) {
  if (pairs.empty()) throw MetricError(MetricErrorKind::EmptyInput, "no label pairs");
  std::size_t correct = 0;
  for (const auto& pair : pairs) {
    if (pair.pred && reward_classification(pair.gt, *pair.pred) == 1) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

double sed(std::span<const std::string> gt_seq, std::span<const std::string> pred_seq) {
  const std::size_t longest = std::max(gt_seq.size(), pred_seq.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(gt_seq, pred_seq)) / static_cast<double>(longest);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw MetricError(MetricErrorKind::LengthMismatch, "vectors differ in length");
  if (x.size() < 2) throw MetricError(MetricErrorKind::Undefined, "need at least two samples");
  const double n = static_cast<double>(x.size());
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw MetricError(MetricErrorKind::Undefined, "constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw MetricError(MetricErrorKind::LengthMismatch, "vectors differ in length");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double relative_l2(std::span<const double> preds, std::span<const double> gts, ScoreRange range) {
  if (preds.size() != gts.size()) throw MetricError(MetricErrorKind::LengthMismatch, "vectors differ in length");
  if (preds.empty()) throw MetricError(MetricErrorKind::EmptyInput, "no scores");
  if (!(range.max > range.min)) throw MetricError(MetricErrorKind::DegenerateRange, "y_max must exceed y_min");
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) sum += std::abs(gts[i] - preds[i]) / range.span();
  return sum / static_cast<double>(preds.size());
}

double token_overlap_similarity(std::string_view a, std::string_view b) {
  const auto tokens = [](std::string_view text) {
    std::set<std::string> out;
    std::string current;
    for (char c : text) {
      if (std::isalnum(static_cast<unsigned char>(c))) {
        current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      } else if (!current.empty()) {
        out.insert(std::move(current));
        current.clear();
      }
    }
    if (!current.empty()) out.insert(std::move(current));
    return out;
  };
  const auto ta = tokens(a);
  const auto tb = tokens(b);
  if (ta.empty() && tb.empty()) return 1.0;
  std::size_t shared = 0;
  for (const auto& t : ta) shared += tb.count(t);
  return static_cast<double>(shared) / static_cast<double>(ta.size() + tb.size() - shared);
}

MetricsReport evaluate(std::span<const ActionInstance> gts, const std::map<std::string, std::string>& predictions,
                       const EvaluateOptions& options) {
  MetricsReport report;
  report.n_total = gts.size();
  if (gts.empty()) return report;

  // Canonical order so the floating-point reductions do not depend on the
  // order instances were supplied in.
  std::vector<std::size_t> order(gts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gts[a].id < gts[b].id; });
  std::vector<ActionInstance> sorted;
  std::vector<const std::string*> texts;
  sorted.reserve(gts.size());
  for (auto i : order) {
    sorted.push_back(gts[i]);
    const auto it = predictions.find(gts[i].id);
    texts.push_back(it == predictions.end() ? nullptr : &it->second);
  }

  const auto stats = options.parallel
                         ? kernels::instance_stats_parallel(sorted, texts, options.schema, options.content_similarity)
                         : kernels::instance_stats_serial(sorted, texts, options.schema, options.content_similarity);

  std::size_t correct = 0;
  double sed_sum = 0.0;
  double similarity_sum = 0.0;
  std::size_t similarity_count = 0;
  std::vector<const ActionInstance*> all, diving;
  std::vector<const kernels::InstanceStats*> all_stats, diving_stats;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& s = stats[i];
    if (!s.parsed) ++report.n_parse_failed;
    if (s.label_match) ++correct;
    sed_sum += s.sed;
    if (s.has_similarity) {
      similarity_sum += s.similarity;
      ++similarity_count;
    }
    all.push_back(&sorted[i]);
    all_stats.push_back(&s);
    if (sorted[i].sport == Sport::Diving) {
      diving.push_back(&sorted[i]);
      diving_stats.push_back(&s);
    }
  }
  const double n = static_cast<double>(sorted.size());
  report.action_accuracy = static_cast<double>(correct) / n;
  report.sed_mean = sed_sum / n;
  report.spearman_score = spearman_or_null(all, all_stats, false);
  report.rl2_score = relative_l2_by_category(all, all_stats, false);
  report.n_difficulty = diving.size();
  if (!diving.empty()) {
    report.spearman_difficulty = spearman_or_null(diving, diving_stats, true);
    report.rl2_difficulty = relative_l2_by_category(diving, diving_stats, true);
  }
  if (similarity_count > 0) report.content_similarity = similarity_sum / static_cast<double>(similarity_count);
  return report;
}

nlohmann::ordered_json to_json(const MetricsReport& r) {
  const auto opt = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr); };
  nlohmann::ordered_json j;
  j["action_assessment"] = {{"action_accuracy", r.action_accuracy}, {"sed", r.sed_mean}};
  j["difficulty_assessment"] = {{"spearman", opt(r.spearman_difficulty)}, {"rl2", opt(r.rl2_difficulty)}};
  j["score_assessment"] = {{"spearman", opt(r.spearman_score)}, {"rl2", opt(r.rl2_score)}};
  j["content_similarity"] = opt(r.content_similarity);
  j["counts"] = {{"n_total", r.n_total}, {"n_parse_failed", r.n_parse_failed}, {"n_difficulty", r.n_difficulty}};
  return j;
}

std::string to_table(const MetricsReport& r) {
  constexpr std::size_t w = 10;
  std::string out;
  out += pad("Action Assessment", 2 * w) + "| " + pad("Difficulty Assessment", 2 * w) + "| " +
         pad("Score Assessment", 2 * w) + "| Counts\n";
  out += pad("Acc", w) + pad("SED", w) + "| " + pad("Spearman", w) + pad("R-l2", w) + "| " + pad("Spearman", w) +
         pad("R-l2", w) + "| " + pad("N", w) + "Failed\n";
  out += pad(cell(r.action_accuracy), w) + pad(cell(r.sed_mean), w) + "| " + pad(cell(r.spearman_difficulty), w) +
         pad(cell(r.rl2_difficulty), w) + "| " + pad(cell(r.spearman_score), w) + pad(cell(r.rl2_score), w) + "| " +
         pad(std::to_string(r.n_total), w) + std::to_string(r.n_parse_failed) + "\n";
  return out;
}

std::string to_csv(const MetricsReport& r) {
  const auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  std::string out =
      "action_accuracy,sed,spearman_difficulty,rl2_difficulty,spearman_score,rl2_score,content_similarity,"
      "n_total,n_parse_failed,n_difficulty\n";
  out += format_number(r.action_accuracy) + "," + format_number(r.sed_mean) + "," + opt(r.spearman_difficulty) +
         "," + opt(r.rl2_difficulty) + "," + opt(r.spearman_score) + "," + opt(r.rl2_score) + "," +
         opt(r.content_similarity) + "," + std::to_string(r.n_total) + "," + std::to_string(r.n_parse_failed) +
         "," + std::to_string(r.n_difficulty) + "\n";
  return out;
}

}  // namespace hiero
