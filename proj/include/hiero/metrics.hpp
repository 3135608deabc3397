// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hiero/annotations.hpp"
#include "hiero/rewards.hpp"
#include "hiero/sar_format.hpp"

namespace hiero {

enum class MetricErrorKind { EmptyInput, LengthMismatch, Undefined, DegenerateRange };

class MetricError : public std::invalid_argument {
 public:
  MetricError(MetricErrorKind kind, const std::string& detail);
  MetricErrorKind kind() const { return kind_; }

 private:
  MetricErrorKind kind_;
};

struct LabelPair {
  std::string gt;
  std::optional<std::string> pred;  // nullopt when the prediction failed to parse
};

double action_accuracy(std::span<const LabelPair> pairs);

/// 1 - EditDistance(G, P) / max(|G|, |P|); two empty sequences score 1.
double sed(std::span<const std::string> gt_seq, std::span<const std::string> pred_seq);

/// Ranks starting at 1; tied values share the average of their ranks.
std::vector<double> average_ranks(std::span<const double> values);

double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

double relative_l2(std::span<const double> preds, std::span<const double> gts, ScoreRange range);

/// Normalized token-overlap (Jaccard over lower-cased word sets). Text
/// similarity placeholder for an external judge; not part of the protocol.
double token_overlap_similarity(std::string_view a, std::string_view b);

using SimilarityHook = std::function<double(std::string_view prediction, std::string_view reference)>;

struct EvaluateOptions {
  ExtractionSchema schema;
  /// Scored against each instance's reference_answer when both are present.
  SimilarityHook content_similarity;
  bool parallel = true;
};

struct MetricsReport {
  double action_accuracy = 0.0;
  double sed_mean = 0.0;
  std::optional<double> spearman_score;
  std::optional<double> spearman_difficulty;
  std::optional<double> rl2_score;
  std::optional<double> rl2_difficulty;
  std::optional<double> content_similarity;
  std::size_t n_total = 0;
  std::size_t n_parse_failed = 0;
  std::size_t n_difficulty = 0;

  bool operator==(const MetricsReport&) const = default;
};

/// Corpus-level evaluation. Instances without a prediction, or whose
/// prediction fails to parse or extract, count as failures: label mismatch,
/// SED 0, a full-range R-l2 term, and the lowest rank for Spearman.
/// Difficulty metrics cover diving instances only.
MetricsReport evaluate(std::span<const ActionInstance> gts, const std::map<std::string, std::string>& predictions,
                       const EvaluateOptions& options = {});

nlohmann::ordered_json to_json(const MetricsReport& report);
std::string to_table(const MetricsReport& report);
std::string to_csv(const MetricsReport& report);

}  // namespace hiero
