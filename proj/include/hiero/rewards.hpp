// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

// Hierarchical reward suite:
//
//   total = l_fmt * r_form + l_temp * r_temp + l_action * r_action + l_score * r_score
//   r_action = alpha * r_cls + (1 - alpha) * r_sub
//   r_temp   = mean IoU over an optimal one-to-one segment matching
//   r_sub    = 1 - edit_distance / max(|pred|, |gt|)
//   r_score  = exp(-ls * (q - q*)^2 - ld * (d - d*)^2)

#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hiero/annotations.hpp"
#include "hiero/config.hpp"
#include "hiero/sar_format.hpp"

namespace hiero {

struct RewardWeights {
  double lambda_fmt = 0.1;
  double lambda_temp = 0.3;
  double lambda_action = 0.3;
  double lambda_score = 0.3;
  double alpha = 0.5;
  double lambda_score_inner = 1.0;
  double lambda_diff_inner = 1.0;

  void validate() const;
  double max_total() const { return lambda_fmt + lambda_temp + lambda_action + lambda_score; }
};

struct ScoreRange {
  double min = 0.0;
  double max = 1.0;

  double span() const { return max - min; }
};

/// Score ranges used to normalize quality and difficulty before r_score.
struct SportScale {
  ScoreRange quality;
  ScoreRange difficulty;
};

std::map<Sport, SportScale> default_sport_scales();

enum class ParsePolicy {
  /// Score whatever fields can be extracted; r_form is 0 on bad structure.
  Lenient,
  /// Any parse or extraction failure zeroes every content component.
  Strict,
};

struct RewardConfig {
  RewardWeights weights;
  /// Divide matched IoU by max(|gt|, |pred|) instead of the matching size.
  bool strict_temporal = false;
  /// Only pairs with equal labels contribute IoU.
  bool label_constrained_matching = false;
  ParsePolicy parse_policy = ParsePolicy::Lenient;
  /// Normalize quality and difficulty by the sport's range; raw values otherwise.
  bool normalize_scores = true;
  std::map<Sport, SportScale> scales = default_sport_scales();
  ExtractionSchema schema;

  /// Keys: lambda_fmt, lambda_temp, lambda_action, lambda_score, alpha,
  /// lambda_score_inner, lambda_diff_inner, strict_temporal,
  /// label_constrained_matching, parse_policy (lenient|strict),
  /// normalize_scores, and `<sport>.quality_range` / `<sport>.difficulty_range`
  /// given as `min, max`.
  static RewardConfig from_config(const KeyValueConfig& config);
  void validate() const;
};

struct Matching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (gt_index, pred_index), gt-ascending
};

struct RewardBreakdown {
  double r_form = 0.0;
  double r_temp = 0.0;
  double r_cls = 0.0;
  double r_sub = 0.0;
  double r_action = 0.0;
  double r_score = 0.0;
  double total = 0.0;

  bool operator==(const RewardBreakdown&) const = default;
};

/// Fills r_action and total from the other components.
RewardBreakdown compose(RewardBreakdown components, const RewardWeights& weights);

int reward_format(std::string_view text);

double interval_iou(const TimeInterval& a, const TimeInterval& b);

/// Maximum-weight one-to-one assignment of size min(rows, cols) over a
/// row-major non-negative weight matrix. Among optimal assignments the
/// lexicographically smallest pair list is returned.
Matching max_weight_matching(std::span<const double> weights, std::size_t rows, std::size_t cols);

Matching match_segments(std::span<const TimeInterval> gt, std::span<const TimeInterval> pred);

enum class TemporalMode { MatchedMean, Strict };

double reward_temporal(std::span<const TimeInterval> gt, std::span<const TimeInterval> pred,
                       TemporalMode mode = TemporalMode::MatchedMean);

/// Variant used by reward_total; label-constrained matching gives pairs with
/// different labels zero weight.
double reward_temporal(std::span<const SubActionAnnotation> gt, std::span<const PredictedSubAction> pred,
                       TemporalMode mode, bool label_constrained);

std::size_t edit_distance(std::span<const std::string> a, std::span<const std::string> b);

double reward_subaction(std::span<const std::string> gt_seq, std::span<const std::string> pred_seq);

int reward_classification(std::string_view gt_label, std::string_view pred_label);

double reward_action(const ActionInstance& gt, const PredictedAssessment& pred, double alpha);

double reward_assessment(double pred_q, double pred_d, double gt_q, double gt_d, double lambda_score_inner,
                         double lambda_diff_inner);

RewardBreakdown reward_total(const ActionInstance& gt, std::string_view prediction_text,
                             const RewardConfig& config = {});
RewardBreakdown reward_total(const ActionInstance& gt, std::string_view prediction_text,
                             const RewardWeights& weights);

}  // namespace hiero
