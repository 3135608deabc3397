// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#include "hiero/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace hiero {
namespace {

ScoreRange parse_range(const KeyValueConfig& config, const std::string& key, ScoreRange fallback) {
  if (!config.contains(key)) return fallback;
  const auto values = config.get_doubles(key, {});
  if (values.size() != 2 || !(values[1] > values[0])) {
    throw ConfigError("`" + key + "` must be `min, max` with max > min");
  }
  return {values[0], values[1]};
}

double sum_in_gt_order(const Matching& matching, std::span<const double> weights, std::size_t cols) {
  double sum = 0.0;
  for (const auto& [i, j] : matching.pairs) sum += weights[i * cols + j];
  return sum;
}

double temporal_from_weights(std::span<const double> weights, std::size_t n_gt, std::size_t n_pred,
                             TemporalMode mode) {
  if (n_gt == 0 && n_pred == 0) return 1.0;
  if (n_gt == 0 || n_pred == 0) return 0.0;
  const auto matching = max_weight_matching(weights, n_gt, n_pred);
  const double denominator = mode == TemporalMode::Strict
                                 ? static_cast<double>(std::max(n_gt, n_pred))
                                 : static_cast<double>(matching.pairs.size());
  return sum_in_gt_order(matching, weights, n_pred) / denominator;
}

}  // namespace

void RewardWeights::validate() const {
  for (double w : {lambda_fmt, lambda_temp, lambda_action, lambda_score, lambda_score_inner, lambda_diff_inner}) {
    if (!(std::isfinite(w) && w >= 0.0)) throw ConfigError("reward weights must be finite and non-negative");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in [0, 1]");
}

std::map<Sport, SportScale> default_sport_scales() {
  return {
      {Sport::Diving, {{0.0, 30.0}, {1.0, 4.5}}},
      {Sport::FigureSkating, {{0.0, 150.0}, {0.0, 10.0}}},
      {Sport::ArtisticSwimming, {{0.0, 150.0}, {0.0, 10.0}}},
  };
}

RewardConfig RewardConfig::from_config(const KeyValueConfig& config) {
  std::vector<std::string_view> known = {
      "lambda_fmt",      "lambda_temp",      "lambda_action",
      "lambda_score",    "alpha",            "lambda_score_inner",
      "lambda_diff_inner", "strict_temporal", "label_constrained_matching",
      "parse_policy",    "normalize_scores"};
  std::vector<std::string> range_keys;
  for (Sport sport : {Sport::Diving, Sport::FigureSkating, Sport::ArtisticSwimming}) {
    range_keys.push_back(std::string(to_string(sport)) + ".quality_range");
    range_keys.push_back(std::string(to_string(sport)) + ".difficulty_range");
  }
  for (const auto& key : range_keys) known.push_back(key);
  config.require_known(known);

  RewardConfig out;
  auto& w = out.weights;
  w.lambda_fmt = config.get_double("lambda_fmt", w.lambda_fmt);
  w.lambda_temp = config.get_double("lambda_temp", w.lambda_temp);
  w.lambda_action = config.get_double("lambda_action", w.lambda_action);
  w.lambda_score = config.get_double("lambda_score", w.lambda_score);
  w.alpha = config.get_double("alpha", w.alpha);
  w.lambda_score_inner = config.get_double("lambda_score_inner", w.lambda_score_inner);
  w.lambda_diff_inner = config.get_double("lambda_diff_inner", w.lambda_diff_inner);
  out.strict_temporal = config.get_bool("strict_temporal", out.strict_temporal);
  out.label_constrained_matching = config.get_bool("label_constrained_matching", out.label_constrained_matching);
  out.normalize_scores = config.get_bool("normalize_scores", out.normalize_scores);
  const auto policy = config.get_string("parse_policy", "lenient");
  if (policy == "lenient") {
    out.parse_policy = ParsePolicy::Lenient;
  } else if (policy == "strict") {
    out.parse_policy = ParsePolicy::Strict;
  } else {
    throw ConfigError("parse_policy must be `lenient` or `strict`");
  }
  for (auto& [sport, scale] : out.scales) {
    const std::string name(to_string(sport));
    scale.quality = parse_range(config, name + ".quality_range", scale.quality);
    scale.difficulty = parse_range(config, name + ".difficulty_range", scale.difficulty);
  }
  out.validate();
  return out;
}

void RewardConfig::validate() const {
  weights.validate();
  for (const auto& [sport, scale] : scales) {
    if (!(scale.quality.span() > 0.0) || !(scale.difficulty.span() > 0.0)) {
      throw ConfigError("score ranges must have max > min");
    }
  }
}

RewardBreakdown compose(RewardBreakdown c, const RewardWeights& w) {
  c.r_action = w.alpha * c.r_cls + (1.0 - w.alpha) * c.r_sub;
  c.total = w.lambda_fmt * c.r_form + w.lambda_temp * c.r_temp + w.lambda_action * c.r_action +
            w.lambda_score * c.r_score;
  return c;
}

int reward_format(std::string_view text) {
  try {
    locate_stage_blocks(text);
    return 1;
  } catch (const ParseError&) {
    return 0;
  }
}

double interval_iou(const TimeInterval& a, const TimeInterval& b) {
  const double inter = std::max(0.0, std::min(a.end, b.end) - std::max(a.start, b.start));
  if (inter <= 0.0) return 0.0;
  const double uni = a.length() + b.length() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

Matching match_segments(std::span<const TimeInterval> gt, std::span<const TimeInterval> pred) {
  std::vector<double> weights(gt.size() * pred.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    for (std::size_t j = 0; j < pred.size(); ++j) weights[i * pred.size() + j] = interval_iou(gt[i], pred[j]);
  }
  return max_weight_matching(weights, gt.size(), pred.size());
}

double reward_temporal(std::span<const TimeInterval> gt, std::span<const TimeInterval> pred, TemporalMode mode) {
  std::vector<double> weights(gt.size() * pred.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    for (std::size_t j = 0; j < pred.size(); ++j) weights[i * pred.size() + j] = interval_iou(gt[i], pred[j]);
  }
  return temporal_from_weights(weights, gt.size(), pred.size(), mode);
}

double reward_temporal(std::span<const SubActionAnnotation> gt, std::span<const PredictedSubAction> pred,
                       TemporalMode mode, bool label_constrained) {
  std::vector<double> weights(gt.size() * pred.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    for (std::size_t j = 0; j < pred.size(); ++j) {
      const bool allowed = !label_constrained || gt[i].label == pred[j].label;
      weights[i * pred.size() + j] = allowed ? interval_iou(gt[i].interval, pred[j].interval) : 0.0;
    }
  }
  return temporal_from_weights(weights, gt.size(), pred.size(), mode);
}

std::size_t edit_distance(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t substitute = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitute});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double reward_subaction(std::span<const std::string> gt_seq, std::span<const std::string> pred_seq) {
  const std::size_t longest = std::max(gt_seq.size(), pred_seq.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(pred_seq, gt_seq)) / static_cast<double>(longest);
}

int reward_classification(std::string_view gt_label, std::string_view pred_label) {
  return trim(gt_label) == trim(pred_label) ? 1 : 0;
}

double reward_action(const ActionInstance& gt, const PredictedAssessment& pred, double alpha) {
  const auto gt_labels = gt.sub_action_labels();
  const auto pred_labels = pred.sub_action_labels();
  return alpha * reward_classification(gt.action_label, pred.action_label) +
         (1.0 - alpha) * reward_subaction(gt_labels, pred_labels);
}

double reward_assessment(double pred_q, double pred_d, double gt_q, double gt_d, double lambda_score_inner,
                         double lambda_diff_inner) {
  const double dq = pred_q - gt_q;
  const double dd = pred_d - gt_d;
  return std::exp(-lambda_score_inner * dq * dq - lambda_diff_inner * dd * dd);
}

RewardBreakdown reward_total(const ActionInstance& gt, std::string_view text, const RewardConfig& config) {
  const auto& w = config.weights;
  RewardBreakdown c;
  c.r_form = reward_format(text);

  std::optional<std::string> answer;
  try {
    answer = parse_sar(text).answer;
  } catch (const ParseError&) {
    if (config.parse_policy == ParsePolicy::Strict) return compose(c, w);
    if (const auto block = find_block(text, "answer")) answer = std::string(*block);
  }
  if (!answer) return compose(c, w);

  const auto fields = extract_fields(*answer, config.schema);
  if (config.parse_policy == ParsePolicy::Strict && !fields.errors.empty()) return compose(c, w);

  if (fields.action_label) c.r_cls = reward_classification(gt.action_label, *fields.action_label);
  if (fields.sub_actions) {
    std::vector<std::string> pred_labels;
    for (const auto& s : *fields.sub_actions) pred_labels.push_back(s.label);
    const auto gt_labels = gt.sub_action_labels();
    c.r_sub = reward_subaction(gt_labels, pred_labels);
    c.r_temp = reward_temporal(gt.sub_actions, *fields.sub_actions,
                               config.strict_temporal ? TemporalMode::Strict : TemporalMode::MatchedMean,
                               config.label_constrained_matching);
  }
  if (fields.quality && fields.difficulty) {
    double q_scale = 1.0;
    double d_scale = 1.0;
    if (config.normalize_scores) {
      if (const auto it = config.scales.find(gt.sport); it != config.scales.end()) {
        q_scale = it->second.quality.span();
        d_scale = it->second.difficulty.span();
      }
    }
    c.r_score = reward_assessment(*fields.quality / q_scale, *fields.difficulty / d_scale, gt.quality / q_scale,
                                  gt.difficulty / d_scale, w.lambda_score_inner, w.lambda_diff_inner);
  }
  return compose(c, w);
}

RewardBreakdown reward_total(const ActionInstance& gt, std::string_view text, const RewardWeights& weights) {
  RewardConfig config;
  config.weights = weights;
  return reward_total(gt, text, config);
}

}  // namespace hiero
