// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

// Desk-scale group policy optimization over the SAR output space.
//
// The policy is slot-factored: one categorical distribution per decision
// (format gate, action label, per-sub-action label / boundary offsets,
// quality and difficulty offsets). A sampled choice vector is decoded
// relative to the ground-truth instance and rendered through the QA
// templates, so every reward component has a learnable signal.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hiero/annotations.hpp"
#include "hiero/common.hpp"
#include "hiero/config.hpp"
#include "hiero/rewards.hpp"

namespace hiero {

enum class AdvantageMode {
  /// Advantage 1 for the highest-reward response (lowest index on ties), 0
  /// elsewhere; all zeros when every reward is equal.
  BestOfG,
  /// (r - mean) / (std + 1e-8); all zeros when every reward is equal.
  GroupRelative,
};

std::string_view to_string(AdvantageMode mode);
std::optional<AdvantageMode> advantage_mode_from_string(std::string_view name);

struct TrainConfig {
  std::size_t group_size = 8;
  double kl_beta = 0.04;
  double learning_rate = 0.05;
  std::size_t iterations = 500;
  double temperature = 1.5;
  AdvantageMode mode = AdvantageMode::BestOfG;
  std::uint64_t seed = 0;
  /// Seconds added to each sub-action edge.
  std::vector<double> offset_bins = {-2.0, -1.0, 0.0, 1.0, 2.0};
  /// Quality / difficulty offsets as fractions of the sport's score range.
  std::vector<double> score_bins = {-0.3, -0.15, 0.0, 0.15, 0.3};
  /// Choice 0 is the true label, the rest are distractors.
  std::size_t action_choices = 4;
  bool parallel_scoring = false;

  /// Keys: group_size, kl_beta, learning_rate, iterations, temperature,
  /// mode (best_of_g|group_relative), seed, offset_bins, score_bins,
  /// action_choices, parallel_scoring.
  static TrainConfig from_config(const KeyValueConfig& config);
  void validate() const;
};

inline constexpr std::size_t kFormatChoices = 3;    // canonical, swapped stages, answer dropped
inline constexpr std::size_t kSubLabelChoices = 3;  // keep, substitute, drop
inline constexpr std::size_t kUnusedSlot = std::numeric_limits<std::size_t>::max();

struct PolicyLayout {
  std::size_t max_sub_actions = 0;
  std::size_t action_choices = 4;
  std::size_t offset_bins = 5;
  std::size_t score_bins = 5;

  std::size_t slot_count() const { return 4 + 3 * max_sub_actions; }
  static constexpr std::size_t format_slot() { return 0; }
  static constexpr std::size_t action_slot() { return 1; }
  static constexpr std::size_t sub_label_slot(std::size_t k) { return 2 + 3 * k; }
  static constexpr std::size_t sub_start_slot(std::size_t k) { return 3 + 3 * k; }
  static constexpr std::size_t sub_end_slot(std::size_t k) { return 4 + 3 * k; }
  std::size_t quality_slot() const { return 2 + 3 * max_sub_actions; }
  std::size_t difficulty_slot() const { return 3 + 3 * max_sub_actions; }
};

class ToyPolicy {
 public:
  struct Slot {
    std::string name;
    std::vector<double> logits;

    bool operator==(const Slot&) const = default;
  };

  ToyPolicy() = default;
  explicit ToyPolicy(std::vector<Slot> slots) : slots_(std::move(slots)) {}

  /// All-zero logits, i.e. uniform over every slot.
  static ToyPolicy uniform(const PolicyLayout& layout);

  std::size_t slot_count() const { return slots_.size(); }
  const Slot& slot(std::size_t i) const { return slots_[i]; }
  Slot& slot(std::size_t i) { return slots_[i]; }
  std::span<const Slot> slots() const { return slots_; }

  /// softmax(logits / temperature).
  std::vector<double> probabilities(std::size_t slot, double temperature = 1.0) const;
  double log_prob(std::size_t slot, std::size_t choice) const;

  bool all_finite() const;
  nlohmann::ordered_json to_json() const;

  bool operator==(const ToyPolicy&) const = default;

 private:
  std::vector<Slot> slots_;
};

/// Vocabularies and reward settings shared by all rollouts of a run.
struct SimEnvironment {
  std::vector<std::string> action_vocabulary;
  std::vector<std::string> sub_action_vocabulary;
  std::size_t max_sub_actions = 0;
  TemplateSet templates = TemplateSet::defaults();
  RewardConfig reward;

  static SimEnvironment from_dataset(std::span<const ActionInstance> dataset, RewardConfig reward = {});
  PolicyLayout layout(const TrainConfig& config) const;
};

/// Decodes a choice vector relative to the ground truth.
PredictedAssessment decode_choices(const ActionInstance& instance, std::span<const std::size_t> choices,
                                   const SimEnvironment& env, const TrainConfig& config);

/// Decodes and renders the SAR text, applying the format gate.
std::string render_response(const ActionInstance& instance, std::span<const std::size_t> choices,
                            const SimEnvironment& env, const TrainConfig& config);

/// Slots that take part in rendering `instance`.
std::vector<std::size_t> active_slots(const ActionInstance& instance, const PolicyLayout& layout);

struct GroupSample {
  std::vector<std::string> responses;
  /// Per response, one entry per policy slot; kUnusedSlot for inactive slots.
  std::vector<std::vector<std::size_t>> choices;
  std::vector<RewardBreakdown> rewards;
  std::vector<double> advantages;
};

GroupSample sample_group(const ToyPolicy& policy, const ActionInstance& instance, const TrainConfig& config,
                         const SimEnvironment& env, Rng& rng);

/// Choice vector of the most likely value in every active slot.
std::vector<std::size_t> argmax_choices(const ToyPolicy& policy, const ActionInstance& instance,
                                        const PolicyLayout& layout);

GroupSample score_group(GroupSample group, const ActionInstance& instance, const RewardConfig& reward,
                        bool parallel = false);

std::vector<double> group_advantages(std::span<const double> rewards, AdvantageMode mode);

/// Sum over slots of KL(policy || reference).
double kl_divergence(const ToyPolicy& policy, const ToyPolicy& reference);

/// sum_i A_i * sum_{active slots} log pi(a_i) - beta * KL(pi || reference).
double surrogate_objective(const ToyPolicy& policy, const GroupSample& group, const ToyPolicy& reference,
                           double kl_beta);

/// Analytic gradient of surrogate_objective with respect to every logit,
/// laid out like the policy's slots.
std::vector<std::vector<double>> surrogate_gradient(const ToyPolicy& policy, const GroupSample& group,
                                                    const ToyPolicy& reference, double kl_beta);

class NonFiniteGradient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepStats {
  double kl = 0.0;
  double gradient_norm = 0.0;
};

/// One gradient-ascent step on the surrogate. Requires advantages.
std::pair<ToyPolicy, StepStats> update_policy(const ToyPolicy& policy, const GroupSample& group,
                                              const TrainConfig& config, const ToyPolicy& reference);

struct TraceRow {
  std::size_t iteration = 0;
  double mean_reward = 0.0;
  double best_reward = 0.0;
  double kl = 0.0;
  double r_form = 0.0;
  double r_temp = 0.0;
  double r_action = 0.0;
  double r_score = 0.0;

  bool operator==(const TraceRow&) const = default;
};

struct TrainingTrace {
  std::vector<TraceRow> rows;

  std::string to_csv() const;
  /// Mean of mean_reward over rows [first, first + count).
  double window_mean(std::size_t first, std::size_t count) const;

  bool operator==(const TrainingTrace&) const = default;
};

struct TrainResult {
  TrainingTrace trace;
  ToyPolicy policy;
  ToyPolicy reference;
};

/// Round-robin over the dataset: sample, score, advantages, update.
TrainResult train(std::span<const ActionInstance> dataset, const TrainConfig& config,
                  const RewardConfig& reward = {});

}  // namespace hiero
