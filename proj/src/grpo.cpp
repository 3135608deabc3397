// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#include "hiero/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hiero/kernels.hpp"

namespace hiero {
namespace {

constexpr double kAdvantageEpsilon = 1e-8;

std::vector<double> softmax(std::span<const double> logits, double temperature) {
  std::vector<double> p(logits.size());
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    p[k] = std::exp((logits[k] - top) / temperature);
    sum += p[k];
  }
  for (auto& v : p) v /= sum;
  return p;
}

std::vector<double> log_softmax(std::span<const double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - top);
  const double log_norm = top + std::log(sum);
  std::vector<double> out(logits.size());
  for (std::size_t k = 0; k < logits.size(); ++k) out[k] = logits[k] - log_norm;
  return out;
}

double slot_kl(std::span<const double> logits, std::span<const double> reference) {
  const auto lp = log_softmax(logits);
  const auto lr = log_softmax(reference);
  double kl = 0.0;
  for (std::size_t k = 0; k < lp.size(); ++k) kl += std::exp(lp[k]) * (lp[k] - lr[k]);
  return std::max(kl, 0.0);
}

std::size_t sample_index(std::span<const double> probabilities, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    cumulative += probabilities[k];
    if (u < cumulative) return k;
  }
  return probabilities.size() - 1;
}

/// The `n`-th label of `vocabulary` other than `exclude`, cycling.
std::string distractor(const std::vector<std::string>& vocabulary, const std::string& exclude, std::size_t n) {
  std::vector<const std::string*> others;
  for (const auto& label : vocabulary) {
    if (label != exclude) others.push_back(&label);
  }
  if (others.empty()) return "unknown " + std::to_string(n + 1);
  return *others[n % others.size()];
}

std::string swap_blocks(const std::string& text, std::string_view first_tag, std::string_view second_tag) {
  const auto block = [&](std::string_view tag) {
    const auto open = text.find("<" + std::string(tag) + ">");
    const std::string close = "</" + std::string(tag) + ">";
    const auto end = text.find(close) + close.size();
    return std::pair{open, end};
  };
  const auto [a_begin, a_end] = block(first_tag);
  const auto [b_begin, b_end] = block(second_tag);
  return text.substr(0, a_begin) + text.substr(b_begin, b_end - b_begin) + text.substr(a_end, b_begin - a_end) +
         text.substr(a_begin, a_end - a_begin) + text.substr(b_end);
}

std::string drop_block(const std::string& text, std::string_view tag) {
  const auto open = text.find("<" + std::string(tag) + ">");
  const std::string close = "</" + std::string(tag) + ">";
  const auto end = text.find(close) + close.size();
  return text.substr(0, open) + text.substr(end);
}

}  // namespace

std::string_view to_string(AdvantageMode mode) {
  return mode == AdvantageMode::BestOfG ? "best_of_g" : "group_relative";
}

std::optional<AdvantageMode> advantage_mode_from_string(std::string_view name) {
  if (name == "best_of_g") return AdvantageMode::BestOfG;
  if (name == "group_relative") return AdvantageMode::GroupRelative;
  return std::nullopt;
}

TrainConfig TrainConfig::from_config(const KeyValueConfig& config) {
  config.require_known({"group_size", "kl_beta", "learning_rate", "iterations", "temperature", "mode", "seed",
                        "offset_bins", "score_bins", "action_choices", "parallel_scoring"});
  TrainConfig c;
  const auto non_negative = [&](std::string_view key, std::size_t fallback) {
    const long v = config.get_int(key, static_cast<long>(fallback));
    if (v < 0) throw ConfigError("`" + std::string(key) + "` must be >= 0");
    return static_cast<std::size_t>(v);
  };
  c.group_size = non_negative("group_size", c.group_size);
  c.kl_beta = config.get_double("kl_beta", c.kl_beta);
  c.learning_rate = config.get_double("learning_rate", c.learning_rate);
  c.iterations = non_negative("iterations", c.iterations);
  c.temperature = config.get_double("temperature", c.temperature);
  if (config.contains("mode")) {
    const auto mode = advantage_mode_from_string(config.get_string("mode", ""));
    if (!mode) throw ConfigError("mode must be best_of_g or group_relative");
    c.mode = *mode;
  }
  c.seed = non_negative("seed", 0);
  c.offset_bins = config.get_doubles("offset_bins", c.offset_bins);
  c.score_bins = config.get_doubles("score_bins", c.score_bins);
  c.action_choices = non_negative("action_choices", c.action_choices);
  c.parallel_scoring = config.get_bool("parallel_scoring", c.parallel_scoring);
  c.validate();
  return c;
}

void TrainConfig::validate() const {
  if (group_size < 2) throw ConfigError("group_size must be >= 2");
  if (!(kl_beta >= 0.0)) throw ConfigError("kl_beta must be >= 0");
  if (!(learning_rate > 0.0 && std::isfinite(learning_rate))) throw ConfigError("learning_rate must be > 0");
  if (!(temperature > 0.0 && std::isfinite(temperature))) throw ConfigError("temperature must be > 0");
  if (offset_bins.empty() || score_bins.empty()) throw ConfigError("offset_bins and score_bins must be non-empty");
  if (action_choices < 1) throw ConfigError("action_choices must be >= 1");
}

// ---------------------------------------------------------------------------

ToyPolicy ToyPolicy::uniform(const PolicyLayout& layout) {
  std::vector<Slot> slots(layout.slot_count());
  slots[PolicyLayout::format_slot()] = {"format", std::vector<double>(kFormatChoices, 0.0)};
  slots[PolicyLayout::action_slot()] = {"action", std::vector<double>(layout.action_choices, 0.0)};
  for (std::size_t k = 0; k < layout.max_sub_actions; ++k) {
    const auto prefix = "sub" + std::to_string(k) + ".";
    slots[PolicyLayout::sub_label_slot(k)] = {prefix + "label", std::vector<double>(kSubLabelChoices, 0.0)};
    slots[PolicyLayout::sub_start_slot(k)] = {prefix + "start", std::vector<double>(layout.offset_bins, 0.0)};
    slots[PolicyLayout::sub_end_slot(k)] = {prefix + "end", std::vector<double>(layout.offset_bins, 0.0)};
  }
  slots[layout.quality_slot()] = {"quality", std::vector<double>(layout.score_bins, 0.0)};
  slots[layout.difficulty_slot()] = {"difficulty", std::vector<double>(layout.score_bins, 0.0)};
  return ToyPolicy(std::move(slots));
}

std::vector<double> ToyPolicy::probabilities(std::size_t slot, double temperature) const {
  return softmax(slots_[slot].logits, temperature);
}

double ToyPolicy::log_prob(std::size_t slot, std::size_t choice) const {
  return log_softmax(slots_[slot].logits)[choice];
}

bool ToyPolicy::all_finite() const {
  for (const auto& s : slots_) {
    for (double z : s.logits) {
      if (!std::isfinite(z)) return false;
    }
  }
  return true;
}

nlohmann::ordered_json ToyPolicy::to_json() const {
  nlohmann::ordered_json slots = nlohmann::ordered_json::array();
  for (const auto& s : slots_) slots.push_back({{"name", s.name}, {"logits", s.logits}});
  return {{"slots", std::move(slots)}};
}

SimEnvironment SimEnvironment::from_dataset(std::span<const ActionInstance> dataset, RewardConfig reward) {
  SimEnvironment env;
  env.reward = std::move(reward);
  const auto add = [](std::vector<std::string>& vocab, const std::string& label) {
    if (std::find(vocab.begin(), vocab.end(), label) == vocab.end()) vocab.push_back(label);
  };
  for (const auto& inst : dataset) {
    add(env.action_vocabulary, inst.action_label);
    for (const auto& sub : inst.sub_actions) add(env.sub_action_vocabulary, sub.label);
    env.max_sub_actions = std::max(env.max_sub_actions, inst.sub_actions.size());
  }
  return env;
}

PolicyLayout SimEnvironment::layout(const TrainConfig& config) const {
  return {max_sub_actions, config.action_choices, config.offset_bins.size(), config.score_bins.size()};
}

std::vector<std::size_t> active_slots(const ActionInstance& instance, const PolicyLayout& layout) {
  std::vector<std::size_t> slots = {PolicyLayout::format_slot(), PolicyLayout::action_slot()};
  const std::size_t n = std::min(instance.sub_actions.size(), layout.max_sub_actions);
  for (std::size_t k = 0; k < n; ++k) {
    slots.push_back(PolicyLayout::sub_label_slot(k));
    slots.push_back(PolicyLayout::sub_start_slot(k));
    slots.push_back(PolicyLayout::sub_end_slot(k));
  }
  slots.push_back(layout.quality_slot());
  slots.push_back(layout.difficulty_slot());
  return slots;
}

PredictedAssessment decode_choices(const ActionInstance& instance, std::span<const std::size_t> choices,
                                   const SimEnvironment& env, const TrainConfig& config) {
  const auto layout = env.layout(config);
  PredictedAssessment pred;
  const std::size_t action = choices[PolicyLayout::action_slot()];
  pred.action_label = action == 0 ? instance.action_label
                                  : distractor(env.action_vocabulary, instance.action_label, action - 1);
  const std::size_t n = std::min(instance.sub_actions.size(), layout.max_sub_actions);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& gt = instance.sub_actions[k];
    const std::size_t label_choice = choices[PolicyLayout::sub_label_slot(k)];
    if (label_choice == 2) continue;  // dropped
    PredictedSubAction sub;
    sub.label = label_choice == 0 ? gt.label : distractor(env.sub_action_vocabulary, gt.label, k);
    sub.interval.start = std::max(0.0, gt.interval.start + config.offset_bins[choices[PolicyLayout::sub_start_slot(k)]]);
    sub.interval.end = gt.interval.end + config.offset_bins[choices[PolicyLayout::sub_end_slot(k)]];
    pred.sub_actions.push_back(std::move(sub));
  }
  SportScale scale{{0.0, 1.0}, {0.0, 1.0}};
  if (const auto it = env.reward.scales.find(instance.sport); it != env.reward.scales.end()) scale = it->second;
  pred.quality = instance.quality + config.score_bins[choices[layout.quality_slot()]] * scale.quality.span();
  pred.difficulty = instance.difficulty + config.score_bins[choices[layout.difficulty_slot()]] * scale.difficulty.span();
  pred.final_score = instance.sport == Sport::Diving ? pred.quality * pred.difficulty
                                                     : instance.final_score + (pred.quality - instance.quality);
  return pred;
}

std::string render_response(const ActionInstance& instance, std::span<const std::size_t> choices,
                            const SimEnvironment& env, const TrainConfig& config) {
  const auto pred = decode_choices(instance, choices, env, config);
  const auto it = env.templates.by_sport.find(instance.sport);
  if (it == env.templates.by_sport.end()) throw MissingTemplate(instance.sport);
  // Fixed template variants per instance, so text varies only with the choices.
  Rng render_rng(fnv1a(instance.id));
  const auto text = serialize_sar(render_sar(instance.sport, pred, it->second, render_rng, env.reward.schema));
  switch (choices[PolicyLayout::format_slot()]) {
    case 1:
      return swap_blocks(text, "recognition", "assessment");
    case 2:
      return drop_block(text, "answer");
    default:
      return text;
  }
}

GroupSample sample_group(const ToyPolicy& policy, const ActionInstance& instance, const TrainConfig& config,
                         const SimEnvironment& env, Rng& rng) {
  const auto layout = env.layout(config);
  const auto slots = active_slots(instance, layout);
  std::vector<std::vector<double>> probabilities(policy.slot_count());
  for (auto s : slots) probabilities[s] = policy.probabilities(s, config.temperature);

  GroupSample group;
  for (std::size_t i = 0; i < config.group_size; ++i) {
    std::vector<std::size_t> choices(policy.slot_count(), kUnusedSlot);
    for (auto s : slots) choices[s] = sample_index(probabilities[s], rng);
    group.responses.push_back(render_response(instance, choices, env, config));
    group.choices.push_back(std::move(choices));
  }
  return group;
}

std::vector<std::size_t> argmax_choices(const ToyPolicy& policy, const ActionInstance& instance,
                                        const PolicyLayout& layout) {
  std::vector<std::size_t> choices(policy.slot_count(), kUnusedSlot);
  for (auto s : active_slots(instance, layout)) {
    const auto& logits = policy.slot(s).logits;
    choices[s] = static_cast<std::size_t>(std::max_element(logits.begin(), logits.end()) - logits.begin());
  }
  return choices;
}

GroupSample score_group(GroupSample group, const ActionInstance& instance, const RewardConfig& reward,
                        bool parallel) {
  std::vector<ActionInstance> instances(group.responses.size(), instance);
  std::vector<std::string_view> texts(group.responses.begin(), group.responses.end());
  group.rewards = parallel ? kernels::score_batch_parallel(instances, texts, reward)
                           : kernels::score_batch_serial(instances, texts, reward);
  return group;
}

std::vector<double> group_advantages(std::span<const double> rewards, AdvantageMode mode) {
  std::vector<double> advantages(rewards.size(), 0.0);
  if (rewards.empty()) return advantages;
  const auto [lo, hi] = std::minmax_element(rewards.begin(), rewards.end());
  if (*lo == *hi) return advantages;
  if (mode == AdvantageMode::BestOfG) {
    advantages[std::max_element(rewards.begin(), rewards.end()) - rewards.begin()] = 1.0;
    return advantages;
  }
  const double n = static_cast<double>(rewards.size());
  const double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double std_dev = std::sqrt(var / n);
  for (std::size_t i = 0; i < rewards.size(); ++i) advantages[i] = (rewards[i] - mean) / (std_dev + kAdvantageEpsilon);
  return advantages;
}

double kl_divergence(const ToyPolicy& policy, const ToyPolicy& reference) {
  double kl = 0.0;
  for (std::size_t s = 0; s < policy.slot_count(); ++s) kl += slot_kl(policy.slot(s).logits, reference.slot(s).logits);
  return kl;
}

double surrogate_objective(const ToyPolicy& policy, const GroupSample& group, const ToyPolicy& reference,
                           double kl_beta) {
  double objective = 0.0;
  for (std::size_t i = 0; i < group.choices.size(); ++i) {
    const double advantage = group.advantages.at(i);
    if (advantage == 0.0) continue;
    for (std::size_t s = 0; s < policy.slot_count(); ++s) {
      const auto choice = group.choices[i][s];
      if (choice != kUnusedSlot) objective += advantage * policy.log_prob(s, choice);
    }
  }
  return objective - kl_beta * kl_divergence(policy, reference);
}

std::vector<std::vector<double>> surrogate_gradient(const ToyPolicy& policy, const GroupSample& group,
                                                    const ToyPolicy& reference, double kl_beta) {
  std::vector<std::vector<double>> grad(policy.slot_count());
  for (std::size_t s = 0; s < policy.slot_count(); ++s) {
    const auto& logits = policy.slot(s).logits;
    const auto p = softmax(logits, 1.0);
    auto& g = grad[s];
    g.assign(logits.size(), 0.0);

    for (std::size_t i = 0; i < group.choices.size(); ++i) {
      const auto choice = group.choices[i][s];
      const double advantage = group.advantages.at(i);
      if (choice == kUnusedSlot || advantage == 0.0) continue;
      for (std::size_t k = 0; k < g.size(); ++k) g[k] += advantage * ((k == choice ? 1.0 : 0.0) - p[k]);
    }

    if (kl_beta != 0.0) {
      const auto lp = log_softmax(logits);
      const auto lr = log_softmax(reference.slot(s).logits);
      double kl = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) kl += p[k] * (lp[k] - lr[k]);
      for (std::size_t k = 0; k < g.size(); ++k) g[k] -= kl_beta * p[k] * (lp[k] - lr[k] - kl);
    }
  }
  return grad;
}

std::pair<ToyPolicy, StepStats> update_policy(const ToyPolicy& policy, const GroupSample& group,
                                              const TrainConfig& config, const ToyPolicy& reference) {
  const auto grad = surrogate_gradient(policy, group, reference, config.kl_beta);
  StepStats stats;
  double norm2 = 0.0;
  for (std::size_t s = 0; s < grad.size(); ++s) {
    for (std::size_t k = 0; k < grad[s].size(); ++k) {
      if (!std::isfinite(grad[s][k])) {
        throw NonFiniteGradient("non-finite gradient in slot `" + policy.slot(s).name + "` entry " +
                                std::to_string(k));
      }
      norm2 += grad[s][k] * grad[s][k];
    }
  }
  ToyPolicy next = policy;
  for (std::size_t s = 0; s < grad.size(); ++s) {
    auto& logits = next.slot(s).logits;
    for (std::size_t k = 0; k < logits.size(); ++k) logits[k] += config.learning_rate * grad[s][k];
  }
  if (!next.all_finite()) throw NonFiniteGradient("update produced non-finite logits");
  stats.gradient_norm = std::sqrt(norm2);
  stats.kl = kl_divergence(next, reference);
  return {std::move(next), stats};
}

// ---------------------------------------------------------------------------

std::string TrainingTrace::to_csv() const {
  std::string out = "iteration,mean_reward,best_reward,kl,r_form,r_temp,r_action,r_score\n";
  for (const auto& r : rows) {
    out += std::to_string(r.iteration) + "," + format_number(r.mean_reward) + "," + format_number(r.best_reward) +
           "," + format_number(r.kl) + "," + format_number(r.r_form) + "," + format_number(r.r_temp) + "," +
           format_number(r.r_action) + "," + format_number(r.r_score) + "\n";
  }
  return out;
}

double TrainingTrace::window_mean(std::size_t first, std::size_t count) const {
  const std::size_t end = std::min(rows.size(), first + count);
  if (first >= end) return 0.0;
  double sum = 0.0;
  for (std::size_t i = first; i < end; ++i) sum += rows[i].mean_reward;
  return sum / static_cast<double>(end - first);
}

TrainResult train(std::span<const ActionInstance> dataset, const TrainConfig& config, const RewardConfig& reward) {
  config.validate();
  if (dataset.empty()) throw std::invalid_argument("training needs a non-empty dataset");
  const auto env = SimEnvironment::from_dataset(dataset, reward);
  const auto layout = env.layout(config);

  TrainResult result;
  result.reference = ToyPolicy::uniform(layout);
  result.policy = result.reference;
  Rng rng(config.seed);

  for (std::size_t t = 0; t < config.iterations; ++t) {
    const auto& instance = dataset[t % dataset.size()];
    auto group = score_group(sample_group(result.policy, instance, config, env, rng), instance, env.reward,
                             config.parallel_scoring);
    std::vector<double> totals;
    for (const auto& r : group.rewards) totals.push_back(r.total);
    group.advantages = group_advantages(totals, config.mode);
    auto [next, stats] = update_policy(result.policy, group, config, result.reference);
    result.policy = std::move(next);

    TraceRow row;
    row.iteration = t;
    const double g = static_cast<double>(group.rewards.size());
    for (const auto& r : group.rewards) {
      row.mean_reward += r.total / g;
      row.r_form += r.r_form / g;
      row.r_temp += r.r_temp / g;
      row.r_action += r.r_action / g;
      row.r_score += r.r_score / g;
    }
    row.best_reward = *std::max_element(totals.begin(), totals.end());
    row.kl = stats.kl;
    result.trace.rows.push_back(row);
  }
  return result;
}

}  // namespace hiero
