// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#include "hiero/kernels.hpp"

#include <cassert>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace hiero::kernels {

int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<RewardBreakdown> score_batch_serial(std::span<const ActionInstance> instances,
                                                std::span<const std::string_view> texts,
                                                const RewardConfig& config) {
  assert(instances.size() == texts.size());
  std::vector<RewardBreakdown> out(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) out[i] = reward_total(instances[i], texts[i], config);
  return out;
}

std::vector<RewardBreakdown> score_batch_parallel(std::span<const ActionInstance> instances,
                                                  std::span<const std::string_view> texts,
                                                  const RewardConfig& config) {
  assert(instances.size() == texts.size());
  std::vector<RewardBreakdown> out(instances.size());
  const auto n = static_cast<std::ptrdiff_t>(instances.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = reward_total(instances[i], texts[i], config);
  return out;
}

InstanceStats instance_stats(const ActionInstance& gt, const std::string* prediction,
                             const ExtractionSchema& schema, const SimilarityHook& similarity) {
  InstanceStats stats;
  if (prediction == nullptr) return stats;
  if (similarity && gt.reference_answer) {
    stats.has_similarity = true;
    stats.similarity = similarity(*prediction, *gt.reference_answer);
  }
  PredictedAssessment pred;
  try {
    pred = extract_assessment(parse_sar(*prediction), schema);
  } catch (const ParseError&) {
    return stats;
  } catch (const ExtractError&) {
    return stats;
  }
  stats.parsed = true;
  stats.label_match = reward_classification(gt.action_label, pred.action_label) == 1;
  const auto gt_labels = gt.sub_action_labels();
  const auto pred_labels = pred.sub_action_labels();
  stats.sed = sed(gt_labels, pred_labels);
  stats.pred_score = pred.final_score;
  stats.pred_difficulty = pred.difficulty;
  return stats;
}

std::vector<InstanceStats> instance_stats_serial(std::span<const ActionInstance> gts,
                                                 std::span<const std::string* const> predictions,
                                                 const ExtractionSchema& schema, const SimilarityHook& similarity) {
  assert(gts.size() == predictions.size());
  std::vector<InstanceStats> out(gts.size());
  for (std::size_t i = 0; i < gts.size(); ++i) out[i] = instance_stats(gts[i], predictions[i], schema, similarity);
  return out;
}

std::vector<InstanceStats> instance_stats_parallel(std::span<const ActionInstance> gts,
                                                   std::span<const std::string* const> predictions,
                                                   const ExtractionSchema& schema,
                                                   const SimilarityHook& similarity) {
  assert(gts.size() == predictions.size());
  std::vector<InstanceStats> out(gts.size());
  const auto n = static_cast<std::ptrdiff_t>(gts.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = instance_stats(gts[i], predictions[i], schema, similarity);
  return out;
}

}  // namespace hiero::kernels
