// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

// Per-instance batch kernels. Each has a serial reference and an OpenMP
// version; both write results by index, so outputs are identical
// regardless of thread count.

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hiero/annotations.hpp"
#include "hiero/metrics.hpp"
#include "hiero/rewards.hpp"

namespace hiero::kernels {

int max_threads();

std::vector<RewardBreakdown> score_batch_serial(std::span<const ActionInstance> instances,
                                                std::span<const std::string_view> texts,
                                                const RewardConfig& config);

std::vector<RewardBreakdown> score_batch_parallel(std::span<const ActionInstance> instances,
                                                  std::span<const std::string_view> texts,
                                                  const RewardConfig& config);

struct InstanceStats {
  bool parsed = false;
  bool label_match = false;
  double sed = 0.0;
  double pred_score = 0.0;
  double pred_difficulty = 0.0;
  bool has_similarity = false;
  double similarity = 0.0;

  bool operator==(const InstanceStats&) const = default;
};

/// `prediction` may be null (no prediction for this instance).
InstanceStats instance_stats(const ActionInstance& gt, const std::string* prediction,
                             const ExtractionSchema& schema, const SimilarityHook& similarity);

std::vector<InstanceStats> instance_stats_serial(std::span<const ActionInstance> gts,
                                                 std::span<const std::string* const> predictions,
                                                 const ExtractionSchema& schema,
                                                 const SimilarityHook& similarity = {});

/// The similarity hook, when set, is invoked concurrently.
std::vector<InstanceStats> instance_stats_parallel(std::span<const ActionInstance> gts,
                                                   std::span<const std::string* const> predictions,
                                                   const ExtractionSchema& schema,
                                                   const SimilarityHook& similarity = {});

}  // namespace hiero::kernels
