// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

// Linear assignment for segment matching: Hungarian algorithm with
// potentials (O(n^2 m)), plus a fix-and-verify pass that selects the
// lexicographically smallest optimal assignment.

#include <algorithm>
#include <limits>
#include <vector>

#include "hiero/rewards.hpp"

namespace hiero {
namespace {

// Optimality slack when comparing assignment totals; weights are IoUs in
// [0, 1] so totals stay far below the scale where this matters.
constexpr double kTieTolerance = 1e-9;

/// Row-to-column assignment minimizing total cost, n <= m. Returns, for each
/// row, its column.
std::vector<std::size_t> hungarian_min(const std::vector<double>& cost, std::size_t n, std::size_t m) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

/// Best total weight of a size-min(|rows|,|cols|) matching restricted to
/// the given rows and columns.
double best_total(std::span<const double> weights, std::size_t stride, const std::vector<std::size_t>& rows,
                  const std::vector<std::size_t>& cols) {
  if (rows.empty() || cols.empty()) return 0.0;
  const bool transpose = rows.size() > cols.size();
  const auto& small = transpose ? cols : rows;
  const auto& large = transpose ? rows : cols;
  const std::size_t n = small.size();
  const std::size_t m = large.size();
  std::vector<double> cost(n * m);
  const auto weight = [&](std::size_t a, std::size_t b) {
    return transpose ? weights[large[b] * stride + small[a]] : weights[small[a] * stride + large[b]];
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < m; ++b) cost[a * m + b] = -weight(a, b);
  }
  const auto assignment = hungarian_min(cost, n, m);
  double total = 0.0;
  for (std::size_t a = 0; a < n; ++a) total += weight(a, assignment[a]);
  return total;
}

}  // namespace

Matching max_weight_matching(std::span<const double> weights, std::size_t rows, std::size_t cols) {
  Matching matching;
  const std::size_t target = std::min(rows, cols);
  if (target == 0) return matching;

  std::vector<std::size_t> all_rows(rows), all_cols(cols);
  for (std::size_t i = 0; i < rows; ++i) all_rows[i] = i;
  for (std::size_t j = 0; j < cols; ++j) all_cols[j] = j;
  const double optimum = best_total(weights, cols, all_rows, all_cols);

  // Walk rows in order and commit the smallest column that still admits an
  // optimal completion; a row is left unmatched only when that is optimal
  // and the remaining rows can still fill the matching.
  std::vector<char> col_used(cols, 0);
  double committed = 0.0;
  for (std::size_t i = 0; i < rows && matching.pairs.size() < target; ++i) {
    std::vector<std::size_t> rest_rows;
    for (std::size_t r = i + 1; r < rows; ++r) rest_rows.push_back(r);
    bool fixed = false;
    for (std::size_t j = 0; j < cols && !fixed; ++j) {
      if (col_used[j]) continue;
      std::vector<std::size_t> rest_cols;
      for (std::size_t c = 0; c < cols; ++c) {
        if (!col_used[c] && c != j) rest_cols.push_back(c);
      }
      const std::size_t reachable = matching.pairs.size() + 1 + std::min(rest_rows.size(), rest_cols.size());
      if (reachable < target) continue;
      const double candidate = committed + weights[i * cols + j] + best_total(weights, cols, rest_rows, rest_cols);
      if (candidate >= optimum - kTieTolerance) {
        matching.pairs.emplace_back(i, j);
        col_used[j] = 1;
        committed += weights[i * cols + j];
        fixed = true;
      }
    }
  }
  return matching;
}

}  // namespace hiero
