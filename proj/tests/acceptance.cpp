// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hiero/annotations.hpp"
#include "hiero/grpo.hpp"
#include "hiero/metrics.hpp"
#include "hiero/rewards.hpp"
#include "hiero/sar_format.hpp"
#include "oracles.hpp"

using namespace hiero;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr double kTotalTolerance = 1e-12;
constexpr double kSpearmanTolerance = 1e-9;
constexpr double kFixtureTolerance = 1e-12;
constexpr double kGradientTolerance = 1e-4;
constexpr double kGradientFloor = 1e-6;
constexpr double kZeroGradientTolerance = 1e-8;
constexpr double kLearningMargin = 0.3;
constexpr std::size_t kLearningWindow = 50;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int number;
  std::string name;
  double budget_seconds;  // 0 means no runtime bound
  std::function<Outcome()> check;
};

std::string fmt(const char* format, auto... args) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

std::vector<ActionInstance> corpus(std::size_t n, std::uint64_t seed) {
  SynthConfig config;
  config.n_instances = n;
  config.sports = {Sport::Diving, Sport::FigureSkating, Sport::ArtisticSwimming};
  return synth_dataset(config, seed);
}

std::string document(const std::string& answer) {
  return serialize_sar(SarDocument{"look", {{"phase", "observation", "conclusion"}}, "assessment", answer});
}

// 1. Reward composition against independently recomputed components.

struct RandomPrediction {
  std::string text;
  int r_form = 0;
  bool has_answer = false;
  bool has_scores = false;
  PredictedAssessment fields;
};

RandomPrediction random_prediction(const ActionInstance& gt, Rng& rng) {
  static const std::vector<std::string> distractors = {"spin", "hold", "glide", "drop"};
  RandomPrediction p;
  auto& a = p.fields;
  a.action_label = rng.bernoulli(0.5) ? gt.action_label : "X" + std::to_string(rng.index(5));
  const std::size_t n = rng.index(7);
  for (std::size_t i = 0; i < n; ++i) {
    std::string label;
    if (!gt.sub_actions.empty() && rng.bernoulli(0.6)) {
      label = gt.sub_actions[rng.index(gt.sub_actions.size())].label;
    } else {
      label = distractors[rng.index(distractors.size())];
    }
    const double start = std::round(rng.uniform(0.0, 40.0) * 4.0) / 4.0;
    const double length = std::round(rng.uniform(0.25, 9.0) * 4.0) / 4.0;
    a.sub_actions.push_back({label, {start, start + length}});
  }
  const auto scale = default_sport_scales().at(gt.sport);
  a.quality = std::max(0.0, std::round((gt.quality + rng.uniform(-0.3, 0.3) * scale.quality.span()) * 10.0) / 10.0);
  a.difficulty = std::max(0.1, std::round((gt.difficulty + rng.uniform(-0.3, 0.3) * scale.difficulty.span()) * 10.0) / 10.0);
  a.final_score = a.quality * a.difficulty;

  std::string answer = format_answer(a);
  p.has_scores = true;
  if (rng.bernoulli(0.15)) {
    std::istringstream in(answer);
    std::string line, kept;
    while (std::getline(in, line)) {
      if (line.rfind("Action:", 0) == 0 || line.rfind("Sub-actions:", 0) == 0) kept += line + "\n";
    }
    answer = std::string(trim(kept));
    p.has_scores = false;
  }

  const auto blocks = std::array<std::string, 4>{"<look>look</look>",
                                                 "<recognition>Phase: p, Observation: o, Conclusion: c</recognition>",
                                                 "<assessment>assessment</assessment>", "<answer>" + answer + "</answer>"};
  const double shape = rng.uniform();
  if (shape < 0.7) {
    p.text = document(answer);
    p.r_form = 1;
    p.has_answer = true;
  } else if (shape < 0.85) {
    p.text = blocks[0] + blocks[2] + blocks[1] + blocks[3];
    p.has_answer = true;
  } else {
    p.text = blocks[0] + blocks[1] + blocks[2];
  }
  return p;
}

double hand_total(const ActionInstance& gt, const RandomPrediction& p, const RewardWeights& w) {
  double r_temp = 0.0, r_cls = 0.0, r_sub = 0.0, r_score = 0.0;
  if (p.has_answer) {
    r_cls = p.fields.action_label == gt.action_label ? 1.0 : 0.0;
    std::vector<TimeInterval> gt_iv, pred_iv;
    std::vector<std::string> gt_seq, pred_seq;
    for (const auto& s : gt.sub_actions) {
      gt_iv.push_back(s.interval);
      gt_seq.push_back(s.label);
    }
    for (const auto& s : p.fields.sub_actions) {
      pred_iv.push_back(s.interval);
      pred_seq.push_back(s.label);
    }
    r_temp = oracle::mean_iou(gt_iv, pred_iv, false);
    r_sub = oracle::normalized_similarity(gt_seq, pred_seq);
    if (p.has_scores) {
      const auto scale = default_sport_scales().at(gt.sport);
      const double dq = (p.fields.quality - gt.quality) / scale.quality.span();
      const double dd = (p.fields.difficulty - gt.difficulty) / scale.difficulty.span();
      r_score = std::exp(-w.lambda_score_inner * dq * dq - w.lambda_diff_inner * dd * dd);
    }
  }
  const double r_action = w.alpha * r_cls + (1.0 - w.alpha) * r_sub;
  return w.lambda_fmt * p.r_form + w.lambda_temp * r_temp + w.lambda_action * r_action + w.lambda_score * r_score;
}

Outcome reward_fidelity() {
  const RewardWeights defaults;
  if (defaults.lambda_fmt != 0.1 || defaults.lambda_temp != 0.3 || defaults.lambda_action != 0.3 ||
      defaults.lambda_score != 0.3) {
    return {false, "default weights differ from 0.1/0.3/0.3/0.3"};
  }
  const auto instances = corpus(100, 101);
  Rng rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto& gt = instances[rng.index(instances.size())];
    const auto p = random_prediction(gt, rng);
    RewardWeights w;
    if (i % 2 == 1) {
      w.lambda_fmt = rng.uniform(0.0, 1.0);
      w.lambda_temp = rng.uniform(0.0, 1.0);
      w.lambda_action = rng.uniform(0.0, 1.0);
      w.lambda_score = rng.uniform(0.0, 1.0);
      w.alpha = rng.uniform(0.0, 1.0);
    }
    worst = std::max(worst, std::abs(reward_total(gt, p.text, w).total - hand_total(gt, p, w)));
  }
  return {worst <= kTotalTolerance, fmt("1000 pairs, max |diff| %.3g <= %.0e", worst, kTotalTolerance)};
}

// 2. Temporal matching against brute force.

Outcome matching_oracle() {
  Rng rng(7);
  std::size_t cases = 0, mismatches = 0;
  for (int i = 0; i < 1200; ++i) {
    const std::size_t ng = rng.index(7), np = rng.index(7);
    const bool coarse = i % 3 == 0;  // quarter-second grid to provoke ties
    auto draw = [&](std::size_t n) {
      std::vector<TimeInterval> out;
      for (std::size_t k = 0; k < n; ++k) {
        double a = rng.uniform(0.0, 20.0), len = rng.uniform(0.1, 8.0);
        if (coarse) {
          a = std::round(a * 4.0) / 4.0;
          len = std::max(0.25, std::round(len * 4.0) / 4.0);
        }
        out.push_back({a, a + len});
      }
      return out;
    };
    const auto gt = draw(ng);
    const auto pred = draw(np);
    for (bool strict : {false, true}) {
      ++cases;
      const double got = reward_temporal(gt, pred, strict ? TemporalMode::Strict : TemporalMode::MatchedMean);
      if (got != oracle::mean_iou(gt, pred, strict)) ++mismatches;
    }
  }
  return {mismatches == 0 && cases >= 500, fmt("%zu cases, %zu inexact", cases, mismatches)};
}

// 3. Edit distance, exhaustively over short sequences.

Outcome edit_distance_oracle() {
  std::vector<std::vector<std::string>> sequences = {{}};
  for (std::size_t first = 0; sequences.back().size() < 6;) {
    const std::size_t last = sequences.size();
    for (std::size_t i = first; i < last; ++i) {
      for (const char* symbol : {"a", "b", "c"}) {
        auto next = sequences[i];
        next.push_back(symbol);
        sequences.push_back(std::move(next));
      }
    }
    first = last;
  }
  std::size_t pairs = 0, mismatches = 0;
  for (const auto& a : sequences) {
    for (const auto& b : sequences) {
      ++pairs;
      if (edit_distance(a, b) != oracle::naive_edit(a, b)) ++mismatches;
    }
  }
  return {mismatches == 0, fmt("%zu sequences, %zu pairs, %zu mismatches", sequences.size(), pairs, mismatches)};
}

// 4. Format reward over every block ordering.

Outcome format_orderings() {
  const auto text = generate_qa(corpus(1, 3)[0], TemplateSet::defaults(), 0).answer;
  std::array<std::string, 4> blocks;
  for (std::size_t i = 0; i < 4; ++i) {
    const std::string open = "<" + std::string(kStageTags[i]) + ">";
    const std::string close = "</" + std::string(kStageTags[i]) + ">";
    const auto from = text.find(open);
    blocks[i] = text.substr(from, text.find(close) + close.size() - from);
  }
  std::array<int, 4> order = {0, 1, 2, 3};
  int orderings = 0, ones = 0;
  bool canonical_one = false;
  do {
    std::string text;
    for (int i : order) text += blocks[i] + "\n";
    const int r = reward_format(text);
    ++orderings;
    ones += r;
    if (order == std::array<int, 4>{0, 1, 2, 3}) canonical_one = r == 1;
  } while (std::next_permutation(order.begin(), order.end()));
  return {orderings == 24 && ones == 1 && canonical_one, fmt("%d orderings, %d score 1", orderings, ones)};
}

// 5. Metric oracles and fixtures.

Outcome metric_oracles() {
  Rng rng(55);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 2 + rng.index(19);
    const bool ties = i % 2 == 0;
    std::vector<double> x(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = ties ? static_cast<double>(rng.integer(0, 4)) : rng.uniform(-5.0, 5.0);
      y[k] = ties ? static_cast<double>(rng.integer(0, 4)) : rng.uniform(-5.0, 5.0);
    }
    if (*std::min_element(x.begin(), x.end()) == *std::max_element(x.begin(), x.end())) x[0] += 10.0;
    if (*std::min_element(y.begin(), y.end()) == *std::max_element(y.begin(), y.end())) y[0] += 10.0;
    worst = std::max(worst, std::abs(spearman(x, y) - oracle::spearman(x, y)));
  }

  // R-l2 on preds {12, 20, 27} against {10, 20, 30}, range 20: (2 + 0 + 3) / 3 / 20.
  const double rl2 = relative_l2(std::vector<double>{12, 20, 27}, std::vector<double>{10, 20, 30}, {10, 30});
  const bool rl2_ok = std::abs(rl2 - 1.0 / 12.0) <= kFixtureTolerance;
  // SED: one deletion out of 3 and one substitution out of 4.
  using Seq = std::vector<std::string>;
  const bool sed_ok = std::abs(sed(Seq{"t", "f", "e"}, Seq{"t", "e"}) - 2.0 / 3.0) <= kFixtureTolerance &&
                      std::abs(sed(Seq{"t", "f", "f", "e"}, Seq{"t", "f", "x", "e"}) - 0.75) <= kFixtureTolerance &&
                      sed(Seq{}, Seq{}) == 1.0;

  const auto instances = corpus(100, 9);
  const auto templates = TemplateSet::defaults();
  std::map<std::string, std::string> preds;
  for (const auto& inst : instances) preds[inst.id] = generate_qa(inst, templates, fnv1a(inst.id)).answer;
  const auto report = evaluate(instances, preds);
  const bool oracle_ok = report.action_accuracy == 1.0 && report.sed_mean == 1.0 && report.rl2_score == 0.0;

  return {worst <= kSpearmanTolerance && rl2_ok && sed_ok && oracle_ok,
          fmt("spearman max |diff| %.3g, R-l2 fixture %s, SED fixtures %s, oracle corpus acc %.3f SED %.3f R-l2 %.3f",
              worst, rl2_ok ? "ok" : "bad", sed_ok ? "ok" : "bad", report.action_accuracy, report.sed_mean,
              report.rl2_score.value_or(-1.0))};
}

// 6. Generated answers extract back to their sources.

Outcome inversion() {
  const auto templates = TemplateSet::defaults();
  std::size_t total = 0, exact = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    for (const auto& inst : corpus(200, seed)) {
      ++total;
      try {
        const auto a = extract_assessment(parse_sar(generate_qa(inst, templates, fnv1a(inst.id) ^ seed).answer));
        const auto b = to_assessment(inst);
        if (a.action_label == b.action_label && a.sub_actions == b.sub_actions && a.quality == b.quality &&
            a.difficulty == b.difficulty && a.final_score == b.final_score) {
          ++exact;
        }
      } catch (const std::exception&) {
      }
    }
  }
  return {exact == total, fmt("%zu / %zu exact", exact, total)};
}

// 7. Analytic policy gradient against central differences.

Outcome gradient_check() {
  SynthConfig synth;
  synth.n_instances = 8;
  const auto data = synth_dataset(synth, 5);
  const TrainConfig config;
  const auto env = SimEnvironment::from_dataset(data);
  const auto layout = env.layout(config);
  Rng rng(314);
  auto random_policy = [&] {
    auto p = ToyPolicy::uniform(layout);
    for (std::size_t s = 0; s < p.slot_count(); ++s) {
      for (auto& v : p.slot(s).logits) v = rng.normal() * 1.5;
    }
    return p;
  };
  const int points = 24;
  const double h = 1e-5;
  double worst = 0.0, worst_zero = 0.0;
  std::size_t components = 0, zero_components = 0;
  for (int point = 0; point < points; ++point) {
    const auto policy = random_policy();
    const auto reference = random_policy();
    const auto& inst = data[rng.index(data.size())];
    auto group = score_group(sample_group(policy, inst, config, env, rng), inst, env.reward);
    std::vector<double> totals;
    for (const auto& r : group.rewards) totals.push_back(r.total);
    group.advantages = group_advantages(totals, point % 2 ? AdvantageMode::BestOfG : AdvantageMode::GroupRelative);
    const double beta = point < 4 ? 0.0 : rng.uniform(0.01, 1.0);
    const auto grad = surrogate_gradient(policy, group, reference, beta);
    for (std::size_t s = 0; s < policy.slot_count(); ++s) {
      for (std::size_t k = 0; k < policy.slot(s).logits.size(); ++k) {
        auto plus = policy, minus = policy;
        plus.slot(s).logits[k] += h;
        minus.slot(s).logits[k] -= h;
        const double fd = (surrogate_objective(plus, group, reference, beta) -
                           surrogate_objective(minus, group, reference, beta)) /
                          (2.0 * h);
        const double scale = std::max(std::abs(fd), std::abs(grad[s][k]));
        const double error = std::abs(fd - grad[s][k]);
        if (scale >= kGradientFloor) {
          worst = std::max(worst, error / scale);
          ++components;
        } else {
          // Zero gradient: the difference quotient is round-off only.
          worst_zero = std::max(worst_zero, error);
          ++zero_components;
        }
      }
    }
  }
  return {worst <= kGradientTolerance && worst_zero <= kZeroGradientTolerance,
          fmt("%d points, %zu components max relative error %.3g <= %.0e, %zu zero components max error %.3g <= %.0e",
              points, components, worst, kGradientTolerance, zero_components, worst_zero, kZeroGradientTolerance)};
}

// 8. Learning signal on the frozen dataset.

Outcome learning_signal() {
  const auto data = load_annotations(fs::path(HIERO_TEST_DATA) / "frozen10.jsonl");
  const TrainConfig config;
  const auto result = train(data, config);
  const std::size_t n = result.trace.rows.size();
  const std::size_t w = std::min(kLearningWindow, n);
  const double initial = result.trace.window_mean(0, w);
  const double final = result.trace.window_mean(n - w, w);
  return {final - initial >= kLearningMargin,
          fmt("initial %.4f, final %.4f, margin %.4f >= %.2f", initial, final, final - initial, kLearningMargin)};
}

// 9. Byte-identical CLI outputs across repeated runs.

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), dir).string()] = slurp(entry.path());
  }
  return files;
}

Outcome cli_determinism() {
  const auto root = fs::temp_directory_path() / "hiero_acceptance";
  const std::string cli = HIERO_CLI_PATH;
  const std::string frozen = (fs::path(HIERO_TEST_DATA) / "frozen10.jsonl").string();
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "validate --annotations " + frozen},
      {"gen", "gen --seed 4 --out {out}/gen"},
      {"score", "score --annotations {out}/gen/annotations.jsonl --predictions {out}/gen/reference_predictions.jsonl"
                " --out {out}/scores.jsonl"},
      {"evaluate-json", "evaluate --format json --annotations " + frozen + " --predictions {out}/gen/reference_predictions.jsonl"},
      {"evaluate-csv", "evaluate --format csv --annotations {out}/gen/annotations.jsonl --predictions {out}/gen/reference_predictions.jsonl"},
      {"evaluate-table", "evaluate --format table --annotations {out}/gen/annotations.jsonl --predictions {out}/gen/reference_predictions.jsonl"},
      {"train-sim", "train-sim --annotations " + frozen + " --seed 2 --config {out}/short.cfg --out {out}/train"},
  };
  std::array<std::map<std::string, std::string>, 2> runs;
  std::vector<std::string> failed;
  for (int run = 0; run < 2; ++run) {
    const auto out = root / "run";
    fs::remove_all(out);
    fs::create_directories(out);
    std::ofstream(out / "short.cfg") << "iterations = 60\n";
    for (const auto& [name, args] : commands) {
      std::string expanded = args;
      for (std::size_t at; (at = expanded.find("{out}")) != std::string::npos;) expanded.replace(at, 5, out.string());
      // Runs differ in thread count; outputs must not.
      const std::string cmd = "SOURCE_DATE_EPOCH=0 OMP_NUM_THREADS=" + std::string(run == 0 ? "1" : "4") + " " + cli +
                              " " + expanded + " > " + (out / (name + ".stdout")).string() + " 2>/dev/null";
      const int status = std::system(cmd.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) failed.push_back(name + " exited non-zero");
    }
    runs[run] = snapshot(out);
  }
  std::size_t differing = 0;
  for (const auto& [file, bytes] : runs[0]) {
    const auto it = runs[1].find(file);
    if (it == runs[1].end() || it->second != bytes) {
      ++differing;
      failed.push_back(file + " differs");
    }
  }
  if (runs[0].size() != runs[1].size()) failed.push_back("file sets differ");
  std::string detail = fmt("%zu commands, %zu files compared, %zu differ", commands.size(), runs[0].size(), differing);
  for (const auto& f : failed) detail += "; " + f;
  return {failed.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "reward composition fidelity", 5.0, reward_fidelity},
      {2, "temporal matching oracle", 10.0, matching_oracle},
      {3, "edit distance oracle", 30.0, edit_distance_oracle},
      {4, "format reward over 24 orderings", 0.0, format_orderings},
      {5, "metric oracles", 0.0, metric_oracles},
      {6, "generator/extractor inversion", 0.0, inversion},
      {7, "gradient check", 0.0, gradient_check},
      {8, "learning signal", 60.0, learning_signal},
      {9, "CLI determinism", 0.0, cli_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = outcome.pass;
    std::string timing = fmt("%.2fs", seconds);
    if (c.budget_seconds > 0.0) {
      timing += fmt(" < %.0fs", c.budget_seconds);
      if (seconds >= c.budget_seconds) {
        pass = false;
        timing += " exceeded";
      }
    }
    if (!pass) ++failures;
    std::printf("criterion %d %s: %s (%s) [%s]\n", c.number, pass ? "PASS" : "FAIL", c.name.c_str(),
                outcome.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
