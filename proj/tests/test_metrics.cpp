// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hiero/annotations.hpp"
#include "hiero/metrics.hpp"
#include "oracles.hpp"

using namespace hiero;
using Seq = std::vector<std::string>;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n, bool ties) {
  std::vector<double> v(n);
  for (auto& x : v) x = ties ? static_cast<double>(rng.integer(0, 4)) : rng.uniform(-5.0, 5.0);
  return v;
}

std::map<std::string, std::string> reference_predictions(const std::vector<ActionInstance>& instances) {
  const auto templates = TemplateSet::defaults();
  std::map<std::string, std::string> out;
  for (const auto& inst : instances) out[inst.id] = generate_qa(inst, templates, fnv1a(inst.id)).answer;
  return out;
}

std::string answer_for(const PredictedAssessment& a) {
  SarDocument doc{"l", {{"p", "o", "c"}}, "a", format_answer(a)};
  return serialize_sar(doc);
}

ActionInstance make(std::string id, std::string label, Seq subs, double difficulty, double score) {
  ActionInstance inst;
  inst.id = std::move(id);
  inst.sport = Sport::Diving;
  inst.action_label = std::move(label);
  double t = 0.0;
  for (auto& s : subs) {
    inst.sub_actions.push_back({s, {t, t + 1.0}});
    t += 1.0;
  }
  inst.difficulty = difficulty;
  inst.final_score = score;
  inst.quality = score / difficulty;
  return inst;
}

}  // namespace

TEST_CASE("accuracy") {
  CHECK(action_accuracy(std::vector<LabelPair>{{"a", "a"}, {"b", "b"}}) == 1.0);
  CHECK(action_accuracy(std::vector<LabelPair>{{"a", "x"}, {"b", std::nullopt}}) == 0.0);
  CHECK(action_accuracy(std::vector<LabelPair>{{"a", "a"}, {"b", "b"}, {"c", "c"}, {"d", "e"}}) == 0.75);
  CHECK_THROWS_AS(action_accuracy(std::vector<LabelPair>{}), MetricError);
}

TEST_CASE("sub-action edit similarity") {
  CHECK(sed(Seq{"a", "b"}, Seq{"a", "b"}) == 1.0);
  CHECK(sed(Seq{"a", "b", "c"}, Seq{"a", "c"}) == doctest::Approx(0.6667).epsilon(1e-4));
  CHECK(sed(Seq{"a", "b", "c"}, Seq{"a", "c"}) == 1.0 - 1.0 / 3.0);
  CHECK(sed(Seq{"a"}, Seq{}) == 0.0);
  CHECK(sed(Seq{}, Seq{}) == 1.0);
  CHECK(sed(Seq{"t", "f", "f", "e"}, Seq{"t", "f", "e"}) == 0.75);
}

TEST_CASE("average ranks") {
  CHECK(average_ranks(std::vector<double>{10, 30, 20}) == std::vector<double>{1, 3, 2});
  CHECK(average_ranks(std::vector<double>{5, 5, 1, 5}) == std::vector<double>{3, 3, 1, 3});
}

TEST_CASE("spearman examples and errors") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> rev(x.rbegin(), x.rend());
  CHECK(spearman(x, x) == 1.0);
  CHECK(spearman(x, rev) == -1.0);
  CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 1, 1, 1, 1}), MetricError);
  CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 2}), MetricError);
  try {
    spearman(std::vector<double>{3}, std::vector<double>{3});
    FAIL("expected MetricError");
  } catch (const MetricError& e) {
    CHECK(e.kind() == MetricErrorKind::Undefined);
  }
}

TEST_CASE("spearman agrees with rank-then-pearson") {
  Rng rng(33);
  int checked = 0;
  while (checked < 200) {
    const std::size_t n = 2 + rng.index(19);
    const bool ties = checked % 2 == 0;
    const auto x = random_vector(rng, n, ties);
    const auto y = random_vector(rng, n, ties);
    const auto distinct = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      return std::unique(v.begin(), v.end()) - v.begin() > 1;
    };
    if (!distinct(x) || !distinct(y)) continue;
    CHECK(std::abs(spearman(x, y) - oracle::spearman(x, y)) <= 1e-9);
    ++checked;
  }
}

TEST_CASE("spearman is rank-invariant and antisymmetric") {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 3 + rng.index(15);
    const auto x = random_vector(rng, n, false);
    const auto y = random_vector(rng, n, i % 2 == 0);
    std::vector<double> tx(n), ty(n), flipped(n);
    for (std::size_t k = 0; k < n; ++k) {
      tx[k] = std::exp(x[k]);
      ty[k] = 3.0 * y[k] * y[k] * y[k] + 1.0;
    }
    const double rho = spearman(x, y);
    CHECK(spearman(tx, ty) == doctest::Approx(rho).epsilon(1e-12));
    const auto ranks = average_ranks(x);
    for (std::size_t k = 0; k < n; ++k) flipped[k] = static_cast<double>(n) + 1.0 - ranks[k];
    CHECK(spearman(y, flipped) == doctest::Approx(-spearman(y, x)).epsilon(1e-12));
    CHECK(rho >= -1.0);
    CHECK(rho <= 1.0);
  }
}

TEST_CASE("relative l2") {
  const std::vector<double> gts = {10, 20, 30};
  CHECK(relative_l2(gts, gts, {10, 30}) == 0.0);
  CHECK(relative_l2(std::vector<double>{12, 20, 27}, gts, {10, 30}) == doctest::Approx(0.08333).epsilon(1e-4));
  CHECK(relative_l2(std::vector<double>{12, 20, 27}, gts, {10, 30}) ==
        doctest::Approx(5.0 / 3.0 / 20.0).epsilon(1e-15));
  CHECK(relative_l2(std::vector<double>{0}, std::vector<double>{20}, {0, 20}) == 1.0);
  CHECK_THROWS_AS(relative_l2(gts, gts, {5, 5}), MetricError);
  CHECK_THROWS_AS(relative_l2(std::vector<double>{1}, gts, {0, 1}), MetricError);

  // Scaling the errors by c with a fixed range scales the metric by c.
  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 1 + rng.index(10);
    std::vector<double> truth(n), base(n), scaled(n);
    const double c = std::ldexp(1.0, static_cast<int>(rng.integer(-3, 3)));
    for (std::size_t k = 0; k < n; ++k) {
      truth[k] = rng.uniform(0.0, 100.0);
      const double err = rng.uniform(-10.0, 10.0);
      base[k] = truth[k] + err;
      scaled[k] = truth[k] + c * err;
    }
    CHECK(relative_l2(scaled, truth, {0, 100}) == doctest::Approx(c * relative_l2(base, truth, {0, 100})).epsilon(1e-12));
  }
}

TEST_CASE("token overlap similarity") {
  CHECK(token_overlap_similarity("A b c", "a B c") == 1.0);
  CHECK(token_overlap_similarity("a b", "c d") == 0.0);
  CHECK(token_overlap_similarity("a b c", "b c d") == 0.5);
}

TEST_CASE("oracle predictions score perfectly") {
  SynthConfig config;
  config.n_instances = 30;
  const auto instances = synth_dataset(config, 4);
  const auto report = evaluate(instances, reference_predictions(instances));
  CHECK(report.action_accuracy == 1.0);
  CHECK(report.sed_mean == 1.0);
  CHECK(report.spearman_score == 1.0);
  CHECK(report.rl2_score == 0.0);
  CHECK(report.spearman_difficulty.has_value());
  CHECK(report.rl2_difficulty == 0.0);
  CHECK(report.n_parse_failed == 0);
  CHECK(report.n_total == 30);
  CHECK(report.n_difficulty == 30);
}

TEST_CASE("empty predictions count as failures") {
  SynthConfig config;
  const auto instances = synth_dataset(config, 4);
  std::map<std::string, std::string> empty;
  for (const auto& inst : instances) empty[inst.id] = "";
  for (const auto& preds : {empty, std::map<std::string, std::string>{}}) {
    const auto report = evaluate(instances, preds);
    CHECK(report.action_accuracy == 0.0);
    CHECK(report.sed_mean == 0.0);
    CHECK(report.n_parse_failed == report.n_total);
    CHECK(report.rl2_score == 1.0);
  }
}

TEST_CASE("hand-computed corpus") {
  // Two categories, ranges: A scores {40, 60} -> 20; B scores {50, 90} -> 40.
  const std::vector<ActionInstance> gts = {
      make("i1", "A", {"t", "f", "e"}, 2.0, 40.0),
      make("i2", "A", {"t", "f", "e"}, 3.0, 60.0),
      make("i3", "B", {"t", "f", "f", "e"}, 2.5, 50.0),
      make("i4", "B", {"t", "f", "e"}, 3.5, 90.0),
  };
  std::map<std::string, std::string> preds;
  auto a1 = to_assessment(gts[0]);
  a1.final_score = 44.0;  // |err| 4 / 20
  preds["i1"] = answer_for(a1);
  auto a2 = to_assessment(gts[1]);
  a2.action_label = "B";  // mismatch
  a2.difficulty = 2.0;
  preds["i2"] = answer_for(a2);
  auto a3 = to_assessment(gts[2]);
  a3.sub_actions.erase(a3.sub_actions.begin() + 1);  // SED 3/4
  a3.final_score = 40.0;                             // |err| 10 / 40
  preds["i3"] = answer_for(a3);
  preds["i4"] = "garbage";

  const auto r = evaluate(gts, preds);
  CHECK(r.action_accuracy == 0.5);
  CHECK(r.sed_mean == doctest::Approx((1.0 + 1.0 + 0.75 + 0.0) / 4.0).epsilon(1e-15));
  CHECK(*r.rl2_score == doctest::Approx((4.0 / 20.0 + 0.0 + 10.0 / 40.0 + 1.0) / 4.0).epsilon(1e-15));
  CHECK(r.n_parse_failed == 1);
  // Predicted scores 44, 60, 40, -inf against 40, 60, 50, 90.
  const double rho = oracle::spearman({40, 60, 50, 90}, {44, 60, 40, -1e300});
  CHECK(*r.spearman_score == doctest::Approx(rho).epsilon(1e-12));
  // Difficulty ranges: A {2, 3} and B {2.5, 3.5}, both 1.
  CHECK(*r.rl2_difficulty == doctest::Approx((0.0 + 1.0 + 0.0 + 1.0) / 4.0).epsilon(1e-15));
}

TEST_CASE("singleton categories fall back to the corpus range") {
  const std::vector<ActionInstance> gts = {make("a", "X", {"t", "f", "e"}, 2.0, 30.0),
                                           make("b", "Y", {"t", "f", "e"}, 3.0, 80.0)};
  std::map<std::string, std::string> preds;
  auto p = to_assessment(gts[0]);
  p.final_score = 35.0;
  preds["a"] = answer_for(p);
  preds["b"] = answer_for(to_assessment(gts[1]));
  CHECK(*evaluate(gts, preds).rl2_score == doctest::Approx(5.0 / 50.0 / 2.0).epsilon(1e-15));
}

TEST_CASE("injected corruption rates are recovered") {
  SynthConfig config;
  config.n_instances = 100;
  const auto instances = synth_dataset(config, 21);
  auto preds = reference_predictions(instances);
  std::size_t mislabeled = 0, failed = 0;
  double sed_sum = 0.0;
  Rng rng(1);
  for (const auto& inst : instances) {
    const double u = rng.uniform();
    auto a = to_assessment(inst);
    if (u < 0.2) {
      a.action_label = inst.action_label + "X";
      ++mislabeled;
      preds[inst.id] = answer_for(a);
      sed_sum += 1.0;
    } else if (u < 0.3) {
      preds[inst.id] = "<look>truncated";
      ++failed;
    } else if (u < 0.5) {
      a.sub_actions.pop_back();
      preds[inst.id] = answer_for(a);
      sed_sum += 1.0 - 1.0 / static_cast<double>(inst.sub_actions.size());
    } else {
      sed_sum += 1.0;
    }
  }
  const auto r = evaluate(instances, preds);
  CHECK(r.action_accuracy == static_cast<double>(100 - mislabeled - failed) / 100.0);
  CHECK(r.n_parse_failed == failed);
  CHECK(r.sed_mean == doctest::Approx(sed_sum / 100.0).epsilon(1e-12));
}

TEST_CASE("evaluate is invariant to instance order and thread mode") {
  SynthConfig config;
  config.n_instances = 50;
  config.sports = {Sport::Diving, Sport::FigureSkating};
  auto instances = synth_dataset(config, 9);
  auto preds = reference_predictions(instances);
  Rng rng(3);
  for (auto& [id, text] : preds) {
    if (rng.bernoulli(0.3)) text = "broken";
  }
  EvaluateOptions serial;
  serial.parallel = false;
  const auto base = evaluate(instances, preds, serial);
  for (int i = 0; i < 10; ++i) {
    for (std::size_t k = instances.size() - 1; k > 0; --k) std::swap(instances[k], instances[rng.index(k + 1)]);
    CHECK(evaluate(instances, preds) == base);
  }
}

TEST_CASE("content similarity hook") {
  SynthConfig config;
  auto instances = synth_dataset(config, 1);
  const auto preds = reference_predictions(instances);
  for (auto& inst : instances) inst.reference_answer = preds.at(inst.id);
  EvaluateOptions options;
  options.content_similarity = token_overlap_similarity;
  CHECK(evaluate(instances, preds, options).content_similarity == 1.0);
  CHECK_FALSE(evaluate(instances, preds).content_similarity.has_value());
}

TEST_CASE("report renderings") {
  MetricsReport r;
  r.action_accuracy = 0.5;
  r.sed_mean = 0.75;
  r.spearman_score = 0.25;
  r.n_total = 4;
  r.n_parse_failed = 1;
  const auto j = to_json(r);
  CHECK(j["action_assessment"]["action_accuracy"] == 0.5);
  CHECK(j["difficulty_assessment"]["spearman"].is_null());
  CHECK(j["counts"]["n_parse_failed"] == 1);
  CHECK(to_table(r).find("0.7500") != std::string::npos);
  const auto csv = to_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}
