// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "hiero/annotations.hpp"
#include "hiero/kernels.hpp"

using namespace hiero;

namespace {

struct Corpus {
  std::vector<ActionInstance> instances;
  std::vector<std::string> texts;
};

Corpus corpus(std::size_t n) {
  SynthConfig config;
  config.n_instances = n;
  config.sports = {Sport::Diving, Sport::FigureSkating, Sport::ArtisticSwimming};
  Corpus c;
  c.instances = synth_dataset(config, 31);
  const auto templates = TemplateSet::defaults();
  Rng rng(2);
  for (const auto& inst : c.instances) {
    auto text = generate_qa(inst, templates, inst.id.size()).answer;
    const double u = rng.uniform();
    if (u < 0.2) text = text.substr(0, text.size() / 2);
    else if (u < 0.4) text.replace(text.find("Score: "), 7, "Score: 1");
    c.texts.push_back(std::move(text));
  }
  return c;
}

}  // namespace

TEST_CASE("parallel batch scoring matches the serial reference") {
  const auto c = corpus(300);
  std::vector<std::string_view> views(c.texts.begin(), c.texts.end());
  for (bool strict : {false, true}) {
    RewardConfig config;
    config.strict_temporal = strict;
    const auto serial = kernels::score_batch_serial(c.instances, views, config);
    const auto parallel = kernels::score_batch_parallel(c.instances, views, config);
    CHECK(serial == parallel);
    REQUIRE(serial.size() == c.instances.size());
    for (std::size_t i = 0; i < serial.size(); i += 37) CHECK(serial[i] == reward_total(c.instances[i], c.texts[i], config));
  }
  CHECK(kernels::max_threads() >= 1);
}

TEST_CASE("parallel instance statistics match the serial reference") {
  const auto c = corpus(300);
  std::vector<const std::string*> ptrs;
  for (std::size_t i = 0; i < c.texts.size(); ++i) ptrs.push_back(i % 50 == 0 ? nullptr : &c.texts[i]);
  const auto serial = kernels::instance_stats_serial(c.instances, ptrs, {});
  const auto parallel = kernels::instance_stats_parallel(c.instances, ptrs, {});
  CHECK(serial == parallel);
  CHECK_FALSE(serial[0].parsed);
}

TEST_CASE("empty batches") {
  CHECK(kernels::score_batch_parallel({}, {}, {}).empty());
  CHECK(kernels::instance_stats_parallel({}, {}, {}).empty());
}
