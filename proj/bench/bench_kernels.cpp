// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

// Serial vs OpenMP kernels on a synthetic corpus. Arg = instance count.

#include <benchmark/benchmark.h>

#include <string>
#include <string_view>
#include <vector>

#include "hiero/annotations.hpp"
#include "hiero/kernels.hpp"

namespace {

using namespace hiero;

struct Corpus {
  std::vector<ActionInstance> instances;
  std::vector<std::string> answers;
  std::vector<std::string_view> views;
  std::vector<const std::string*> pointers;
};

Corpus make_corpus(std::size_t n) {
  SynthConfig config;
  config.n_instances = n;
  config.sports = {Sport::Diving, Sport::FigureSkating, Sport::ArtisticSwimming};
  Corpus c;
  c.instances = synth_dataset(config, 11);
  const auto templates = TemplateSet::defaults();
  for (const auto& inst : c.instances) c.answers.push_back(generate_qa(inst, templates, fnv1a(inst.id)).answer);
  for (const auto& a : c.answers) {
    c.views.push_back(a);
    c.pointers.push_back(&a);
  }
  return c;
}

void score_serial(benchmark::State& state) {
  const auto c = make_corpus(static_cast<std::size_t>(state.range(0)));
  const RewardConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::score_batch_serial(c.instances, c.views, config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void score_parallel(benchmark::State& state) {
  const auto c = make_corpus(static_cast<std::size_t>(state.range(0)));
  const RewardConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::score_batch_parallel(c.instances, c.views, config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = kernels::max_threads();
}

void stats_serial(benchmark::State& state) {
  const auto c = make_corpus(static_cast<std::size_t>(state.range(0)));
  const ExtractionSchema schema;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::instance_stats_serial(c.instances, c.pointers, schema));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void stats_parallel(benchmark::State& state) {
  const auto c = make_corpus(static_cast<std::size_t>(state.range(0)));
  const ExtractionSchema schema;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::instance_stats_parallel(c.instances, c.pointers, schema));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = kernels::max_threads();
}

}  // namespace

BENCHMARK(score_serial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(score_parallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(stats_serial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(stats_parallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
