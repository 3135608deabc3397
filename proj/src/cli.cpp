// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#include "hiero/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "hiero/annotations.hpp"
#include "hiero/grpo.hpp"
#include "hiero/kernels.hpp"
#include "hiero/metrics.hpp"
#include "hiero/rewards.hpp"

namespace hiero::cli {
namespace {

namespace fs = std::filesystem;

int exit_code_for(IngestErrorKind kind) {
  switch (kind) {
    case IngestErrorKind::IoFailure:
      return kExitIo;
    case IngestErrorKind::SchemaViolation:
      return kExitSchema;
    case IngestErrorKind::InvariantViolation:
      return kExitInvariant;
  }
  return kExitIo;
}

KeyValueConfig load_optional_config(const std::string& path) {
  return path.empty() ? KeyValueConfig{} : KeyValueConfig::load(path);
}

RewardConfig load_reward_config(const Options& options) {
  auto config = RewardConfig::from_config(load_optional_config(options.weights));
  if (options.strict_temporal) config.strict_temporal = true;
  return config;
}

std::string config_hash(const std::vector<const KeyValueConfig*>& configs, const std::string& flags) {
  std::string canonical;
  for (const auto* c : configs) canonical += c->canonical() + "--\n";
  return hex64(fnv1a(canonical + flags));
}

void emit_manifest(const RunManifest& manifest, const fs::path& path) {
  write_atomic(path, manifest.to_json().dump(2) + "\n");
  spdlog::info("manifest written to {}", path.string());
}

nlohmann::ordered_json breakdown_json(const std::string& id, const RewardBreakdown& b) {
  return {{"id", id},         {"r_form", b.r_form},     {"r_temp", b.r_temp},   {"r_cls", b.r_cls},
          {"r_sub", b.r_sub}, {"r_action", b.r_action}, {"r_score", b.r_score}, {"total", b.total}};
}

void init_logging() {
  static bool initialized = false;
  if (initialized) return;
  initialized = true;
  auto logger = spdlog::stderr_logger_st("hiero");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* level = std::getenv("HIERO_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
}

}  // namespace

nlohmann::ordered_json RunManifest::to_json() const {
  return {{"command", command}, {"config_hash", config_hash}, {"seed", seed},           {"inputs", inputs},
          {"outputs", outputs}, {"tool_version", tool_version}, {"timestamp", timestamp}};
}

std::string current_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    if (const auto value = parse_number(epoch)) now = static_cast<std::time_t>(*value);
  }
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IngestError(IngestErrorKind::IoFailure, 0, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IngestError(IngestErrorKind::IoFailure, 0, "write error on " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::map<std::string, std::string> load_predictions(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError(IngestErrorKind::IoFailure, 0, "cannot open " + path.string());
  std::map<std::string, std::string> predictions;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json object;
    try {
      object = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw IngestError(IngestErrorKind::SchemaViolation, line_no, "<json>");
    }
    if (!object.is_object() || !object.contains("id") || !object["id"].is_string()) {
      throw IngestError(IngestErrorKind::SchemaViolation, line_no, "id");
    }
    if (!object.contains("text") || !object["text"].is_string()) {
      throw IngestError(IngestErrorKind::SchemaViolation, line_no, "text");
    }
    predictions[object["id"].get<std::string>()] = object["text"].get<std::string>();
  }
  return predictions;
}

int cmd_validate(const Options& options, std::ostream& out, std::ostream& err) {
  const auto report = validate_annotations(options.annotations);
  int code = kExitOk;
  for (const auto& d : report.diagnostics) {
    err << d.message << "\n";
    const int c = exit_code_for(d.kind);
    if (code == kExitOk || c < code) code = c;
  }
  if (code == kExitOk) out << "ok: " << report.instances.size() << " instances\n";
  return code;
}

int cmd_score(const Options& options, std::ostream& out, std::ostream& err) {
  std::vector<ActionInstance> instances;
  std::map<std::string, std::string> predictions;
  RewardConfig reward;
  KeyValueConfig weights_file;
  try {
    instances = load_annotations(options.annotations);
    predictions = load_predictions(options.predictions);
    weights_file = load_optional_config(options.weights);
    reward = load_reward_config(options);
  } catch (const IngestError& e) {
    err << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kExitSchema;
  }

  std::vector<ActionInstance> matched;
  std::vector<std::string_view> texts;
  std::map<std::string, bool> used;
  for (const auto& inst : instances) {
    const auto it = predictions.find(inst.id);
    if (it == predictions.end()) {
      err << "no prediction for id " << inst.id << "\n";
      continue;
    }
    matched.push_back(inst);
    texts.push_back(it->second);
    used[inst.id] = true;
  }
  std::size_t unmatched_predictions = 0;
  for (const auto& [id, text] : predictions) {
    if (!used.count(id)) {
      err << "prediction " << id << " has no annotation\n";
      ++unmatched_predictions;
    }
  }
  if (matched.empty()) {
    err << "no prediction ids match the annotations\n";
    return kExitAlignment;
  }

  const auto breakdowns = kernels::score_batch_parallel(matched, texts, reward);
  std::string lines;
  RewardBreakdown sums;
  for (std::size_t i = 0; i < matched.size(); ++i) {
    const auto& b = breakdowns[i];
    lines += breakdown_json(matched[i].id, b).dump() + "\n";
    sums.r_form += b.r_form;
    sums.r_temp += b.r_temp;
    sums.r_cls += b.r_cls;
    sums.r_sub += b.r_sub;
    sums.r_action += b.r_action;
    sums.r_score += b.r_score;
    sums.total += b.total;
  }
  const double n = static_cast<double>(matched.size());
  nlohmann::ordered_json summary = {
      {"matched", matched.size()},
      {"unmatched_annotations", instances.size() - matched.size()},
      {"unmatched_predictions", unmatched_predictions},
      {"means",
       {{"r_form", sums.r_form / n},
        {"r_temp", sums.r_temp / n},
        {"r_cls", sums.r_cls / n},
        {"r_sub", sums.r_sub / n},
        {"r_action", sums.r_action / n},
        {"r_score", sums.r_score / n},
        {"total", sums.total / n}}}};

  try {
    if (options.out.empty()) {
      out << lines;
      err << summary.dump(2) << "\n";
    } else {
      write_atomic(options.out, lines);
      out << summary.dump(2) << "\n";
      RunManifest manifest{"score",
                           config_hash({&weights_file}, options.strict_temporal ? "strict_temporal\n" : ""),
                           0,
                           {options.annotations, options.predictions},
                           {options.out},
                           kToolVersion,
                           current_timestamp()};
      if (!options.weights.empty()) manifest.inputs.push_back(options.weights);
      emit_manifest(manifest, options.out + ".manifest.json");
    }
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

int cmd_evaluate(const Options& options, std::ostream& out, std::ostream& err) {
  if (options.format != "json" && options.format != "csv" && options.format != "table") {
    err << "unknown --format " << options.format << "\n";
    return kExitSchema;
  }
  std::vector<ActionInstance> instances;
  std::map<std::string, std::string> predictions;
  try {
    instances = load_annotations(options.annotations);
    predictions = load_predictions(options.predictions);
  } catch (const IngestError& e) {
    err << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  for (const auto& inst : instances) {
    if (!predictions.count(inst.id)) err << "no prediction for id " << inst.id << "\n";
  }
  const auto report = evaluate(instances, predictions);
  const std::string text = options.format == "json"  ? to_json(report).dump(2) + "\n"
                           : options.format == "csv" ? to_csv(report)
                                                     : to_table(report);
  try {
    if (options.out.empty()) {
      out << text;
    } else {
      write_atomic(options.out, text);
      RunManifest manifest{"evaluate",
                           config_hash({}, "format=" + options.format + "\n"),
                           0,
                           {options.annotations, options.predictions},
                           {options.out},
                           kToolVersion,
                           current_timestamp()};
      emit_manifest(manifest, options.out + ".manifest.json");
    }
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

int cmd_gen(const Options& options, std::ostream& out, std::ostream& err) {
  if (options.out.empty()) {
    err << "gen needs --out <directory>\n";
    return kExitSchema;
  }
  SynthConfig synth;
  KeyValueConfig file;
  try {
    file = load_optional_config(options.config);
    synth = SynthConfig::from_config(file);
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kExitSchema;
  } catch (const InvalidConfig& e) {
    err << e.what() << "\n";
    return kExitSchema;
  }
  const std::uint64_t seed = options.seed.value_or(0);
  auto instances = synth_dataset(synth, seed);
  const auto templates = TemplateSet::defaults();
  std::string qa_lines;
  std::string prediction_lines;
  for (auto& inst : instances) {
    const auto qa = generate_qa(inst, templates, seed ^ fnv1a(inst.id));
    inst.reference_answer = qa.answer;
    qa_lines += qa_to_json(qa).dump() + "\n";
    prediction_lines += nlohmann::ordered_json{{"id", inst.id}, {"text", qa.answer}}.dump() + "\n";
  }
  const fs::path dir(options.out);
  const auto annotations_path = (dir / "annotations.jsonl").string();
  const auto qa_path = (dir / "qa.jsonl").string();
  const auto predictions_path = (dir / "reference_predictions.jsonl").string();
  try {
    write_atomic(annotations_path, annotations_to_jsonl(instances));
    write_atomic(qa_path, qa_lines);
    write_atomic(predictions_path, prediction_lines);
    RunManifest manifest{"gen",
                         config_hash({&file}, ""),
                         seed,
                         {},
                         {annotations_path, qa_path, predictions_path},
                         kToolVersion,
                         current_timestamp()};
    if (!options.config.empty()) manifest.inputs.push_back(options.config);
    emit_manifest(manifest, dir / "manifest.json");
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitIo;
  }
  out << "wrote " << instances.size() << " instances to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_train_sim(const Options& options, std::ostream& out, std::ostream& err) {
  if (options.out.empty()) {
    err << "train-sim needs --out <directory>\n";
    return kExitSchema;
  }
  std::vector<ActionInstance> dataset;
  TrainConfig config;
  RewardConfig reward;
  KeyValueConfig file, weights_file;
  try {
    dataset = load_annotations(options.annotations);
    file = load_optional_config(options.config);
    weights_file = load_optional_config(options.weights);
    config = TrainConfig::from_config(file);
    reward = load_reward_config(options);
    if (options.seed) config.seed = *options.seed;
    if (options.mode) {
      const auto mode = advantage_mode_from_string(*options.mode);
      if (!mode) throw ConfigError("--mode must be best_of_g or group_relative");
      config.mode = *mode;
    }
  } catch (const IngestError& e) {
    err << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kExitSchema;
  }
  if (dataset.empty()) {
    err << "dataset is empty\n";
    return kExitSchema;
  }

  TrainResult result;
  try {
    result = train(dataset, config, reward);
  } catch (const NonFiniteGradient& e) {
    err << e.what() << "\n";
    return kExitNumeric;
  }

  const fs::path dir(options.out);
  const auto trace_path = (dir / "trace.csv").string();
  const auto policy_path = (dir / "policy.json").string();
  try {
    write_atomic(trace_path, result.trace.to_csv());
    write_atomic(policy_path, result.policy.to_json().dump(2) + "\n");
    const std::string flags = "seed=" + std::to_string(config.seed) + "\nmode=" +
                              std::string(to_string(config.mode)) +
                              (options.strict_temporal ? "\nstrict_temporal" : "");
    RunManifest manifest{"train-sim",
                         config_hash({&file, &weights_file}, flags),
                         config.seed,
                         {options.annotations},
                         {trace_path, policy_path},
                         kToolVersion,
                         current_timestamp()};
    if (!options.config.empty()) manifest.inputs.push_back(options.config);
    if (!options.weights.empty()) manifest.inputs.push_back(options.weights);
    emit_manifest(manifest, dir / "manifest.json");
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitIo;
  }

  const auto n = result.trace.rows.size();
  const std::size_t window = std::min<std::size_t>(50, n);
  out << "iterations: " << n << "\n";
  if (n > 0) {
    out << "initial mean reward (first " << window << "): " << format_number(result.trace.window_mean(0, window))
        << "\n";
    out << "final mean reward (last " << window << "): "
        << format_number(result.trace.window_mean(n - window, window)) << "\n";
  }
  return kExitOk;
}

int run(int argc, char** argv) {
  init_logging();
  CLI::App app{"Structured action-assessment toolkit: SAR parsing, rewards, metrics, toy policy optimization"};
  app.require_subcommand(1);
  Options options;

  const auto add_annotations = [&](CLI::App* cmd) {
    cmd->add_option("--annotations", options.annotations, "Annotation JSONL")->required();
  };
  const auto add_predictions = [&](CLI::App* cmd) {
    cmd->add_option("--predictions", options.predictions, "Predictions JSONL ({\"id\",\"text\"})")->required();
  };

  auto* validate = app.add_subcommand("validate", "Check an annotation file");
  add_annotations(validate);

  auto* score = app.add_subcommand("score", "Per-instance reward breakdowns");
  add_annotations(score);
  add_predictions(score);
  score->add_option("--weights", options.weights, "Reward weights config");
  score->add_flag("--strict-temporal", options.strict_temporal, "Penalize unmatched segments");
  score->add_option("--out", options.out, "Breakdown JSONL output");

  auto* eval = app.add_subcommand("evaluate", "Corpus metrics report");
  add_annotations(eval);
  add_predictions(eval);
  eval->add_option("--format", options.format, "json | csv | table")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  eval->add_option("--out", options.out, "Report output file");

  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset with QA pairs");
  gen->add_option("--config", options.config, "Synthetic dataset config");
  gen->add_option("--seed", options.seed, "Random seed");
  gen->add_option("--out", options.out, "Output directory")->required();

  auto* train_sim = app.add_subcommand("train-sim", "Toy policy optimization against the reward suite");
  add_annotations(train_sim);
  train_sim->add_option("--config", options.config, "Training config");
  train_sim->add_option("--weights", options.weights, "Reward weights config");
  train_sim->add_option("--seed", options.seed, "Random seed (overrides config)");
  train_sim->add_option("--mode", options.mode, "best_of_g | group_relative")
      ->check(CLI::IsMember({"best_of_g", "group_relative"}));
  train_sim->add_flag("--strict-temporal", options.strict_temporal, "Penalize unmatched segments");
  train_sim->add_option("--out", options.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSchema;
  }

  try {
    if (*validate) return cmd_validate(options, std::cout, std::cerr);
    if (*score) return cmd_score(options, std::cout, std::cerr);
    if (*eval) return cmd_evaluate(options, std::cout, std::cerr);
    if (*gen) return cmd_gen(options, std::cout, std::cerr);
    if (*train_sim) return cmd_train_sim(options, std::cout, std::cerr);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitIo;
  }
  return kExitSchema;
}

}  // namespace hiero::cli
