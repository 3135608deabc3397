// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hiero::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitSchema = 2,  // also invalid configuration
  kExitInvariant = 3,
  kExitAlignment = 4,
  kExitNumeric = 5,
};

struct Options {
  std::string annotations;
  std::string predictions;
  std::string weights;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool strict_temporal = false;
  std::optional<std::string> mode;  // best_of_g | group_relative
  std::string format = "table";     // json | csv | table
};

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string tool_version = kToolVersion;
  /// UTC, ISO 8601. Taken from SOURCE_DATE_EPOCH when set.
  std::string timestamp;

  nlohmann::ordered_json to_json() const;
};

std::string current_timestamp();

/// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Predictions JSONL: one `{"id", "text"}` object per line.
std::map<std::string, std::string> load_predictions(const std::filesystem::path& path);

int cmd_validate(const Options& options, std::ostream& out, std::ostream& err);
int cmd_score(const Options& options, std::ostream& out, std::ostream& err);
int cmd_evaluate(const Options& options, std::ostream& out, std::ostream& err);
int cmd_gen(const Options& options, std::ostream& out, std::ostream& err);
int cmd_train_sim(const Options& options, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run(int argc, char** argv);

}  // namespace hiero::cli
