// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hiero/common.hpp"
#include "hiero/config.hpp"
#include "hiero/sar_format.hpp"

namespace hiero {

struct SubActionAnnotation {
  std::string label;
  TimeInterval interval;

  bool operator==(const SubActionAnnotation&) const = default;
};

/// Ground-truth hierarchical annotation of one performed action.
struct ActionInstance {
  std::string id;
  Sport sport = Sport::Diving;
  std::string action_label;
  std::vector<SubActionAnnotation> sub_actions;  // sorted by start, non-overlapping
  double difficulty = 1.0;
  double quality = 0.0;
  double final_score = 0.0;
  std::string prompt;
  std::optional<std::string> reference_answer;

  std::vector<std::string> sub_action_labels() const;
  std::vector<TimeInterval> intervals() const;

  bool operator==(const ActionInstance&) const = default;
};

PredictedAssessment to_assessment(const ActionInstance& instance);

/// Reason the instance breaks an invariant, or nullopt when valid.
/// A non-empty `vocabulary` restricts sub-action labels.
std::optional<std::string> check_instance(const ActionInstance& instance,
                                          const std::vector<std::string>& vocabulary = {});

// ---------------------------------------------------------------------------
// JSONL ingestion

enum class IngestErrorKind { IoFailure, SchemaViolation, InvariantViolation };

std::string_view to_string(IngestErrorKind kind);

class IngestError : public std::runtime_error {
 public:
  IngestError(IngestErrorKind kind, std::size_t line, std::string detail);

  IngestErrorKind kind() const { return kind_; }
  /// 1-based line number; 0 for file-level failures.
  std::size_t line() const { return line_; }
  /// Offending field for schema violations, reason for invariant violations.
  const std::string& detail() const { return detail_; }

 private:
  IngestErrorKind kind_;
  std::size_t line_;
  std::string detail_;
};

struct LoadOptions {
  std::vector<std::string> vocabulary;
};

/// Builds an instance from one decoded JSONL object; throws IngestError.
ActionInstance instance_from_json(const nlohmann::json& object, std::size_t line,
                                  const LoadOptions& options = {});
nlohmann::json instance_to_json(const ActionInstance& instance);

/// Loads every line or throws the first IngestError.
std::vector<ActionInstance> load_annotations(const std::filesystem::path& path,
                                             const LoadOptions& options = {});

struct AnnotationDiagnostic {
  IngestErrorKind kind;
  std::size_t line;
  std::string message;
};

/// Loads what it can and records one diagnostic per bad line.
struct ValidationReport {
  std::vector<ActionInstance> instances;
  std::vector<AnnotationDiagnostic> diagnostics;
};

ValidationReport validate_annotations(const std::filesystem::path& path, const LoadOptions& options = {});

std::string annotations_to_jsonl(std::span<const ActionInstance> instances);
void save_annotations(const std::filesystem::path& path, std::span<const ActionInstance> instances);

// ---------------------------------------------------------------------------
// SAR question-answer generation

/// Consecutive sub-actions narrated as one recognition step.
struct PhaseGroup {
  std::string name;
  std::size_t first = 0;
  std::size_t count = 0;
};

/// Diving with at least three sub-actions groups them as take-off, flight
/// (everything in between), entry. Other cases get one step per sub-action.
std::vector<PhaseGroup> phase_groups(Sport sport, std::size_t n_sub_actions);

/// Template variants for one sport. Placeholders: {action}, {phase},
/// {subactions}, {start}, {end}, {count}, {quality}, {difficulty}, {score}.
struct SportTemplates {
  std::vector<std::string> questions;
  std::vector<std::string> looks;
  std::vector<std::string> observations;
  std::vector<std::string> conclusions;
  std::vector<std::string> assessments;
  std::vector<std::string> summaries;
};

struct TemplateSet {
  std::map<Sport, SportTemplates> by_sport;

  static TemplateSet defaults();
};

struct QaPair {
  std::string question;
  std::string answer;
  std::string source;

  bool operator==(const QaPair&) const = default;
};

class MissingTemplate : public std::runtime_error {
 public:
  explicit MissingTemplate(Sport sport);
  Sport sport() const { return sport_; }

 private:
  Sport sport_;
};

/// Renders an assessment as a SAR document, picking template variants with
/// `rng`. The answer block is format_answer(assessment, schema).
SarDocument render_sar(Sport sport, const PredictedAssessment& assessment,
                       const SportTemplates& templates, Rng& rng,
                       const ExtractionSchema& schema = {});

QaPair generate_qa(const ActionInstance& instance, const TemplateSet& templates, std::uint64_t seed,
                   const ExtractionSchema& schema = {});

nlohmann::json qa_to_json(const QaPair& qa);

// ---------------------------------------------------------------------------
// Synthetic datasets

class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SynthConfig {
  std::size_t n_instances = 10;
  std::vector<Sport> sports = {Sport::Diving};

  std::vector<std::string> dive_labels = {"107B", "205B", "305C", "405B", "5152B", "5253B", "626C", "307C"};
  std::vector<std::string> takeoff_labels = {"forward take-off", "back take-off", "reverse take-off",
                                             "inward take-off"};
  std::vector<std::string> flight_labels = {"pike somersault", "tuck somersault", "twist",
                                            "free position"};
  std::vector<std::string> entry_labels = {"clean entry", "splash entry"};
  double two_flight_probability = 0.3;

  std::vector<std::string> program_labels = {"short program", "free skate"};
  std::vector<std::string> element_labels = {"triple axel", "quad toe loop", "camel spin",
                                             "step sequence", "double lutz", "flying sit spin"};
  std::vector<std::string> routine_labels = {"technical routine", "free routine"};
  std::vector<std::string> segment_labels = {"opening formation", "lift", "hybrid", "pattern change",
                                             "closing pose"};
  std::size_t min_elements = 3;
  std::size_t max_elements = 6;

  /// Sub-action durations and the gaps between them, seconds.
  double min_duration = 5.0;
  double max_duration = 9.0;
  double max_gap = 1.0;

  /// Diving execution sum (three judges) and degree of difficulty.
  double min_quality = 10.0;
  double max_quality = 30.0;
  double min_difficulty = 1.6;
  double max_difficulty = 3.8;
  /// Non-diving sports: total score range.
  double min_total = 40.0;
  double max_total = 120.0;

  static SynthConfig from_config(const KeyValueConfig& config);
  void validate() const;

  std::vector<std::string> sub_action_vocabulary() const;
};

std::vector<ActionInstance> synth_dataset(const SynthConfig& config, std::uint64_t seed);

}  // namespace hiero
