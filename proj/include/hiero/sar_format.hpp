// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

// Four-stage tagged output grammar:
//
//   <look>...</look>
//   <recognition>
//   Phase: ..., Observation: ..., Conclusion: ...
//   </recognition>
//   <assessment>...</assessment>
//   <answer>...</answer>
//
// plus extraction of the labeled fields in the answer block.

#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hiero/common.hpp"
#include "hiero/config.hpp"

namespace hiero {

inline constexpr std::array<std::string_view, 4> kStageTags = {"look", "recognition", "assessment",
                                                               "answer"};

inline constexpr std::string_view kPhaseMarker = "Phase:";
inline constexpr std::string_view kObservationMarker = "Observation:";
inline constexpr std::string_view kConclusionMarker = "Conclusion:";

struct RecognitionStep {
  std::string phase;
  std::string observation;
  std::string conclusion;

  bool operator==(const RecognitionStep&) const = default;
};

struct SarDocument {
  std::string look;
  std::vector<RecognitionStep> recognition;
  std::string assessment;
  std::string answer;

  bool operator==(const SarDocument&) const = default;
};

enum class ParseErrorKind {
  MissingTag,
  UnclosedTag,
  DuplicateTag,
  TagsOutOfOrder,
  EmptyRecognition,
  MalformedStep,
};

std::string_view to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::string tag, const std::string& detail);

  ParseErrorKind kind() const { return kind_; }
  /// Tag involved, empty when the failure is not about one tag.
  const std::string& tag() const { return tag_; }

 private:
  ParseErrorKind kind_;
  std::string tag_;
};

/// Thrown by serialize_sar when a document cannot be rendered so that it
/// parses back to itself.
class InvariantViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Byte offsets of one tag block within a text.
struct TagSpan {
  std::size_t open = 0;           // position of `<tag>`
  std::size_t content_begin = 0;  // first byte after `<tag>`
  std::size_t content_end = 0;    // position of `</tag>`
  std::size_t close_end = 0;      // first byte after `</tag>`
};

/// Locates the four stage blocks. Throws ParseError for missing, unclosed,
/// repeated, or out-of-order tags. Content is not inspected.
std::array<TagSpan, 4> locate_stage_blocks(std::string_view text);

/// Finds a single balanced `<tag>...</tag>` block regardless of the other
/// tags. Returns the trimmed content, or nullopt if the tag is absent,
/// repeated, or unbalanced.
std::optional<std::string_view> find_block(std::string_view text, std::string_view tag);

SarDocument parse_sar(std::string_view text);

/// Canonical rendering. Throws InvariantViolation for documents that would
/// not round-trip (empty recognition, empty phase, reserved markers inside
/// fields, untrimmed fields).
std::string serialize_sar(const SarDocument& doc);

void validate_document(const SarDocument& doc);

// ---------------------------------------------------------------------------
// Answer-block extraction

/// Key-value conventions of the answer block. With the defaults an answer
/// reads
///
///   Action: 5253B
///   Sub-actions: forward take-off [0,1.5); pike somersault [1.5,3.25); clean entry [3.25,4)
///   Quality: 24
///   Difficulty: 3.2
///   Score: 76.8
///
/// Fields may equally be separated by the list separator on one line.
/// A field's value runs until the next recognized `Label:` key.
struct ExtractionSchema {
  std::string action_label = "Action";
  std::string sub_actions_label = "Sub-actions";
  std::string quality_label = "Quality";
  std::string difficulty_label = "Difficulty";
  std::string score_label = "Score";
  char decimal_separator = '.';
  char list_separator = ';';
  char interval_separator = ',';
  /// Known sub-action labels; empty means any label is accepted.
  std::vector<std::string> vocabulary;

  /// Keys: action_label, sub_actions_label, quality_label, difficulty_label,
  /// score_label, decimal_separator, list_separator, interval_separator,
  /// vocabulary (comma list).
  static ExtractionSchema from_config(const KeyValueConfig& config);
  void validate() const;
};

struct PredictedSubAction {
  std::string label;
  TimeInterval interval;

  bool operator==(const PredictedSubAction&) const = default;
};

struct PredictedAssessment {
  std::string action_label;
  std::vector<PredictedSubAction> sub_actions;
  double quality = 0.0;
  double difficulty = 0.0;
  double final_score = 0.0;
  /// Sub-action labels absent from the schema vocabulary.
  std::vector<std::string> unknown_labels;

  std::vector<std::string> sub_action_labels() const;
  std::vector<TimeInterval> intervals() const;
};

enum class ExtractErrorKind { MissingField, UnparsableNumber, InvalidValue };

std::string_view to_string(ExtractErrorKind kind);

class ExtractError : public std::runtime_error {
 public:
  ExtractError(ExtractErrorKind kind, std::string field, const std::string& detail);

  ExtractErrorKind kind() const { return kind_; }
  /// One of: action, sub_actions, quality, difficulty, score.
  const std::string& field() const { return field_; }

 private:
  ExtractErrorKind kind_;
  std::string field_;
};

/// Per-field extraction result; a field is nullopt when it was missing or
/// corrupt, with the reason recorded in `errors`.
struct PartialAssessment {
  std::optional<std::string> action_label;
  std::optional<std::vector<PredictedSubAction>> sub_actions;
  std::optional<double> quality;
  std::optional<double> difficulty;
  std::optional<double> final_score;
  std::vector<std::string> unknown_labels;
  std::vector<ExtractError> errors;
};

/// Reads every field it can from an answer block. Never throws for
/// malformed content. `Sub-actions:` is optional (absent means an empty
/// sequence); `Quality:` is optional and defaults to score / difficulty.
PartialAssessment extract_fields(std::string_view answer, const ExtractionSchema& schema = {});

/// All-or-nothing variant: throws the first ExtractError.
PredictedAssessment extract_assessment(const SarDocument& doc, const ExtractionSchema& schema = {});

/// Renders the answer block for `assessment` under `schema`; extracting the
/// result gives back the same fields.
std::string format_answer(const PredictedAssessment& assessment, const ExtractionSchema& schema = {});

}  // namespace hiero
