// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#include "hiero/sar_format.hpp"

#include <algorithm>

namespace hiero {
namespace {

std::string open_tag(std::string_view tag) { return "<" + std::string(tag) + ">"; }
std::string close_tag(std::string_view tag) { return "</" + std::string(tag) + ">"; }

std::vector<std::size_t> find_all(std::string_view text, std::string_view needle) {
  std::vector<std::size_t> positions;
  for (auto pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    positions.push_back(pos);
  }
  return positions;
}

std::string_view strip_trailing_comma(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.back() == ',') text = trim(text.substr(0, text.size() - 1));
  return text;
}

RecognitionStep parse_step(std::string_view segment) {
  const auto obs = segment.find(kObservationMarker);
  if (obs == std::string_view::npos) {
    throw ParseError(ParseErrorKind::MalformedStep, "recognition", "step has no `Observation:` field");
  }
  const auto con = segment.find(kConclusionMarker, obs + kObservationMarker.size());
  if (con == std::string_view::npos) {
    throw ParseError(ParseErrorKind::MalformedStep, "recognition", "step has no `Conclusion:` field");
  }
  RecognitionStep step;
  step.phase = std::string(strip_trailing_comma(segment.substr(0, obs)));
  step.observation = std::string(strip_trailing_comma(
      segment.substr(obs + kObservationMarker.size(), con - obs - kObservationMarker.size())));
  step.conclusion = std::string(trim(segment.substr(con + kConclusionMarker.size())));
  if (step.phase.empty()) {
    throw ParseError(ParseErrorKind::MalformedStep, "recognition", "step has an empty phase");
  }
  return step;
}

std::vector<RecognitionStep> parse_recognition(std::string_view content) {
  content = trim(content);
  const auto markers = find_all(content, kPhaseMarker);
  if (markers.empty()) {
    if (content.empty()) {
      throw ParseError(ParseErrorKind::EmptyRecognition, "recognition", "no recognition steps");
    }
    throw ParseError(ParseErrorKind::MalformedStep, "recognition",
                     "recognition text does not start with `Phase:`");
  }
  if (!trim(content.substr(0, markers.front())).empty()) {
    throw ParseError(ParseErrorKind::MalformedStep, "recognition", "text before the first `Phase:`");
  }
  std::vector<RecognitionStep> steps;
  for (std::size_t i = 0; i < markers.size(); ++i) {
    const auto begin = markers[i] + kPhaseMarker.size();
    const auto end = i + 1 < markers.size() ? markers[i + 1] : content.size();
    steps.push_back(parse_step(content.substr(begin, end - begin)));
  }
  return steps;
}

bool contains_any_tag(std::string_view text) {
  for (auto tag : kStageTags) {
    if (text.find(open_tag(tag)) != std::string_view::npos ||
        text.find(close_tag(tag)) != std::string_view::npos) {
      return true;
    }
  }
  return false;
}

void require_clean(std::string_view field_name, std::string_view value) {
  if (trim(value) != value) {
    throw InvariantViolation(std::string(field_name) + " has surrounding whitespace");
  }
  if (contains_any_tag(value)) {
    throw InvariantViolation(std::string(field_name) + " contains a stage tag");
  }
}

void require_no_markers(std::string_view field_name, std::string_view value) {
  for (auto marker : {kPhaseMarker, kObservationMarker, kConclusionMarker}) {
    if (value.find(marker) != std::string_view::npos) {
      throw InvariantViolation(std::string(field_name) + " contains the marker `" +
                               std::string(marker) + "`");
    }
  }
}

bool is_key_boundary(std::string_view text, std::size_t pos, char list_separator) {
  if (pos == 0) return true;
  const char before = text[pos - 1];
  return before == ' ' || before == '\t' || before == '\n' || before == '\r' || before == list_separator;
}

struct KeyHit {
  std::size_t pos;
  std::size_t value_begin;
  int field;
};

std::optional<std::vector<PredictedSubAction>> parse_sub_actions(std::string_view value,
                                                                 const ExtractionSchema& schema,
                                                                 PartialAssessment& out) {
  std::vector<PredictedSubAction> items;
  for (auto item : split(value, schema.list_separator)) {
    item = trim(item);
    if (item.empty()) continue;
    const auto bracket = item.rfind('[');
    if (bracket == std::string_view::npos || item.back() != ')') {
      out.errors.emplace_back(ExtractErrorKind::InvalidValue, "sub_actions",
                              "sub-action `" + std::string(item) + "` lacks a [start,end) interval");
      return std::nullopt;
    }
    const auto label = trim(item.substr(0, bracket));
    const auto body = item.substr(bracket + 1, item.size() - bracket - 2);
    const auto comma = body.find(schema.interval_separator);
    if (label.empty() || comma == std::string_view::npos) {
      out.errors.emplace_back(ExtractErrorKind::InvalidValue, "sub_actions",
                              "malformed sub-action `" + std::string(item) + "`");
      return std::nullopt;
    }
    const auto start = parse_number(body.substr(0, comma), schema.decimal_separator);
    const auto end = parse_number(body.substr(comma + 1), schema.decimal_separator);
    if (!start || !end) {
      out.errors.emplace_back(ExtractErrorKind::UnparsableNumber, "sub_actions",
                              "bad interval bound in `" + std::string(item) + "`");
      return std::nullopt;
    }
    const TimeInterval interval{*start, *end};
    if (!interval.well_formed()) {
      out.errors.emplace_back(ExtractErrorKind::InvalidValue, "sub_actions",
                              "interval in `" + std::string(item) + "` is not a valid [start,end)");
      return std::nullopt;
    }
    std::string text_label(label);
    if (!schema.vocabulary.empty() &&
        std::find(schema.vocabulary.begin(), schema.vocabulary.end(), text_label) ==
            schema.vocabulary.end()) {
      out.unknown_labels.push_back(text_label);
    }
    items.push_back({std::move(text_label), interval});
  }
  return items;
}

}  // namespace

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::MissingTag:
      return "MissingTag";
    case ParseErrorKind::UnclosedTag:
      return "UnclosedTag";
    case ParseErrorKind::DuplicateTag:
      return "DuplicateTag";
    case ParseErrorKind::TagsOutOfOrder:
      return "TagsOutOfOrder";
    case ParseErrorKind::EmptyRecognition:
      return "EmptyRecognition";
    case ParseErrorKind::MalformedStep:
      return "MalformedStep";
  }
  return "Unknown";
}

ParseError::ParseError(ParseErrorKind kind, std::string tag, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + (tag.empty() ? "" : "(" + tag + ")") + ": " +
                         detail),
      kind_(kind),
      tag_(std::move(tag)) {}

std::array<TagSpan, 4> locate_stage_blocks(std::string_view text) {
  std::array<TagSpan, 4> spans{};
  for (std::size_t i = 0; i < kStageTags.size(); ++i) {
    const std::string tag(kStageTags[i]);
    const auto open = open_tag(tag);
    const auto close = close_tag(tag);
    const auto opens = find_all(text, open);
    const auto closes = find_all(text, close);
    if (opens.empty() && closes.empty()) {
      throw ParseError(ParseErrorKind::MissingTag, tag, "tag pair not found");
    }
    if (opens.size() > 1 || closes.size() > 1) {
      throw ParseError(ParseErrorKind::DuplicateTag, tag, "tag appears more than once");
    }
    if (opens.empty()) throw ParseError(ParseErrorKind::MissingTag, tag, "opening tag not found");
    if (closes.empty() || closes.front() < opens.front()) {
      throw ParseError(ParseErrorKind::UnclosedTag, tag, "opening tag is never closed");
    }
    spans[i] = {opens.front(), opens.front() + open.size(), closes.front(),
                closes.front() + close.size()};
  }
  for (std::size_t i = 0; i + 1 < spans.size(); ++i) {
    if (spans[i].close_end > spans[i + 1].open) {
      throw ParseError(ParseErrorKind::TagsOutOfOrder, std::string(kStageTags[i + 1]),
                       "stage blocks are not in look, recognition, assessment, answer order");
    }
  }
  return spans;
}

std::optional<std::string_view> find_block(std::string_view text, std::string_view tag) {
  const auto opens = find_all(text, open_tag(tag));
  const auto closes = find_all(text, close_tag(tag));
  if (opens.size() != 1 || closes.size() != 1 || closes.front() < opens.front()) return std::nullopt;
  const auto begin = opens.front() + tag.size() + 2;
  return trim(text.substr(begin, closes.front() - begin));
}

SarDocument parse_sar(std::string_view text) {
  const auto spans = locate_stage_blocks(text);
  const auto content = [&](std::size_t i) {
    return trim(text.substr(spans[i].content_begin, spans[i].content_end - spans[i].content_begin));
  };
  SarDocument doc;
  doc.look = std::string(content(0));
  doc.recognition = parse_recognition(content(1));
  doc.assessment = std::string(content(2));
  doc.answer = std::string(content(3));
  return doc;
}

void validate_document(const SarDocument& doc) {
  if (doc.recognition.empty()) throw InvariantViolation("recognition has no steps");
  require_clean("look", doc.look);
  require_clean("assessment", doc.assessment);
  require_clean("answer", doc.answer);
  for (const auto& step : doc.recognition) {
    if (step.phase.empty()) throw InvariantViolation("recognition step with empty phase");
    require_clean("phase", step.phase);
    require_clean("observation", step.observation);
    require_clean("conclusion", step.conclusion);
    require_no_markers("phase", step.phase);
    require_no_markers("observation", step.observation);
    require_no_markers("conclusion", step.conclusion);
    if (step.phase.back() == ',' || (!step.observation.empty() && step.observation.back() == ',')) {
      throw InvariantViolation("phase and observation may not end with a comma");
    }
  }
}

std::string serialize_sar(const SarDocument& doc) {
  validate_document(doc);
  std::string out;
  out += "<look>" + doc.look + "</look>\n";
  out += "<recognition>\n";
  for (const auto& step : doc.recognition) {
    out += "Phase: " + step.phase + ", Observation: " + step.observation +
           ", Conclusion: " + step.conclusion + "\n";
  }
  out += "</recognition>\n";
  out += "<assessment>" + doc.assessment + "</assessment>\n";
  out += "<answer>" + doc.answer + "</answer>";
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(ExtractErrorKind kind) {
  switch (kind) {
    case ExtractErrorKind::MissingField:
      return "MissingField";
    case ExtractErrorKind::UnparsableNumber:
      return "UnparsableNumber";
    case ExtractErrorKind::InvalidValue:
      return "InvalidValue";
  }
  return "Unknown";
}

ExtractError::ExtractError(ExtractErrorKind kind, std::string field, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + "(" + field + "): " + detail),
      kind_(kind),
      field_(std::move(field)) {}

ExtractionSchema ExtractionSchema::from_config(const KeyValueConfig& config) {
  config.require_known({"action_label", "sub_actions_label", "quality_label", "difficulty_label",
                        "score_label", "decimal_separator", "list_separator", "interval_separator",
                        "vocabulary"});
  ExtractionSchema schema;
  schema.action_label = config.get_string("action_label", schema.action_label);
  schema.sub_actions_label = config.get_string("sub_actions_label", schema.sub_actions_label);
  schema.quality_label = config.get_string("quality_label", schema.quality_label);
  schema.difficulty_label = config.get_string("difficulty_label", schema.difficulty_label);
  schema.score_label = config.get_string("score_label", schema.score_label);
  const auto single_char = [&](std::string_view key, char fallback) {
    const auto value = config.get_string(key, std::string(1, fallback));
    if (value.size() != 1) throw ConfigError("`" + std::string(key) + "` must be one character");
    return value.front();
  };
  schema.decimal_separator = single_char("decimal_separator", schema.decimal_separator);
  schema.list_separator = single_char("list_separator", schema.list_separator);
  schema.interval_separator = single_char("interval_separator", schema.interval_separator);
  schema.vocabulary = config.get_list("vocabulary", {});
  schema.validate();
  return schema;
}

void ExtractionSchema::validate() const {
  for (const auto* label :
       {&action_label, &sub_actions_label, &quality_label, &difficulty_label, &score_label}) {
    if (label->empty() || label->find(':') != std::string::npos) {
      throw ConfigError("field labels must be non-empty and contain no `:`");
    }
  }
  if (decimal_separator == list_separator || decimal_separator == interval_separator ||
      list_separator == interval_separator) {
    throw ConfigError("decimal, list and interval separators must be distinct");
  }
}

std::vector<std::string> PredictedAssessment::sub_action_labels() const {
  std::vector<std::string> labels;
  labels.reserve(sub_actions.size());
  for (const auto& s : sub_actions) labels.push_back(s.label);
  return labels;
}

std::vector<TimeInterval> PredictedAssessment::intervals() const {
  std::vector<TimeInterval> out;
  out.reserve(sub_actions.size());
  for (const auto& s : sub_actions) out.push_back(s.interval);
  return out;
}

PartialAssessment extract_fields(std::string_view answer, const ExtractionSchema& schema) {
  enum Field { kAction, kSubActions, kQuality, kDifficulty, kScore, kFieldCount };
  const std::array<std::string, kFieldCount> keys = {
      schema.action_label + ":", schema.sub_actions_label + ":", schema.quality_label + ":",
      schema.difficulty_label + ":", schema.score_label + ":"};
  static constexpr std::array<std::string_view, kFieldCount> kNames = {
      "action", "sub_actions", "quality", "difficulty", "score"};

  std::vector<KeyHit> hits;
  std::array<bool, kFieldCount> seen{};
  for (int f = 0; f < kFieldCount; ++f) {
    for (auto pos : find_all(answer, keys[f])) {
      if (!is_key_boundary(answer, pos, schema.list_separator)) continue;
      hits.push_back({pos, pos + keys[f].size(), f});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const KeyHit& a, const KeyHit& b) { return a.pos < b.pos; });

  std::array<std::optional<std::string_view>, kFieldCount> raw{};
  for (std::size_t i = 0; i < hits.size(); ++i) {
    const auto& hit = hits[i];
    if (seen[hit.field]) continue;
    seen[hit.field] = true;
    const auto end = i + 1 < hits.size() ? hits[i + 1].pos : answer.size();
    auto value = trim(answer.substr(hit.value_begin, end - hit.value_begin));
    while (!value.empty() && value.back() == schema.list_separator) {
      value = trim(value.substr(0, value.size() - 1));
    }
    raw[hit.field] = value;
  }

  PartialAssessment out;
  const auto missing = [&](int f) {
    out.errors.emplace_back(ExtractErrorKind::MissingField, std::string(kNames[f]),
                            "no `" + keys[f] + "` field in the answer");
  };
  const auto number = [&](int f) -> std::optional<double> {
    if (!raw[f]) {
      missing(f);
      return std::nullopt;
    }
    auto value = parse_number(*raw[f], schema.decimal_separator);
    if (!value) {
      out.errors.emplace_back(ExtractErrorKind::UnparsableNumber, std::string(kNames[f]),
                              "cannot read `" + std::string(*raw[f]) + "` as a number");
    }
    return value;
  };

  if (raw[kAction] && !raw[kAction]->empty()) {
    out.action_label = std::string(*raw[kAction]);
  } else {
    missing(kAction);
  }

  out.sub_actions = raw[kSubActions] ? parse_sub_actions(*raw[kSubActions], schema, out)
                                     : std::vector<PredictedSubAction>{};

  out.final_score = number(kScore);
  out.difficulty = number(kDifficulty);
  if (out.difficulty && *out.difficulty <= 0.0) {
    out.errors.emplace_back(ExtractErrorKind::InvalidValue, "difficulty", "difficulty must be positive");
    out.difficulty.reset();
  }
  if (raw[kQuality]) {
    out.quality = number(kQuality);
  } else if (out.final_score && out.difficulty) {
    out.quality = *out.final_score / *out.difficulty;
  }
  return out;
}

PredictedAssessment extract_assessment(const SarDocument& doc, const ExtractionSchema& schema) {
  auto partial = extract_fields(doc.answer, schema);
  if (!partial.errors.empty()) throw partial.errors.front();
  PredictedAssessment out;
  out.action_label = std::move(*partial.action_label);
  out.sub_actions = std::move(*partial.sub_actions);
  out.quality = *partial.quality;
  out.difficulty = *partial.difficulty;
  out.final_score = *partial.final_score;
  out.unknown_labels = std::move(partial.unknown_labels);
  return out;
}

std::string format_answer(const PredictedAssessment& assessment, const ExtractionSchema& schema) {
  const auto reserved = [&](std::string_view label) {
    return label.empty() || trim(label) != label || label.find(':') != std::string_view::npos ||
           label.find('\n') != std::string_view::npos ||
           label.find(schema.list_separator) != std::string_view::npos ||
           label.find('[') != std::string_view::npos || contains_any_tag(label);
  };
  if (reserved(assessment.action_label)) {
    throw InvariantViolation("action label `" + assessment.action_label + "` cannot be rendered");
  }
  const auto num = [&](double v) { return format_number(v, schema.decimal_separator); };
  std::string out = schema.action_label + ": " + assessment.action_label + "\n";
  out += schema.sub_actions_label + ":";
  for (std::size_t i = 0; i < assessment.sub_actions.size(); ++i) {
    const auto& sub = assessment.sub_actions[i];
    if (reserved(sub.label)) {
      throw InvariantViolation("sub-action label `" + sub.label + "` cannot be rendered");
    }
    out += i == 0 ? " " : std::string(1, schema.list_separator) + " ";
    out += sub.label + " [" + num(sub.interval.start) + schema.interval_separator +
           num(sub.interval.end) + ")";
  }
  out += "\n";
  out += schema.quality_label + ": " + num(assessment.quality) + "\n";
  out += schema.difficulty_label + ": " + num(assessment.difficulty) + "\n";
  out += schema.score_label + ": " + num(assessment.final_score);
  return out;
}

}  // namespace hiero
