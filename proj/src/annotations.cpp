// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#include "hiero/annotations.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace hiero {
namespace {

using nlohmann::json;

bool renderable_label(std::string_view label) {
  return !label.empty() && trim(label) == label && label.find_first_of(":;[\n") == std::string_view::npos;
}

const json& require_field(const json& object, const char* field, std::size_t line) {
  const auto it = object.find(field);
  if (it == object.end()) throw IngestError(IngestErrorKind::SchemaViolation, line, field);
  return *it;
}

std::string require_string(const json& object, const char* field, std::size_t line) {
  const auto& value = require_field(object, field, line);
  if (!value.is_string()) throw IngestError(IngestErrorKind::SchemaViolation, line, field);
  return value.get<std::string>();
}

double require_number(const json& object, const char* field, std::size_t line) {
  const auto& value = require_field(object, field, line);
  if (!value.is_number()) throw IngestError(IngestErrorKind::SchemaViolation, line, field);
  return value.get<double>();
}

std::string fill(std::string text, const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    const std::string placeholder = "{" + key + "}";
    for (auto pos = text.find(placeholder); pos != std::string::npos;
         pos = text.find(placeholder, pos + value.size())) {
      text.replace(pos, placeholder.size(), value);
    }
  }
  return text;
}

const std::string& pick(const std::vector<std::string>& variants, Rng& rng) {
  return variants[rng.index(variants.size())];
}

double round_to(double value, double step) {
  const double inverse = std::round(1.0 / step);
  return std::round(value * inverse) / inverse;
}

std::string prompt_for(Sport sport) {
  switch (sport) {
    case Sport::Diving:
      return "Watch the dive, reason through each phase, and give the dive number, sub-actions, "
             "execution, difficulty and final score.";
    case Sport::FigureSkating:
      return "Watch the skating program, identify each element in order, and give the program "
             "type, elements, scores and final score.";
    case Sport::ArtisticSwimming:
      return "Watch the team routine, identify its segments, and give the routine type, segments, "
             "scores and final score.";
  }
  return {};
}

}  // namespace

std::vector<std::string> ActionInstance::sub_action_labels() const {
  std::vector<std::string> labels;
  labels.reserve(sub_actions.size());
  for (const auto& s : sub_actions) labels.push_back(s.label);
  return labels;
}

std::vector<TimeInterval> ActionInstance::intervals() const {
  std::vector<TimeInterval> out;
  out.reserve(sub_actions.size());
  for (const auto& s : sub_actions) out.push_back(s.interval);
  return out;
}

PredictedAssessment to_assessment(const ActionInstance& instance) {
  PredictedAssessment out;
  out.action_label = instance.action_label;
  for (const auto& s : instance.sub_actions) out.sub_actions.push_back({s.label, s.interval});
  out.quality = instance.quality;
  out.difficulty = instance.difficulty;
  out.final_score = instance.final_score;
  return out;
}

std::optional<std::string> check_instance(const ActionInstance& instance,
                                          const std::vector<std::string>& vocabulary) {
  if (instance.id.empty()) return "empty id";
  if (!renderable_label(instance.action_label)) {
    return "action_label must be non-empty, trimmed, and free of `:`, `;`, `[` and newlines";
  }
  for (std::size_t i = 0; i < instance.sub_actions.size(); ++i) {
    const auto& sub = instance.sub_actions[i];
    if (!renderable_label(sub.label)) {
      return "sub_actions[" + std::to_string(i) +
             "].label must be non-empty, trimmed, and free of `:`, `;`, `[` and newlines";
    }
    if (!vocabulary.empty() &&
        std::find(vocabulary.begin(), vocabulary.end(), sub.label) == vocabulary.end()) {
      return "sub_actions[" + std::to_string(i) + "].label `" + sub.label + "` not in vocabulary";
    }
    if (!sub.interval.well_formed()) {
      return "sub_actions[" + std::to_string(i) + "] interval must satisfy 0 <= start < end";
    }
    if (i > 0 && instance.sub_actions[i - 1].interval.end > sub.interval.start) {
      return "sub_actions[" + std::to_string(i) + "] overlaps or precedes the previous sub-action";
    }
  }
  if (!(std::isfinite(instance.difficulty) && instance.difficulty > 0.0)) return "difficulty must be > 0";
  if (!std::isfinite(instance.quality)) return "quality must be finite";
  if (!(std::isfinite(instance.final_score) && instance.final_score >= 0.0)) {
    return "final_score must be >= 0";
  }
  if (instance.sport == Sport::Diving &&
      (instance.sub_actions.size() < 3 || instance.sub_actions.size() > 4)) {
    return "a dive needs take-off, one or two flight sub-actions, and entry (3-4 sub-actions)";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::string_view to_string(IngestErrorKind kind) {
  switch (kind) {
    case IngestErrorKind::IoFailure:
      return "IoFailure";
    case IngestErrorKind::SchemaViolation:
      return "SchemaViolation";
    case IngestErrorKind::InvariantViolation:
      return "InvariantViolation";
  }
  return "Unknown";
}

IngestError::IngestError(IngestErrorKind kind, std::size_t line, std::string detail)
    : std::runtime_error(std::string(to_string(kind)) +
                         (line > 0 ? " at line " + std::to_string(line) : std::string()) + ": " +
                         (kind == IngestErrorKind::SchemaViolation ? "field `" + detail + "`" : detail)),
      kind_(kind),
      line_(line),
      detail_(std::move(detail)) {}

ActionInstance instance_from_json(const json& object, std::size_t line, const LoadOptions& options) {
  if (!object.is_object()) throw IngestError(IngestErrorKind::SchemaViolation, line, "<object>");
  if (const auto it = object.find("schema_version"); it != object.end()) {
    if (!it->is_number_integer() || it->get<int>() != 1) {
      throw IngestError(IngestErrorKind::SchemaViolation, line, "schema_version");
    }
  }
  ActionInstance inst;
  inst.id = require_string(object, "id", line);
  const auto sport = sport_from_string(require_string(object, "sport", line));
  if (!sport) throw IngestError(IngestErrorKind::SchemaViolation, line, "sport");
  inst.sport = *sport;
  inst.action_label = require_string(object, "action_label", line);
  const auto& subs = require_field(object, "sub_actions", line);
  if (!subs.is_array()) throw IngestError(IngestErrorKind::SchemaViolation, line, "sub_actions");
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const auto& sub = subs[i];
    const auto prefix = "sub_actions[" + std::to_string(i) + "].";
    if (!sub.is_object()) throw IngestError(IngestErrorKind::SchemaViolation, line, "sub_actions");
    const auto field = [&](const char* name) -> const json& {
      const auto it = sub.find(name);
      if (it == sub.end()) throw IngestError(IngestErrorKind::SchemaViolation, line, prefix + name);
      return *it;
    };
    const auto& label = field("label");
    const auto& start = field("start");
    const auto& end = field("end");
    if (!label.is_string()) throw IngestError(IngestErrorKind::SchemaViolation, line, prefix + "label");
    if (!start.is_number()) throw IngestError(IngestErrorKind::SchemaViolation, line, prefix + "start");
    if (!end.is_number()) throw IngestError(IngestErrorKind::SchemaViolation, line, prefix + "end");
    inst.sub_actions.push_back({label.get<std::string>(), {start.get<double>(), end.get<double>()}});
  }
  inst.difficulty = require_number(object, "difficulty", line);
  inst.quality = require_number(object, "quality", line);
  inst.final_score = require_number(object, "final_score", line);
  inst.prompt = require_string(object, "prompt", line);
  if (const auto it = object.find("reference_answer"); it != object.end() && !it->is_null()) {
    if (!it->is_string()) throw IngestError(IngestErrorKind::SchemaViolation, line, "reference_answer");
    inst.reference_answer = it->get<std::string>();
  }
  if (auto reason = check_instance(inst, options.vocabulary)) {
    throw IngestError(IngestErrorKind::InvariantViolation, line, *reason);
  }
  return inst;
}

json instance_to_json(const ActionInstance& instance) {
  json subs = json::array();
  for (const auto& s : instance.sub_actions) {
    subs.push_back({{"label", s.label}, {"start", s.interval.start}, {"end", s.interval.end}});
  }
  json out = {{"id", instance.id},
              {"sport", std::string(to_string(instance.sport))},
              {"action_label", instance.action_label},
              {"sub_actions", std::move(subs)},
              {"difficulty", instance.difficulty},
              {"quality", instance.quality},
              {"final_score", instance.final_score},
              {"prompt", instance.prompt}};
  if (instance.reference_answer) out["reference_answer"] = *instance.reference_answer;
  return out;
}

namespace {

void require_unique_id(std::set<std::string>& ids, const std::string& id, std::size_t line) {
  if (!ids.insert(id).second) throw IngestError(IngestErrorKind::InvariantViolation, line, "duplicate id " + id);
}

}  // namespace

ValidationReport validate_annotations(const std::filesystem::path& path, const LoadOptions& options) {
  ValidationReport report;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    report.diagnostics.push_back({IngestErrorKind::IoFailure, 0, "cannot open " + path.string()});
    return report;
  }
  std::set<std::string> ids;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (trim(text).empty()) continue;
    try {
      const auto object = json::parse(text);
      auto inst = instance_from_json(object, line_no, options);
      require_unique_id(ids, inst.id, line_no);
      report.instances.push_back(std::move(inst));
    } catch (const json::parse_error& e) {
      report.diagnostics.push_back({IngestErrorKind::SchemaViolation, line_no,
                                    "line " + std::to_string(line_no) + ": invalid JSON: " + e.what()});
    } catch (const IngestError& e) {
      report.diagnostics.push_back({e.kind(), e.line(), e.what()});
    }
  }
  if (in.bad()) report.diagnostics.push_back({IngestErrorKind::IoFailure, 0, "read error on " + path.string()});
  return report;
}

std::vector<ActionInstance> load_annotations(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError(IngestErrorKind::IoFailure, 0, "cannot open " + path.string());
  std::vector<ActionInstance> instances;
  std::set<std::string> ids;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (trim(text).empty()) continue;
    json object;
    try {
      object = json::parse(text);
    } catch (const json::parse_error&) {
      throw IngestError(IngestErrorKind::SchemaViolation, line_no, "<json>");
    }
    auto inst = instance_from_json(object, line_no, options);
    require_unique_id(ids, inst.id, line_no);
    instances.push_back(std::move(inst));
  }
  if (in.bad()) throw IngestError(IngestErrorKind::IoFailure, 0, "read error on " + path.string());
  return instances;
}

std::string annotations_to_jsonl(std::span<const ActionInstance> instances) {
  std::string out;
  for (const auto& inst : instances) {
    out += instance_to_json(inst).dump();
    out += '\n';
  }
  return out;
}

void save_annotations(const std::filesystem::path& path, std::span<const ActionInstance> instances) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IngestError(IngestErrorKind::IoFailure, 0, "cannot write " + path.string());
  out << annotations_to_jsonl(instances);
  if (!out) throw IngestError(IngestErrorKind::IoFailure, 0, "write error on " + path.string());
}

// ---------------------------------------------------------------------------

std::vector<PhaseGroup> phase_groups(Sport sport, std::size_t n_sub_actions) {
  std::vector<PhaseGroup> groups;
  if (sport == Sport::Diving && n_sub_actions >= 3) {
    groups.push_back({"take-off", 0, 1});
    groups.push_back({"flight", 1, n_sub_actions - 2});
    groups.push_back({"entry", n_sub_actions - 1, 1});
    return groups;
  }
  const std::string stem = sport == Sport::FigureSkating      ? "element "
                           : sport == Sport::ArtisticSwimming ? "segment "
                                                              : "phase ";
  for (std::size_t i = 0; i < n_sub_actions; ++i) groups.push_back({stem + std::to_string(i + 1), i, 1});
  return groups;
}

TemplateSet TemplateSet::defaults() {
  TemplateSet set;
  set.by_sport[Sport::Diving] = {
      .questions = {"Assess this dive step by step.",
                    "Analyze the dive in the video and score it."},
      .looks = {"A single diver stands on the platform and prepares to perform dive {action}.",
                "The clip shows one athlete on the board about to execute dive {action} in {count} parts."},
      .observations = {"the diver performs {subactions} between {start}s and {end}s",
                       "from {start}s to {end}s the athlete executes {subactions}"},
      .conclusions = {"the {phase} is identified as {subactions}",
                      "this {phase} phase matches {subactions}"},
      .assessments = {"The judges' execution sum is {quality} and the degree of difficulty is "
                      "{difficulty}, giving a final score of {score}.",
                      "Execution totals {quality}; multiplied by difficulty {difficulty} the dive "
                      "scores {score}."},
      .summaries = {"Overall the dive is recognised as {action}.",
                    "Final decision for dive {action}."},
  };
  set.by_sport[Sport::FigureSkating] = {
      .questions = {"Assess this skating program element by element.",
                    "Identify the program elements and score the performance."},
      .looks = {"A single skater begins a {action} with {count} elements on the ice.",
                "The video shows one skater performing a {action}."},
      .observations = {"the skater performs {subactions} between {start}s and {end}s",
                       "from {start}s to {end}s the skater executes {subactions}"},
      .conclusions = {"{phase} is recognised as {subactions}",
                      "the {phase} corresponds to {subactions}"},
      .assessments = {"The technical score is {quality} with program coefficient {difficulty}, and "
                      "the combined total is {score}.",
                      "Elements earn {quality} under coefficient {difficulty}; the final total is {score}."},
      .summaries = {"The program is a {action}.", "Final decision for the {action}."},
  };
  set.by_sport[Sport::ArtisticSwimming] = {
      .questions = {"Assess this team routine segment by segment.",
                    "Identify the routine segments and score the performance."},
      .looks = {"Eight swimmers start a {action} from the opening formation.",
                "A team of eight athletes performs a {action} with {count} segments."},
      .observations = {"the team performs {subactions} between {start}s and {end}s",
                       "from {start}s to {end}s the swimmers execute {subactions}"},
      .conclusions = {"{phase} is recognised as {subactions}",
                      "the {phase} corresponds to {subactions}"},
      .assessments = {"Execution scores {quality} with difficulty factor {difficulty}, for a total "
                      "of {score}.",
                      "The panel awards {quality} for execution at difficulty {difficulty}; the "
                      "routine totals {score}."},
      .summaries = {"The routine is a {action}.", "Final decision for the {action}."},
  };
  return set;
}

MissingTemplate::MissingTemplate(Sport sport)
    : std::runtime_error("no templates for sport " + std::string(to_string(sport))), sport_(sport) {}

SarDocument render_sar(Sport sport, const PredictedAssessment& assessment,
                       const SportTemplates& templates, Rng& rng, const ExtractionSchema& schema) {
  for (const auto* variants : {&templates.looks, &templates.observations, &templates.conclusions,
                               &templates.assessments, &templates.summaries}) {
    if (variants->empty()) throw MissingTemplate(sport);
  }
  const auto num = [&](double v) { return format_number(v, schema.decimal_separator); };
  std::map<std::string, std::string> values = {
      {"action", assessment.action_label},
      {"count", std::to_string(assessment.sub_actions.size())},
      {"quality", num(assessment.quality)},
      {"difficulty", num(assessment.difficulty)},
      {"score", num(assessment.final_score)},
  };

  SarDocument doc;
  doc.look = fill(pick(templates.looks, rng), values);
  const auto groups = phase_groups(sport, assessment.sub_actions.size());
  if (groups.empty()) {
    doc.recognition.push_back({"overall", "no distinct sub-actions are visible",
                               "the action is judged as a whole"});
  }
  for (const auto& group : groups) {
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < group.count; ++k) labels.push_back(assessment.sub_actions[group.first + k].label);
    auto step_values = values;
    step_values["phase"] = group.name;
    step_values["subactions"] = join(labels, " and ");
    step_values["start"] = num(assessment.sub_actions[group.first].interval.start);
    step_values["end"] = num(assessment.sub_actions[group.first + group.count - 1].interval.end);
    doc.recognition.push_back({group.name, fill(pick(templates.observations, rng), step_values),
                               fill(pick(templates.conclusions, rng), step_values)});
  }
  doc.assessment = fill(pick(templates.assessments, rng), values);
  doc.answer = fill(pick(templates.summaries, rng), values) + "\n" + format_answer(assessment, schema);
  return doc;
}

QaPair generate_qa(const ActionInstance& instance, const TemplateSet& templates, std::uint64_t seed,
                   const ExtractionSchema& schema) {
  const auto it = templates.by_sport.find(instance.sport);
  if (it == templates.by_sport.end()) throw MissingTemplate(instance.sport);
  const auto& sport_templates = it->second;
  if (instance.prompt.empty() && sport_templates.questions.empty()) throw MissingTemplate(instance.sport);
  Rng rng(seed);
  QaPair qa;
  qa.question = instance.prompt.empty() ? pick(sport_templates.questions, rng) : instance.prompt;
  qa.answer = serialize_sar(render_sar(instance.sport, to_assessment(instance), sport_templates, rng, schema));
  qa.source = instance.id;
  return qa;
}

json qa_to_json(const QaPair& qa) {
  return {{"question", qa.question}, {"answer", qa.answer}, {"source", qa.source}};
}

// ---------------------------------------------------------------------------

SynthConfig SynthConfig::from_config(const KeyValueConfig& config) {
  try {
    config.require_known({"n_instances", "sports", "dive_labels", "takeoff_labels", "flight_labels",
                          "entry_labels", "two_flight_probability", "program_labels", "element_labels",
                          "routine_labels", "segment_labels", "min_elements", "max_elements",
                          "min_duration", "max_duration", "max_gap", "min_quality", "max_quality",
                          "min_difficulty", "max_difficulty", "min_total", "max_total"});
    SynthConfig c;
    const long n = config.get_int("n_instances", static_cast<long>(c.n_instances));
    if (n < 0) throw InvalidConfig("n_instances must be >= 0");
    c.n_instances = static_cast<std::size_t>(n);
    if (config.contains("sports")) {
      c.sports.clear();
      for (const auto& name : config.get_list("sports", {})) {
        const auto sport = sport_from_string(name);
        if (!sport) throw InvalidConfig("unknown sport `" + name + "`");
        c.sports.push_back(*sport);
      }
    }
    c.dive_labels = config.get_list("dive_labels", c.dive_labels);
    c.takeoff_labels = config.get_list("takeoff_labels", c.takeoff_labels);
    c.flight_labels = config.get_list("flight_labels", c.flight_labels);
    c.entry_labels = config.get_list("entry_labels", c.entry_labels);
    c.two_flight_probability = config.get_double("two_flight_probability", c.two_flight_probability);
    c.program_labels = config.get_list("program_labels", c.program_labels);
    c.element_labels = config.get_list("element_labels", c.element_labels);
    c.routine_labels = config.get_list("routine_labels", c.routine_labels);
    c.segment_labels = config.get_list("segment_labels", c.segment_labels);
    const long min_el = config.get_int("min_elements", static_cast<long>(c.min_elements));
    const long max_el = config.get_int("max_elements", static_cast<long>(c.max_elements));
    if (min_el < 1 || max_el < min_el) throw InvalidConfig("need 1 <= min_elements <= max_elements");
    c.min_elements = static_cast<std::size_t>(min_el);
    c.max_elements = static_cast<std::size_t>(max_el);
    c.min_duration = config.get_double("min_duration", c.min_duration);
    c.max_duration = config.get_double("max_duration", c.max_duration);
    c.max_gap = config.get_double("max_gap", c.max_gap);
    c.min_quality = config.get_double("min_quality", c.min_quality);
    c.max_quality = config.get_double("max_quality", c.max_quality);
    c.min_difficulty = config.get_double("min_difficulty", c.min_difficulty);
    c.max_difficulty = config.get_double("max_difficulty", c.max_difficulty);
    c.min_total = config.get_double("min_total", c.min_total);
    c.max_total = config.get_double("max_total", c.max_total);
    c.validate();
    return c;
  } catch (const ConfigError& e) {
    throw InvalidConfig(e.what());
  }
}

void SynthConfig::validate() const {
  if (sports.empty()) throw InvalidConfig("sports must not be empty");
  for (const auto* vocab : {&dive_labels, &takeoff_labels, &flight_labels, &entry_labels, &program_labels,
                            &element_labels, &routine_labels, &segment_labels}) {
    if (vocab->empty()) throw InvalidConfig("label vocabularies must not be empty");
    for (const auto& label : *vocab) {
      if (!renderable_label(label)) throw InvalidConfig("label `" + label + "` is not renderable");
    }
  }
  if (!(two_flight_probability >= 0.0 && two_flight_probability <= 1.0)) {
    throw InvalidConfig("two_flight_probability must be in [0,1]");
  }
  if (min_elements < 1 || max_elements < min_elements) {
    throw InvalidConfig("need 1 <= min_elements <= max_elements");
  }
  if (!(min_duration > 0.0 && max_duration >= min_duration)) {
    throw InvalidConfig("need 0 < min_duration <= max_duration");
  }
  if (!(max_gap >= 0.0)) throw InvalidConfig("max_gap must be >= 0");
  if (!(min_quality >= 0.0 && std::ceil(2 * min_quality) <= std::floor(2 * max_quality))) {
    throw InvalidConfig("quality range must be non-negative and contain a multiple of 0.5");
  }
  if (!(min_difficulty > 0.0 && std::ceil(10 * min_difficulty) <= std::floor(10 * max_difficulty))) {
    throw InvalidConfig("difficulty range must be positive and contain a multiple of 0.1");
  }
  if (!(min_total >= 0.0 && max_total >= min_total)) throw InvalidConfig("need 0 <= min_total <= max_total");
}

std::vector<std::string> SynthConfig::sub_action_vocabulary() const {
  std::vector<std::string> vocab;
  for (const auto* list : {&takeoff_labels, &flight_labels, &entry_labels, &element_labels, &segment_labels}) {
    for (const auto& label : *list) {
      if (std::find(vocab.begin(), vocab.end(), label) == vocab.end()) vocab.push_back(label);
    }
  }
  return vocab;
}

std::vector<ActionInstance> synth_dataset(const SynthConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  const auto choose = [&](const std::vector<std::string>& v) { return v[rng.index(v.size())]; };
  const long q_lo = static_cast<long>(std::ceil(2 * config.min_quality));
  const long q_hi = static_cast<long>(std::floor(2 * config.max_quality));
  const long d_lo = static_cast<long>(std::ceil(10 * config.min_difficulty));
  const long d_hi = static_cast<long>(std::floor(10 * config.max_difficulty));

  std::vector<ActionInstance> out;
  out.reserve(config.n_instances);
  for (std::size_t i = 0; i < config.n_instances; ++i) {
    ActionInstance inst;
    std::ostringstream id;
    id << "synth-" << std::setw(5) << std::setfill('0') << i;
    inst.id = id.str();
    inst.sport = config.sports[rng.index(config.sports.size())];
    inst.prompt = prompt_for(inst.sport);

    std::vector<std::string> labels;
    switch (inst.sport) {
      case Sport::Diving: {
        inst.action_label = choose(config.dive_labels);
        labels.push_back(choose(config.takeoff_labels));
        const int n_flight = rng.bernoulli(config.two_flight_probability) ? 2 : 1;
        for (int k = 0; k < n_flight; ++k) labels.push_back(choose(config.flight_labels));
        labels.push_back(choose(config.entry_labels));
        inst.quality = 0.5 * static_cast<double>(rng.integer(q_lo, q_hi));
        inst.difficulty = static_cast<double>(rng.integer(d_lo, d_hi)) / 10.0;
        inst.final_score = inst.quality * inst.difficulty;
        break;
      }
      case Sport::FigureSkating:
      case Sport::ArtisticSwimming: {
        const bool skating = inst.sport == Sport::FigureSkating;
        inst.action_label = choose(skating ? config.program_labels : config.routine_labels);
        const auto n = static_cast<std::size_t>(
            rng.integer(static_cast<long>(config.min_elements), static_cast<long>(config.max_elements)));
        for (std::size_t k = 0; k < n; ++k) {
          labels.push_back(choose(skating ? config.element_labels : config.segment_labels));
        }
        inst.final_score = round_to(rng.uniform(config.min_total, config.max_total), 0.01);
        inst.quality = round_to(inst.final_score * rng.uniform(0.45, 0.6), 0.01);
        inst.difficulty = static_cast<double>(rng.integer(d_lo, d_hi)) / 10.0;
        break;
      }
    }

    double t = round_to(rng.uniform(0.0, config.max_gap), 0.01);
    for (auto& label : labels) {
      const double duration = round_to(rng.uniform(config.min_duration, config.max_duration), 0.01);
      const double end = round_to(t + std::max(duration, 0.01), 0.01);
      inst.sub_actions.push_back({std::move(label), {t, end}});
      t = round_to(end + rng.uniform(0.0, config.max_gap), 0.01);
    }
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace hiero
