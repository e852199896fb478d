#pragma once

// Domain types shared by every stage of the pipeline: API outputs, decision
// summaries, decision outcomes and samples, plus summary validation and the
// canonical JSON forms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace chameleon {

using json = nlohmann::ordered_json;

enum class ErrorCode : std::uint8_t {
  InvalidInput,      // malformed JSON, bad flag values, broken invariants
  KindMismatch,      // label output given to a range summary or vice versa
  AmbiguousSample,   // ground truth has no defined decision
  Unsupported,       // construct outside the accepted grammar / render forms
  DimensionMismatch,
  NumericFailure,    // non-finite loss or weights
  ModelFormat,       // bad magic, version or checksum in a model file
  NotFound,
  Conflict,          // e.g. a training job already in flight
  Unavailable,
  Io,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid_input";
    case ErrorCode::KindMismatch: return "kind_mismatch";
    case ErrorCode::AmbiguousSample: return "ambiguous_sample";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::NumericFailure: return "numeric_failure";
    case ErrorCode::ModelFormat: return "model_format";
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::Conflict: return "conflict";
    case ErrorCode::Unavailable: return "unavailable";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define CHAMELEON_REQUIRE(cond, code, msg)            \
  do {                                                \
    if (!(cond)) throw ::chameleon::Error((code), (msg)); \
  } while (0)

// ---------------------------------------------------------------------------
// API output

struct LabelScore {
  std::string name;
  double score = 0.0;

  friend bool operator==(const LabelScore&, const LabelScore&) = default;
};

/// Scored label list as returned by the classification API, or a single
/// scalar for value-range APIs. Always canonical: score descending, ties by
/// name ascending, names unique.
class ApiOutput {
 public:
  ApiOutput() = default;

  static ApiOutput from_labels(std::vector<LabelScore> items) {
    for (const auto& item : items) {
      CHAMELEON_REQUIRE(!item.name.empty(), ErrorCode::InvalidInput, "label name is empty");
      CHAMELEON_REQUIRE(std::isfinite(item.score) && item.score >= 0.0 && item.score <= 1.0,
                        ErrorCode::InvalidInput,
                        "score of label '" + item.name + "' outside [0,1]");
    }
    std::sort(items.begin(), items.end(), canonical_less);
    for (std::size_t i = 1; i < items.size(); ++i) {
      CHAMELEON_REQUIRE(items[i].name != items[i - 1].name, ErrorCode::InvalidInput,
                        "duplicate label '" + items[i].name + "'");
    }
    ApiOutput out;
    out.items_ = std::move(items);
    return out;
  }

  static ApiOutput from_scalar(double value) {
    CHAMELEON_REQUIRE(std::isfinite(value), ErrorCode::InvalidInput, "scalar output not finite");
    ApiOutput out;
    out.scalar_ = value;
    return out;
  }

  static bool canonical_less(const LabelScore& a, const LabelScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.name < b.name;
  }

  const std::vector<LabelScore>& items() const noexcept { return items_; }
  bool is_scalar() const noexcept { return scalar_.has_value(); }
  double scalar() const { return scalar_.value(); }

  /// Keeps the order of the canonical list, so the result is canonical too.
  ApiOutput keep_if_score_at_least(double theta) const {
    ApiOutput out = *this;
    std::erase_if(out.items_, [theta](const LabelScore& l) { return l.score < theta; });
    return out;
  }

  friend bool operator==(const ApiOutput&, const ApiOutput&) = default;

 private:
  std::vector<LabelScore> items_;
  std::optional<double> scalar_;
};

// ---------------------------------------------------------------------------
// Decision summary

struct ValueRange {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_inclusive = true;
  bool hi_inclusive = true;

  bool contains(double x) const {
    const bool above = lo_inclusive ? x >= lo : x > lo;
    const bool below = hi_inclusive ? x <= hi : x < hi;
    return above && below;
  }

  friend bool operator==(const ValueRange&, const ValueRange&) = default;
};

/// Label list in declaration order.
using LabelSet = std::vector<std::string>;

struct TargetClass {
  std::string name;
  std::variant<LabelSet, ValueRange> matcher;

  bool is_label_set() const { return std::holds_alternative<LabelSet>(matcher); }
  bool is_range() const { return std::holds_alternative<ValueRange>(matcher); }
  const LabelSet& labels() const { return std::get<LabelSet>(matcher); }
  const ValueRange& range() const { return std::get<ValueRange>(matcher); }

  bool has_label(std::string_view label) const {
    const auto& l = labels();
    return std::find(l.begin(), l.end(), label) != l.end();
  }

  friend bool operator==(const TargetClass&, const TargetClass&) = default;
};

enum class DecisionType : std::uint8_t { TrueFalse, MultiChoice, MultiSelect };
enum class MappingOrder : std::uint8_t { ApiOutput, AppChoice, NotApplicable };

inline constexpr double kDefaultTheta = 0.5;

struct DecisionSummary {
  std::string app_id;
  DecisionType decision_type = DecisionType::MultiChoice;
  MappingOrder order = MappingOrder::ApiOutput;
  std::vector<TargetClass> classes;  // declaration order is priority order
  double theta = kDefaultTheta;

  bool is_range_kind() const { return !classes.empty() && classes.front().is_range(); }

  const TargetClass* find_class(std::string_view name) const {
    for (const auto& c : classes)
      if (c.name == name) return &c;
    return nullptr;
  }

  friend bool operator==(const DecisionSummary&, const DecisionSummary&) = default;
};

inline const char* to_string(DecisionType t) {
  switch (t) {
    case DecisionType::TrueFalse: return "true_false";
    case DecisionType::MultiChoice: return "multi_choice";
    case DecisionType::MultiSelect: return "multi_select";
  }
  return "?";
}

inline const char* to_string(MappingOrder o) {
  switch (o) {
    case MappingOrder::ApiOutput: return "api_output";
    case MappingOrder::AppChoice: return "app_choice";
    case MappingOrder::NotApplicable: return "n/a";
  }
  return "?";
}

inline DecisionType parse_decision_type(std::string_view s) {
  if (s == "true_false") return DecisionType::TrueFalse;
  if (s == "multi_choice") return DecisionType::MultiChoice;
  if (s == "multi_select") return DecisionType::MultiSelect;
  throw Error(ErrorCode::InvalidInput, "unknown decision_type '" + std::string(s) + "'");
}

inline MappingOrder parse_mapping_order(std::string_view s) {
  if (s == "api_output") return MappingOrder::ApiOutput;
  if (s == "app_choice") return MappingOrder::AppChoice;
  if (s == "n/a") return MappingOrder::NotApplicable;
  throw Error(ErrorCode::InvalidInput, "unknown order '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Decision outcome

struct DecisionOutcome {
  enum class Kind : std::uint8_t { Bool, Chosen, Selected, Ambiguous };

  Kind kind = Kind::Chosen;
  bool flag = false;                  // Bool
  std::optional<std::string> chosen;  // Chosen; nullopt is NONE
  std::set<std::string> selected;     // Selected

  static DecisionOutcome boolean(bool b) {
    DecisionOutcome o;
    o.kind = Kind::Bool;
    o.flag = b;
    return o;
  }
  static DecisionOutcome choice(std::optional<std::string> name) {
    DecisionOutcome o;
    o.kind = Kind::Chosen;
    o.chosen = std::move(name);
    return o;
  }
  static DecisionOutcome none() { return choice(std::nullopt); }
  static DecisionOutcome selection(std::set<std::string> names) {
    DecisionOutcome o;
    o.kind = Kind::Selected;
    o.selected = std::move(names);
    return o;
  }
  static DecisionOutcome ambiguous() {
    DecisionOutcome o;
    o.kind = Kind::Ambiguous;
    return o;
  }

  bool is_ambiguous() const { return kind == Kind::Ambiguous; }

  friend bool operator==(const DecisionOutcome&, const DecisionOutcome&) = default;
};

inline json to_json(const DecisionOutcome& o) {
  json j;
  switch (o.kind) {
    case DecisionOutcome::Kind::Bool:
      j["kind"] = "bool";
      j["value"] = o.flag;
      break;
    case DecisionOutcome::Kind::Chosen:
      j["kind"] = "chosen";
      j["value"] = o.chosen ? json(*o.chosen) : json(nullptr);
      break;
    case DecisionOutcome::Kind::Selected:
      j["kind"] = "selected";
      j["value"] = json::array();
      for (const auto& s : o.selected) j["value"].push_back(s);
      break;
    case DecisionOutcome::Kind::Ambiguous:
      j["kind"] = "ambiguous";
      j["value"] = nullptr;
      break;
  }
  return j;
}

inline DecisionOutcome outcome_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const json& v = j.at("value");
    if (kind == "bool") return DecisionOutcome::boolean(v.get<bool>());
    if (kind == "chosen")
      return v.is_null() ? DecisionOutcome::none() : DecisionOutcome::choice(v.get<std::string>());
    if (kind == "selected") return DecisionOutcome::selection(v.get<std::set<std::string>>());
    if (kind == "ambiguous") return DecisionOutcome::ambiguous();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("bad outcome JSON: ") + e.what());
  }
  throw Error(ErrorCode::InvalidInput, "unknown outcome kind");
}

inline std::string describe(const DecisionOutcome& o) { return to_json(o).dump(); }

// ---------------------------------------------------------------------------
// Sample

struct Sample {
  std::string id;
  std::vector<double> features;
  std::set<std::string> truth_labels;
  std::optional<double> truth_scalar;

  friend bool operator==(const Sample&, const Sample&) = default;
};

inline json to_json(const Sample& s) {
  json j;
  j["id"] = s.id;
  j["features"] = s.features;
  j["truth_labels"] = json::array();
  for (const auto& l : s.truth_labels) j["truth_labels"].push_back(l);
  if (s.truth_scalar) j["truth_scalar"] = *s.truth_scalar;
  return j;
}

inline Sample sample_from_json(const json& j) {
  Sample s;
  try {
    s.id = j.at("id").get<std::string>();
    s.features = j.at("features").get<std::vector<double>>();
    if (j.contains("truth_labels")) {
      for (const auto& l : j.at("truth_labels")) s.truth_labels.insert(l.get<std::string>());
    }
    if (j.contains("truth_scalar")) s.truth_scalar = j.at("truth_scalar").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("bad sample JSON: ") + e.what());
  }
  for (double f : s.features)
    CHAMELEON_REQUIRE(std::isfinite(f), ErrorCode::InvalidInput, "sample '" + s.id + "' has non-finite feature");
  return s;
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string path;
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }

  bool mentions(std::string_view needle) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) {
      return v.message.find(needle) != std::string::npos;
    });
  }
  std::string to_string() const {
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += v.path + ": " + v.message;
    }
    return out;
  }
};

inline ValidationReport validate_summary(const DecisionSummary& s) {
  ValidationReport report;
  auto fail = [&](std::string path, std::string msg) {
    report.violations.push_back({std::move(path), std::move(msg)});
  };

  if (s.app_id.empty()) fail("app_id", "app_id must be non-empty");
  if (!(std::isfinite(s.theta) && s.theta > 0.0 && s.theta < 1.0))
    fail("theta", "theta must lie in (0,1)");

  const std::size_t n = s.classes.size();
  switch (s.decision_type) {
    case DecisionType::TrueFalse:
      if (n != 1) fail("classes", "TRUE_FALSE requires exactly 1 class");
      break;
    case DecisionType::MultiChoice:
      if (n < 2) fail("classes", "MULTI_CHOICE requires >= 2 classes");
      break;
    case DecisionType::MultiSelect:
      if (n < 1) fail("classes", "MULTI_SELECT requires >= 1 class");
      break;
  }

  const bool multi_choice = s.decision_type == DecisionType::MultiChoice;
  if (multi_choice && s.order == MappingOrder::NotApplicable)
    fail("order", "MULTI_CHOICE requires api_output or app_choice order");
  if (!multi_choice && s.order != MappingOrder::NotApplicable)
    fail("order", "order must be n/a unless decision type is MULTI_CHOICE");

  std::size_t label_sets = 0;
  std::size_t ranges = 0;
  std::set<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = s.classes[i];
    const std::string path = "classes[" + std::to_string(i) + "]";
    if (c.name.empty()) fail(path + ".name", "class name must be non-empty");
    if (!names.insert(c.name).second) fail(path + ".name", "duplicate class name '" + c.name + "'");
    if (c.is_label_set()) {
      ++label_sets;
      const auto& labels = c.labels();
      if (labels.empty()) fail(path + ".labels", "label set must be non-empty");
      std::set<std::string> seen;
      for (std::size_t j = 0; j < labels.size(); ++j) {
        if (labels[j].empty()) fail(path + ".labels[" + std::to_string(j) + "]", "label must be non-empty");
        if (!seen.insert(labels[j]).second)
          fail(path + ".labels[" + std::to_string(j) + "]", "duplicate label '" + labels[j] + "'");
      }
    } else {
      ++ranges;
      const auto& r = c.range();
      if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) fail(path + ".range", "range bounds must be finite");
      else if (r.lo > r.hi) fail(path + ".range", "range requires lo <= hi");
    }
  }
  if (label_sets > 0 && ranges > 0)
    fail("classes", "no mixing of label_set and value_range classes");
  if (ranges > 0) {
    const bool allowed = s.decision_type == DecisionType::TrueFalse ||
                         (multi_choice && s.order == MappingOrder::AppChoice);
    if (!allowed)
      fail("classes", "value_range classes require TRUE_FALSE or MULTI_CHOICE with app_choice order");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Summary JSON (canonical form: fixed field order, 2-space indent, trailing newline)

inline json to_json(const DecisionSummary& s) {
  json j;
  j["app_id"] = s.app_id;
  j["decision_type"] = to_string(s.decision_type);
  j["order"] = to_string(s.order);
  j["theta"] = s.theta;
  j["classes"] = json::array();
  for (const auto& c : s.classes) {
    json cj;
    cj["name"] = c.name;
    if (c.is_label_set()) {
      cj["labels"] = c.labels();
    } else {
      const auto& r = c.range();
      json rj;
      rj["lo"] = r.lo;
      rj["hi"] = r.hi;
      rj["lo_inclusive"] = r.lo_inclusive;
      rj["hi_inclusive"] = r.hi_inclusive;
      cj["range"] = rj;
    }
    j["classes"].push_back(cj);
  }
  return j;
}

inline std::string serialize_summary(const DecisionSummary& s) { return to_json(s).dump(2) + "\n"; }

/// Structural decode only; call validate_summary for the semantic invariants.
inline DecisionSummary summary_from_json(const json& j) {
  DecisionSummary s;
  try {
    s.app_id = j.at("app_id").get<std::string>();
    s.decision_type = parse_decision_type(j.at("decision_type").get<std::string>());
    s.order = parse_mapping_order(j.at("order").get<std::string>());
    s.theta = j.contains("theta") ? j.at("theta").get<double>() : kDefaultTheta;
    for (const auto& cj : j.at("classes")) {
      TargetClass c;
      c.name = cj.at("name").get<std::string>();
      const bool has_labels = cj.contains("labels");
      const bool has_range = cj.contains("range");
      CHAMELEON_REQUIRE(has_labels != has_range, ErrorCode::InvalidInput,
                        "class '" + c.name + "' must have exactly one of labels/range");
      if (has_labels) {
        c.matcher = cj.at("labels").get<LabelSet>();
      } else {
        const auto& rj = cj.at("range");
        ValueRange r;
        r.lo = rj.at("lo").get<double>();
        r.hi = rj.at("hi").get<double>();
        r.lo_inclusive = rj.value("lo_inclusive", true);
        r.hi_inclusive = rj.value("hi_inclusive", true);
        c.matcher = r;
      }
      s.classes.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("bad summary JSON: ") + e.what());
  }
  return s;
}

inline DecisionSummary parse_summary(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("summary is not valid JSON: ") + e.what());
  }
  return summary_from_json(j);
}

/// Decodes and validates; throws InvalidInput listing every violation.
inline DecisionSummary load_valid_summary(std::string_view text) {
  DecisionSummary s = parse_summary(text);
  const auto report = validate_summary(s);
  CHAMELEON_REQUIRE(report.ok(), ErrorCode::InvalidInput, "invalid summary: " + report.to_string());
  return s;
}

inline json to_json(const ApiOutput& o) {
  json j;
  if (o.is_scalar()) {
    j["scalar"] = o.scalar();
    return j;
  }
  j["labels"] = json::array();
  for (const auto& l : o.items()) j["labels"].push_back({{"name", l.name}, {"score", l.score}});
  return j;
}

inline ApiOutput output_from_json(const json& j) {
  try {
    if (j.contains("scalar")) return ApiOutput::from_scalar(j.at("scalar").get<double>());
    std::vector<LabelScore> items;
    for (const auto& lj : j.at("labels"))
      items.push_back({lj.at("name").get<std::string>(), lj.at("score").get<double>()});
    return ApiOutput::from_labels(std::move(items));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("bad output JSON: ") + e.what());
  }
}

}  // namespace chameleon
