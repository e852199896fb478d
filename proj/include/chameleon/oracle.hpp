#pragma once

// Executable semantics of the application decision process
// Decision(.) = App(Filter(.)) for every decision type and mapping order.

#include <algorithm>
#include <set>
#include <string>

#include "chameleon/core.hpp"

namespace chameleon {

struct FilterConfig {
  double theta = kDefaultTheta;
};

/// Drops labels scored below theta. The boundary is inclusive.
inline ApiOutput filter_output(const ApiOutput& output, FilterConfig cfg) {
  if (output.is_scalar()) return output;
  return output.keep_if_score_at_least(cfg.theta);
}

namespace detail {

template <typename Labels>
bool intersects(const TargetClass& c, const Labels& labels) {
  return std::any_of(labels.begin(), labels.end(), [&](const auto& l) { return c.has_label(l); });
}

inline std::vector<std::string> names_of(const ApiOutput& out) {
  std::vector<std::string> names;
  names.reserve(out.items().size());
  for (const auto& item : out.items()) names.push_back(item.name);
  return names;
}

inline DecisionOutcome decide_scalar(double x, const DecisionSummary& summary) {
  if (summary.decision_type == DecisionType::TrueFalse)
    return DecisionOutcome::boolean(summary.classes.front().range().contains(x));
  for (const auto& c : summary.classes)
    if (c.range().contains(x)) return DecisionOutcome::choice(c.name);
  return DecisionOutcome::none();
}

}  // namespace detail

/// Applies the summary's threshold and then the application's mapping.
/// Throws KindMismatch when a scalar output meets a label summary or the
/// other way round.
inline DecisionOutcome decide(const ApiOutput& output, const DecisionSummary& summary) {
  if (summary.is_range_kind()) {
    CHAMELEON_REQUIRE(output.is_scalar(), ErrorCode::KindMismatch,
                      "value-range summary '" + summary.app_id + "' needs a scalar output");
    return detail::decide_scalar(output.scalar(), summary);
  }
  CHAMELEON_REQUIRE(!output.is_scalar(), ErrorCode::KindMismatch,
                    "label summary '" + summary.app_id + "' needs a label output");

  const ApiOutput kept = filter_output(output, {summary.theta});
  const auto labels = detail::names_of(kept);

  switch (summary.decision_type) {
    case DecisionType::TrueFalse:
      return DecisionOutcome::boolean(detail::intersects(summary.classes.front(), labels));
    case DecisionType::MultiSelect: {
      std::set<std::string> selected;
      for (const auto& c : summary.classes)
        if (detail::intersects(c, labels)) selected.insert(c.name);
      return DecisionOutcome::selection(std::move(selected));
    }
    case DecisionType::MultiChoice:
      if (summary.order == MappingOrder::ApiOutput) {
        for (const auto& label : labels)
          for (const auto& c : summary.classes)
            if (c.has_label(label)) return DecisionOutcome::choice(c.name);
        return DecisionOutcome::none();
      }
      for (const auto& c : summary.classes)
        if (detail::intersects(c, labels)) return DecisionOutcome::choice(c.name);
      return DecisionOutcome::none();
  }
  return DecisionOutcome::none();
}

/// Decision induced by the unscored ground truth. Multi-choice uses
/// declaration order; under API-output order a truth set touching two or more
/// classes has no defined decision and yields Ambiguous.
inline DecisionOutcome ground_truth_decision(const Sample& truth, const DecisionSummary& summary) {
  if (summary.is_range_kind()) {
    if (!truth.truth_scalar) {
      return summary.decision_type == DecisionType::TrueFalse ? DecisionOutcome::boolean(false)
                                                              : DecisionOutcome::none();
    }
    return detail::decide_scalar(*truth.truth_scalar, summary);
  }
  const auto& labels = truth.truth_labels;
  switch (summary.decision_type) {
    case DecisionType::TrueFalse:
      return DecisionOutcome::boolean(detail::intersects(summary.classes.front(), labels));
    case DecisionType::MultiSelect: {
      std::set<std::string> selected;
      for (const auto& c : summary.classes)
        if (detail::intersects(c, labels)) selected.insert(c.name);
      return DecisionOutcome::selection(std::move(selected));
    }
    case DecisionType::MultiChoice: {
      const TargetClass* first = nullptr;
      std::size_t hits = 0;
      for (const auto& c : summary.classes) {
        if (!detail::intersects(c, labels)) continue;
        if (!first) first = &c;
        ++hits;
      }
      if (hits >= 2 && summary.order == MappingOrder::ApiOutput) return DecisionOutcome::ambiguous();
      return first ? DecisionOutcome::choice(first->name) : DecisionOutcome::none();
    }
  }
  return DecisionOutcome::none();
}

inline bool is_ambiguous(const Sample& truth, const DecisionSummary& summary) {
  return ground_truth_decision(truth, summary).is_ambiguous();
}

/// True when the output drives the application to a different decision than
/// the ground truth would.
inline bool is_critical_error(const ApiOutput& output, const Sample& truth, const DecisionSummary& summary) {
  const DecisionOutcome expected = ground_truth_decision(truth, summary);
  CHAMELEON_REQUIRE(!expected.is_ambiguous(), ErrorCode::AmbiguousSample,
                    "ambiguous sample '" + truth.id + "'");
  return decide(output, summary) != expected;
}

}  // namespace chameleon
