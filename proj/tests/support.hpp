#pragma once

// Shared helpers for the test suites: independent reference semantics,
// random instance generators and small file utilities.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "chameleon/core.hpp"
#include "chameleon/rng.hpp"

namespace cham_test {

using namespace chameleon;

inline std::filesystem::path test_dir() { return CHAM_TEST_DIR; }

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("chameleon_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline DecisionSummary smart_can(MappingOrder order = MappingOrder::ApiOutput) {
  DecisionSummary s;
  s.app_id = "smart_can";
  s.decision_type = DecisionType::MultiChoice;
  s.order = order;
  s.classes = {
      {"Recycle", LabelSet{"plastic", "wood", "glass", "paper", "cardboard", "metal", "aluminum", "tin", "carton"}},
      {"Compost", LabelSet{"food", "produce", "snack"}},
      {"Donate", LabelSet{"clothing", "jacket", "shirt", "pants", "footwear", "shoe"}},
  };
  return s;
}

inline ApiOutput out(std::vector<LabelScore> items) { return ApiOutput::from_labels(std::move(items)); }

inline Sample truth(std::set<std::string> labels, std::string id = "s") {
  Sample s;
  s.id = std::move(id);
  s.truth_labels = std::move(labels);
  return s;
}

// ---------------------------------------------------------------------------
// Independent semantics, written directly from the decision rules without
// reusing the library's oracle.

inline bool in_class(const TargetClass& c, const std::string& label) {
  for (const auto& l : std::get<LabelSet>(c.matcher))
    if (l == label) return true;
  return false;
}

inline DecisionOutcome naive_decide(const ApiOutput& output, const DecisionSummary& s) {
  std::vector<LabelScore> kept;
  for (const auto& item : output.items())
    if (!(item.score < s.theta)) kept.push_back(item);
  // highest score first, ties by name
  std::stable_sort(kept.begin(), kept.end(), [](const LabelScore& a, const LabelScore& b) {
    return a.score > b.score || (a.score == b.score && a.name < b.name);
  });
  auto hits = [&](const TargetClass& c) {
    for (const auto& k : kept)
      if (in_class(c, k.name)) return true;
    return false;
  };
  switch (s.decision_type) {
    case DecisionType::TrueFalse: return DecisionOutcome::boolean(hits(s.classes[0]));
    case DecisionType::MultiSelect: {
      std::set<std::string> sel;
      for (const auto& c : s.classes)
        if (hits(c)) sel.insert(c.name);
      return DecisionOutcome::selection(sel);
    }
    case DecisionType::MultiChoice:
      if (s.order == MappingOrder::AppChoice) {
        for (const auto& c : s.classes)
          if (hits(c)) return DecisionOutcome::choice(c.name);
        return DecisionOutcome::none();
      }
      for (const auto& k : kept)
        for (const auto& c : s.classes)
          if (in_class(c, k.name)) return DecisionOutcome::choice(c.name);
      return DecisionOutcome::none();
  }
  return DecisionOutcome::none();
}

// ---------------------------------------------------------------------------
// Random instances

struct Combo {
  DecisionType type;
  MappingOrder order;
  const char* name;
};

inline const std::vector<Combo>& combos() {
  static const std::vector<Combo> all = {
      {DecisionType::TrueFalse, MappingOrder::NotApplicable, "true_false"},
      {DecisionType::MultiSelect, MappingOrder::NotApplicable, "multi_select"},
      {DecisionType::MultiChoice, MappingOrder::ApiOutput, "multi_choice/api_output"},
      {DecisionType::MultiChoice, MappingOrder::AppChoice, "multi_choice/app_choice"},
  };
  return all;
}

inline std::string pool_label(std::size_t i) {
  static const char* words[] = {"glass", "food", "paper", "tin",   "shirt", "shoe",  "snack", "wood",
                                "metal", "dog",  "cat",   "sky",   "tree",  "car",   "bus",   "pants",
                                "lamp",  "cup",  "key",   "phone", "book",  "apple", "pear",  "rock"};
  constexpr std::size_t n = sizeof(words) / sizeof(words[0]);
  if (i < n) return words[i];
  return "label_" + std::to_string(i);
}

/// Random valid label summary: <= max_classes classes, <= max_labels labels
/// each, drawn from a pool of `pool` labels (classes may overlap).
inline DecisionSummary random_summary(Rng& rng, const Combo& combo, std::size_t max_classes = 5,
                                      std::size_t max_labels = 6, std::size_t pool = 16) {
  DecisionSummary s;
  s.app_id = "app" + std::to_string(rng.below(1000));
  s.decision_type = combo.type;
  s.order = combo.order;
  s.theta = std::vector<double>{0.5, 0.3, 0.7, 0.25, 0.6}[rng.below(5)];
  std::size_t n = 1;
  if (combo.type == DecisionType::MultiChoice) n = 2 + rng.below(max_classes - 1);
  if (combo.type == DecisionType::MultiSelect) n = 1 + rng.below(max_classes);
  for (std::size_t k = 0; k < n; ++k) {
    std::set<std::size_t> idx;
    const std::size_t size = 1 + rng.below(max_labels);
    while (idx.size() < size) idx.insert(rng.below(pool));
    LabelSet labels;
    for (auto i : idx) labels.push_back(pool_label(i));
    rng.shuffle(labels);
    s.classes.push_back({"Class" + std::to_string(k) + "_" + std::to_string(rng.below(100)), labels});
  }
  return s;
}

/// Random canonical output over the pool; scores sometimes exactly theta or tied.
inline ApiOutput random_output(Rng& rng, double theta, std::size_t max_items = 8, std::size_t pool = 20) {
  std::set<std::size_t> idx;
  const std::size_t n = rng.below(max_items + 1);
  while (idx.size() < n) idx.insert(rng.below(pool));
  std::vector<LabelScore> items;
  double last = rng.uniform();
  for (auto i : idx) {
    double score;
    const auto r = rng.below(10);
    if (r == 0) score = theta;
    else if (r == 1) score = last;
    else score = std::round(rng.uniform() * 1000.0) / 1000.0;
    last = score;
    items.push_back({pool_label(i), score});
  }
  return ApiOutput::from_labels(std::move(items));
}

/// Random feasible target outcome for a summary.
inline DecisionOutcome random_target(Rng& rng, const DecisionSummary& s) {
  switch (s.decision_type) {
    case DecisionType::TrueFalse: return DecisionOutcome::boolean(rng.below(2) == 1);
    case DecisionType::MultiSelect: {
      std::set<std::string> sel;
      for (const auto& c : s.classes)
        if (rng.below(2)) sel.insert(c.name);
      return DecisionOutcome::selection(sel);
    }
    case DecisionType::MultiChoice: {
      const std::size_t k = rng.below(s.classes.size() + 1);
      if (k == s.classes.size()) return DecisionOutcome::none();
      return DecisionOutcome::choice(s.classes[k].name);
    }
  }
  return DecisionOutcome::none();
}

inline std::string run_capture(const std::string& cmd, int* exit_code) {
  std::string output;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) {
    *exit_code = -1;
    return output;
  }
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
  const int status = ::pclose(pipe);
  *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return output;
}

}  // namespace cham_test
