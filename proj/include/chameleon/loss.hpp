#pragma once

// Decision-aware surrogate loss.
//
// Each class k gets a smooth intersection strength
//   m_k = tau * ln sum_{l in C_k} exp(s_l / tau)
// and the 0/1 decision failure indicator is relaxed into hinge terms
// h(u) = max(0, u) over the m_k, one set of terms per decision type/order.
// With tau <= margin / ln(c_max) a zero loss guarantees the thresholded
// output makes the target decision.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "chameleon/core.hpp"
#include "chameleon/oracle.hpp"

namespace chameleon {

/// Ordered label list defining the model's output index order.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> labels) : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      CHAMELEON_REQUIRE(!labels_[i].empty(), ErrorCode::InvalidInput, "empty vocabulary label");
      CHAMELEON_REQUIRE(index_.emplace(labels_[i], i).second, ErrorCode::InvalidInput,
                        "duplicate vocabulary label '" + labels_[i] + "'");
    }
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& operator[](std::size_t i) const { return labels_[i]; }

  std::optional<std::size_t> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// {0,1} indicator over the vocabulary.
  std::vector<double> indicator(const std::set<std::string>& labels) const {
    std::vector<double> bits(labels_.size(), 0.0);
    for (const auto& l : labels)
      if (auto i = find(l)) bits[*i] = 1.0;
    return bits;
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// A label summary resolved against a vocabulary: class k -> score indices.
/// Class labels absent from the vocabulary can never be predicted and are
/// skipped; a class with no label in the vocabulary is an error.
struct BoundSummary {
  DecisionSummary summary;
  std::vector<std::vector<std::size_t>> members;

  BoundSummary(DecisionSummary s, const Vocabulary& vocab) : summary(std::move(s)) {
    CHAMELEON_REQUIRE(!summary.is_range_kind(), ErrorCode::Unsupported,
                      "value-range summaries cannot be bound to a label vocabulary");
    for (const auto& c : summary.classes) {
      std::vector<std::size_t> idx;
      for (const auto& l : c.labels())
        if (auto i = vocab.find(l)) idx.push_back(*i);
      CHAMELEON_REQUIRE(!idx.empty(), ErrorCode::InvalidInput,
                        "class '" + c.name + "' has no label in the vocabulary");
      members.push_back(std::move(idx));
    }
  }

  std::size_t class_index(const std::string& name) const {
    for (std::size_t k = 0; k < summary.classes.size(); ++k)
      if (summary.classes[k].name == name) return k;
    throw Error(ErrorCode::InvalidInput, "target names unknown class '" + name + "'");
  }

  std::size_t max_class_size() const {
    std::size_t c = 1;
    for (const auto& m : members) c = std::max(c, m.size());
    return c;
  }

  /// Vocabulary indices used by at least one class.
  std::vector<bool> used_mask(std::size_t vocab_size) const {
    std::vector<bool> mask(vocab_size, false);
    for (const auto& m : members)
      for (auto i : m) mask[i] = true;
    return mask;
  }
};

struct LossParams {
  double margin = 0.05;
  double tau = 0.01;
  double bce_weight = 0.1;
};

class LossConfig {
 public:
  /// Enforces tau <= margin / ln(c_max), the bound behind zero-loss soundness.
  static LossConfig create(double theta, LossParams p, std::size_t c_max) {
    CHAMELEON_REQUIRE(std::isfinite(theta) && theta > 0 && theta < 1, ErrorCode::InvalidInput, "theta must lie in (0,1)");
    CHAMELEON_REQUIRE(p.margin > 0, ErrorCode::InvalidInput, "margin must be > 0");
    CHAMELEON_REQUIRE(p.tau > 0, ErrorCode::InvalidInput, "tau must be > 0");
    CHAMELEON_REQUIRE(p.bce_weight >= 0, ErrorCode::InvalidInput, "bce_weight must be >= 0");
    if (c_max > 1) {
      const double bound = p.margin / std::log(static_cast<double>(c_max));
      CHAMELEON_REQUIRE(p.tau <= bound, ErrorCode::InvalidInput,
                        "tau " + std::to_string(p.tau) + " exceeds margin/ln(c_max) = " + std::to_string(bound));
    }
    LossConfig cfg;
    cfg.theta_ = theta;
    cfg.p_ = p;
    return cfg;
  }

  static LossConfig for_summary(const BoundSummary& b, LossParams p = {}) {
    return create(b.summary.theta, p, b.max_class_size());
  }

  double theta() const { return theta_; }
  double margin() const { return p_.margin; }
  double tau() const { return p_.tau; }
  double bce_weight() const { return p_.bce_weight; }

 private:
  LossConfig() = default;
  double theta_ = kDefaultTheta;
  LossParams p_;
};

struct LossResult {
  double value = 0.0;
  std::vector<double> grad;  // dL/ds over the vocabulary
  double decision_component = 0.0;
  double bce_component = 0.0;
};

struct SmoothMax {
  double value = 0.0;
  std::vector<double> weights;  // dm/ds for each member, in member order (softmax weights)
};

/// tau * ln sum exp(s_i / tau) over `members`, computed around the max.
inline SmoothMax class_smoothmax(std::span<const double> scores, std::span<const std::size_t> members, double tau) {
  CHAMELEON_REQUIRE(!members.empty(), ErrorCode::InvalidInput, "smoothmax over an empty class");
  double top = -INFINITY;
  for (auto i : members) top = std::max(top, scores[i]);
  SmoothMax out;
  out.weights.resize(members.size());
  double sum = 0;
  for (std::size_t j = 0; j < members.size(); ++j) {
    out.weights[j] = std::exp((scores[members[j]] - top) / tau);
    sum += out.weights[j];
  }
  for (auto& w : out.weights) w /= sum;
  out.value = top + tau * std::log(sum);
  return out;
}

inline SmoothMax class_smoothmax(std::span<const double> scores, const TargetClass& cls, const Vocabulary& vocab,
                                 double tau) {
  CHAMELEON_REQUIRE(cls.is_label_set() && !cls.labels().empty(), ErrorCode::InvalidInput,
                    "smoothmax needs a non-empty label-set class");
  std::vector<std::size_t> idx;
  for (const auto& l : cls.labels())
    if (auto i = vocab.find(l)) idx.push_back(*i);
  return class_smoothmax(scores, idx, tau);
}

/// One hinge term u = sum_k coeff_k * m_k + offset.
struct HingeTerm {
  std::vector<std::pair<std::size_t, double>> coeffs;
  double offset = 0.0;
};

/// The hinge terms whose sum is the decision loss for `target`.
inline std::vector<HingeTerm> decision_hinges(const DecisionOutcome& target, const BoundSummary& bound,
                                              const LossConfig& cfg) {
  const auto& s = bound.summary;
  const double theta = cfg.theta();
  const double gamma = cfg.margin();
  const std::size_t n = s.classes.size();
  std::vector<HingeTerm> terms;
  auto present = [&](std::size_t k) { terms.push_back({{{k, -1.0}}, theta + gamma}); };  // theta+gamma-m_k
  auto absent = [&](std::size_t k) { terms.push_back({{{k, 1.0}}, gamma - theta}); };    // m_k-theta+gamma

  CHAMELEON_REQUIRE(!target.is_ambiguous(), ErrorCode::AmbiguousSample, "no loss for an ambiguous target");
  switch (s.decision_type) {
    case DecisionType::TrueFalse:
      CHAMELEON_REQUIRE(target.kind == DecisionOutcome::Kind::Bool, ErrorCode::KindMismatch,
                        "TRUE_FALSE summary needs a Bool target");
      target.flag ? present(0) : absent(0);
      break;
    case DecisionType::MultiSelect: {
      CHAMELEON_REQUIRE(target.kind == DecisionOutcome::Kind::Selected, ErrorCode::KindMismatch,
                        "MULTI_SELECT summary needs a Selected target");
      for (const auto& name : target.selected) bound.class_index(name);
      for (std::size_t k = 0; k < n; ++k) target.selected.count(s.classes[k].name) ? present(k) : absent(k);
      break;
    }
    case DecisionType::MultiChoice: {
      CHAMELEON_REQUIRE(target.kind == DecisionOutcome::Kind::Chosen, ErrorCode::KindMismatch,
                        "MULTI_CHOICE summary needs a Chosen target");
      if (!target.chosen) {
        for (std::size_t k = 0; k < n; ++k) absent(k);
        break;
      }
      const std::size_t star = bound.class_index(*target.chosen);
      present(star);
      if (s.order == MappingOrder::AppChoice) {
        for (std::size_t k = 0; k < star; ++k) absent(k);
      } else {
        for (std::size_t k = 0; k < n; ++k)
          if (k != star) terms.push_back({{{k, 1.0}, {star, -1.0}}, gamma});  // m_k - m_star + gamma
      }
      break;
    }
  }
  return terms;
}

inline double hinge_argument(const HingeTerm& t, std::span<const double> m) {
  double u = t.offset;
  for (const auto& [k, c] : t.coeffs) u += c * m[k];
  return u;
}

/// Per-class smoothmax values for the bound summary.
inline std::vector<SmoothMax> class_strengths(std::span<const double> scores, const BoundSummary& bound, double tau) {
  std::vector<SmoothMax> out;
  out.reserve(bound.members.size());
  for (const auto& m : bound.members) out.push_back(class_smoothmax(scores, m, tau));
  return out;
}

/// Decision component only; `value` equals `decision_component`.
inline LossResult decision_loss(std::span<const double> scores, const DecisionOutcome& target,
                                const BoundSummary& bound, const LossConfig& cfg) {
  const auto terms = decision_hinges(target, bound, cfg);
  const auto strengths = class_strengths(scores, bound, cfg.tau());
  std::vector<double> m(strengths.size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = strengths[k].value;

  LossResult r;
  r.grad.assign(scores.size(), 0.0);
  std::vector<double> dm(m.size(), 0.0);
  for (const auto& t : terms) {
    const double u = hinge_argument(t, m);
    if (u <= 0) continue;  // subgradient 0 at the kink
    r.decision_component += u;
    for (const auto& [k, c] : t.coeffs) dm[k] += c;
  }
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (dm[k] == 0) continue;
    const auto& members = bound.members[k];
    for (std::size_t j = 0; j < members.size(); ++j) r.grad[members[j]] += dm[k] * strengths[k].weights[j];
  }
  r.value = r.decision_component;
  return r;
}

inline constexpr double kBceEpsilon = 1e-7;

struct BceResult {
  double value = 0.0;
  std::vector<double> grad;
};

/// Mean binary cross-entropy over the labels selected by `mask` (all when
/// empty); masked-out labels get zero gradient.
inline BceResult bce_loss(std::span<const double> scores, std::span<const double> truth_bits,
                          const std::vector<bool>& mask = {}) {
  CHAMELEON_REQUIRE(scores.size() == truth_bits.size(), ErrorCode::DimensionMismatch,
                    "bce: " + std::to_string(scores.size()) + " scores vs " + std::to_string(truth_bits.size()) +
                        " targets");
  CHAMELEON_REQUIRE(mask.empty() || mask.size() == scores.size(), ErrorCode::DimensionMismatch, "bce: mask size");
  BceResult r;
  r.grad.assign(scores.size(), 0.0);
  std::size_t count = 0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (mask.empty() || mask[i]) ++count;
  if (count == 0) return r;
  const double inv = 1.0 / static_cast<double>(count);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!mask.empty() && !mask[i]) continue;
    const double s = std::clamp(scores[i], kBceEpsilon, 1.0 - kBceEpsilon);
    const double t = truth_bits[i];
    r.value -= inv * (t * std::log(s) + (1.0 - t) * std::log(1.0 - s));
    r.grad[i] = inv * (s - t) / (s * (1.0 - s));
  }
  return r;
}

/// decision_loss + bce_weight * bce over the whole vocabulary.
inline LossResult total_loss(std::span<const double> scores, const Sample& sample, const BoundSummary& bound,
                             const Vocabulary& vocab, const LossConfig& cfg) {
  CHAMELEON_REQUIRE(scores.size() == vocab.size(), ErrorCode::DimensionMismatch, "scores/vocabulary size mismatch");
  const DecisionOutcome target = ground_truth_decision(sample, bound.summary);
  CHAMELEON_REQUIRE(!target.is_ambiguous(), ErrorCode::AmbiguousSample, "ambiguous sample '" + sample.id + "'");
  LossResult r = decision_loss(scores, target, bound, cfg);
  const auto bits = vocab.indicator(sample.truth_labels);
  const BceResult bce = bce_loss(scores, bits);
  r.bce_component = bce.value;
  r.value = r.decision_component + cfg.bce_weight() * bce.value;
  for (std::size_t i = 0; i < r.grad.size(); ++i) r.grad[i] += cfg.bce_weight() * bce.grad[i];
  return r;
}

}  // namespace chameleon
