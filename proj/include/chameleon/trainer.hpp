#pragma once

// Minibatch training with adaptive moments for the three schemes, and
// decision-level evaluation.
//
//   GENERIC      mean BCE over every vocabulary label
//   CATEGORIZED  mean BCE over the labels some target class uses; others get
//                zero gradient
//   CHAMELEON    decision loss + bce_weight * BCE (see loss.hpp)

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chameleon/core.hpp"
#include "chameleon/loss.hpp"
#include "chameleon/model.hpp"
#include "chameleon/oracle.hpp"
#include "chameleon/rng.hpp"

namespace chameleon {

enum class Scheme : std::uint8_t { Generic, Categorized, Chameleon };

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::Generic: return "generic";
    case Scheme::Categorized: return "categorized";
    case Scheme::Chameleon: return "chameleon";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view s) {
  if (s == "generic") return Scheme::Generic;
  if (s == "categorized") return Scheme::Categorized;
  if (s == "chameleon") return Scheme::Chameleon;
  throw Error(ErrorCode::InvalidInput, "unknown scheme '" + std::string(s) + "'");
}

struct TrainConfig {
  Scheme scheme = Scheme::Generic;
  int epochs = 30;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 7;
  std::vector<std::size_t> hidden{64};
  LossParams loss;
  std::optional<Model> init;  // fine-tune from these weights when set
};

// ---------------------------------------------------------------------------
// Dataset IO

inline std::vector<Sample> read_samples_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  CHAMELEON_REQUIRE(in.good(), ErrorCode::Io, "cannot open " + path.string());
  std::vector<Sample> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(sample_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidInput, path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

inline std::string samples_to_jsonl(const std::vector<Sample>& samples) {
  std::string out;
  for (const auto& s : samples) {
    out += to_json(s).dump();
    out += '\n';
  }
  return out;
}

inline Vocabulary read_vocab(const std::filesystem::path& path) {
  std::ifstream in(path);
  CHAMELEON_REQUIRE(in.good(), ErrorCode::Io, "cannot open " + path.string());
  try {
    return Vocabulary(json::parse(in).get<std::vector<std::string>>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, "bad vocabulary file " + path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Training

namespace train_detail {

struct Adam {
  std::vector<std::vector<double>> m, v;
  std::uint64_t t = 0;
};

struct Gradients {
  std::vector<std::vector<double>> w, b;

  explicit Gradients(const Model& model) {
    for (const auto& l : model.layers) {
      w.emplace_back(l.weights.size(), 0.0);
      b.emplace_back(l.bias.size(), 0.0);
    }
  }
  void zero() {
    for (auto& x : w) std::fill(x.begin(), x.end(), 0.0);
    for (auto& x : b) std::fill(x.begin(), x.end(), 0.0);
  }
};

/// Accumulates dL/dparams given dL/dscores for one sample.
inline void backprop(const Model& model, const ForwardTrace& trace, std::span<const double> dscores, Gradients& g) {
  const std::size_t nl = model.layers.size();
  std::vector<double> delta(dscores.size());
  const auto& s = trace.scores();
  for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = dscores[i] * s[i] * (1.0 - s[i]);
  for (std::size_t li = nl; li-- > 0;) {
    const Layer& l = model.layers[li];
    const auto& x = trace.acts[li];
    auto& gw = g.w[li];
    auto& gb = g.b[li];
    for (std::size_t o = 0; o < l.out; ++o) {
      const double d = delta[o];
      if (d == 0) continue;
      gb[o] += d;
      double* row = &gw[o * l.in];
      for (std::size_t i = 0; i < l.in; ++i) row[i] += d * x[i];
    }
    if (li == 0) break;
    std::vector<double> prev(l.in, 0.0);
    for (std::size_t o = 0; o < l.out; ++o) {
      const double d = delta[o];
      if (d == 0) continue;
      const double* row = &l.weights[o * l.in];
      for (std::size_t i = 0; i < l.in; ++i) prev[i] += d * row[i];
    }
    for (std::size_t i = 0; i < l.in; ++i)
      if (x[i] <= 0) prev[i] = 0;  // rectifier
    delta = std::move(prev);
  }
}

inline void adam_step(Model& model, const Gradients& g, double scale, Adam& adam, const TrainConfig& cfg) {
  if (adam.m.empty()) {
    for (const auto& l : model.layers) {
      adam.m.emplace_back(l.weights.size() + l.bias.size(), 0.0);
      adam.v.emplace_back(l.weights.size() + l.bias.size(), 0.0);
    }
  }
  ++adam.t;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(adam.t));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(adam.t));
  for (std::size_t li = 0; li < model.layers.size(); ++li) {
    Layer& l = model.layers[li];
    auto& m = adam.m[li];
    auto& v = adam.v[li];
    auto update = [&](double& param, double grad, std::size_t k) {
      grad *= scale;
      m[k] = cfg.beta1 * m[k] + (1 - cfg.beta1) * grad;
      v[k] = cfg.beta2 * v[k] + (1 - cfg.beta2) * grad * grad;
      param -= cfg.learning_rate * (m[k] / c1) / (std::sqrt(v[k] / c2) + cfg.adam_epsilon);
    };
    for (std::size_t k = 0; k < l.weights.size(); ++k) update(l.weights[k], g.w[li][k], k);
    for (std::size_t k = 0; k < l.bias.size(); ++k) update(l.bias[k], g.b[li][k], l.weights.size() + k);
  }
}

}  // namespace train_detail

/// Per-sample loss value and dL/dscores for a scheme.
class SchemeLoss {
 public:
  SchemeLoss(Scheme scheme, const Vocabulary& vocab, const std::optional<DecisionSummary>& summary,
             const LossParams& params)
      : scheme_(scheme), vocab_(vocab) {
    if (scheme == Scheme::Generic) return;
    CHAMELEON_REQUIRE(summary.has_value(), ErrorCode::InvalidInput,
                      std::string("scheme ") + to_string(scheme) + " requires a decision summary");
    bound_.emplace(*summary, vocab);
    if (scheme == Scheme::Categorized) mask_ = bound_->used_mask(vocab.size());
    if (scheme == Scheme::Chameleon) cfg_.emplace(LossConfig::for_summary(*bound_, params));
  }

  std::pair<double, std::vector<double>> operator()(std::span<const double> scores, const Sample& s) const {
    if (scheme_ == Scheme::Chameleon) {
      LossResult r = total_loss(scores, s, *bound_, vocab_, *cfg_);
      return {r.value, std::move(r.grad)};
    }
    const auto bits = vocab_.indicator(s.truth_labels);
    BceResult r = bce_loss(scores, bits, mask_);
    return {r.value, std::move(r.grad)};
  }

  const std::optional<BoundSummary>& bound() const { return bound_; }

 private:
  Scheme scheme_;
  const Vocabulary& vocab_;
  std::optional<BoundSummary> bound_;
  std::optional<LossConfig> cfg_;
  std::vector<bool> mask_;
};

/// Seeded-shuffle minibatch training. Ambiguous samples must already be
/// removed for CHAMELEON (see drop_ambiguous).
inline Model train(const std::vector<Sample>& data, const Vocabulary& vocab, const TrainConfig& cfg,
                   const std::optional<DecisionSummary>& summary = std::nullopt) {
  CHAMELEON_REQUIRE(!data.empty(), ErrorCode::InvalidInput, "training data is empty");
  CHAMELEON_REQUIRE(cfg.batch_size > 0 && cfg.epochs >= 0, ErrorCode::InvalidInput, "bad batch size or epochs");
  const std::size_t dim = data.front().features.size();

  Model model;
  if (cfg.init) {
    model = *cfg.init;
    CHAMELEON_REQUIRE(model.vocab == vocab.labels() && model.input_dim == dim, ErrorCode::DimensionMismatch,
                      "initial model does not match the vocabulary/feature dimension");
  } else {
    model = init_model(vocab.labels(), dim, cfg.hidden, cfg.seed);
  }
  const SchemeLoss loss(cfg.scheme, vocab, summary, cfg.loss);
  model.seed = cfg.seed;
  model.scheme = to_string(cfg.scheme);
  model.trained_for = cfg.scheme == Scheme::Generic ? "generic" : summary->app_id;
  if (summary) model.theta = summary->theta;

  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(mix_seed(cfg.seed, 0x7A11));
  train_detail::Gradients grads(model);
  train_detail::Adam adam;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0, batch = 0; start < order.size(); start += cfg.batch_size, ++batch) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      grads.zero();
      for (std::size_t k = start; k < stop; ++k) {
        const Sample& s = data[order[k]];
        CHAMELEON_REQUIRE(s.features.size() == dim, ErrorCode::DimensionMismatch,
                          "sample '" + s.id + "' has a different feature dimension");
        const auto trace = forward_trace(model, s.features);
        auto [value, dscores] = loss(trace.scores(), s);
        if (!std::isfinite(value))
          throw Error(ErrorCode::NumericFailure, "non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                                                     std::to_string(batch) + " (sample '" + s.id + "')");
        train_detail::backprop(model, trace, dscores, grads);
      }
      if (cfg.learning_rate == 0) continue;
      train_detail::adam_step(model, grads, 1.0 / static_cast<double>(stop - start), adam, cfg);
    }
  }
  for (const auto& l : model.layers) {
    for (double w : l.weights)
      CHAMELEON_REQUIRE(std::isfinite(w), ErrorCode::NumericFailure, "training produced non-finite weights");
    for (double b : l.bias)
      CHAMELEON_REQUIRE(std::isfinite(b), ErrorCode::NumericFailure, "training produced non-finite weights");
  }
  return model;
}

/// Removes samples with no defined ground-truth decision; returns how many.
inline std::size_t drop_ambiguous(std::vector<Sample>& data, const DecisionSummary& summary) {
  const auto before = data.size();
  std::erase_if(data, [&](const Sample& s) { return is_ambiguous(s, summary); });
  return before - data.size();
}

// ---------------------------------------------------------------------------
// Evaluation

struct LabelMetrics {
  std::string label;
  std::size_t support = 0;    // truth positives
  std::size_t predicted = 0;  // scored >= theta
  std::size_t true_positive = 0;

  std::optional<double> precision() const {
    if (predicted == 0) return std::nullopt;
    return static_cast<double>(true_positive) / static_cast<double>(predicted);
  }
  std::optional<double> recall() const {
    if (support == 0) return std::nullopt;
    return static_cast<double>(true_positive) / static_cast<double>(support);
  }
  friend bool operator==(const LabelMetrics&, const LabelMetrics&) = default;
};

struct EvalReport {
  double incorrect_decision_rate = 0.0;
  std::size_t incorrect_count = 0;
  std::size_t n_samples = 0;        // all samples seen
  std::size_t ambiguous_count = 0;  // excluded from every metric
  std::vector<LabelMetrics> per_label;

  std::size_t n_evaluated() const { return n_samples - ambiguous_count; }

  json to_json() const {
    json j;
    j["incorrect_decision_rate"] = incorrect_decision_rate;
    j["incorrect_count"] = incorrect_count;
    j["n_samples"] = n_samples;
    j["n_evaluated"] = n_evaluated();
    j["ambiguous_count"] = ambiguous_count;
    j["per_label"] = json::array();
    for (const auto& m : per_label) {
      json lj;
      lj["label"] = m.label;
      lj["support"] = m.support;
      lj["predicted"] = m.predicted;
      lj["precision"] = m.precision() ? json(*m.precision()) : json(nullptr);
      lj["recall"] = m.recall() ? json(*m.recall()) : json(nullptr);
      j["per_label"].push_back(lj);
    }
    return j;
  }

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Decision-level evaluation through the decision oracle.
inline EvalReport evaluate(const Model& model, const std::vector<Sample>& data, const DecisionSummary& summary) {
  CHAMELEON_REQUIRE(!summary.is_range_kind(), ErrorCode::Unsupported,
                    "evaluation of value-range summaries is not supported by label models");
  EvalReport r;
  r.n_samples = data.size();
  r.per_label.resize(model.vocab.size());
  for (std::size_t i = 0; i < model.vocab.size(); ++i) r.per_label[i].label = model.vocab[i];
  for (const auto& s : data) {
    if (is_ambiguous(s, summary)) {
      ++r.ambiguous_count;
      continue;
    }
    const auto scores = forward(model, s.features);
    if (is_critical_error(to_api_output(model.vocab, scores), s, summary)) ++r.incorrect_count;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const bool predicted = scores[i] >= summary.theta;
      const bool truth = s.truth_labels.count(model.vocab[i]) > 0;
      auto& m = r.per_label[i];
      m.support += truth;
      m.predicted += predicted;
      m.true_positive += truth && predicted;
    }
  }
  if (r.n_evaluated() > 0)
    r.incorrect_decision_rate = static_cast<double>(r.incorrect_count) / static_cast<double>(r.n_evaluated());
  return r;
}

}  // namespace chameleon
