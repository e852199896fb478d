#pragma once

// Deterministic synthetic multi-label benchmarks.
//
// Every label gets a Gaussian prototype vector; listed confusable pairs are
// rotated toward a requested cosine. A sample draws a scene (a fixed label
// co-occurrence set), takes the scene's labels as ground truth and sums their
// prototypes plus isotropic Gaussian noise.

#include <cmath>
#include <deque>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "chameleon/core.hpp"
#include "chameleon/loss.hpp"
#include "chameleon/rng.hpp"
#include "chameleon/trainer.hpp"

namespace chameleon {

struct Scene {
  std::vector<std::string> labels;
  double prevalence = 0.0;
};

struct ConfusablePair {
  std::string a;
  std::string b;
  double cosine = 0.0;
};

struct BenchConfig {
  std::string name;
  std::vector<std::string> vocab;
  std::size_t feature_dim = 16;
  std::size_t n_train = 2000;
  std::size_t n_eval = 1000;
  std::vector<Scene> scenes;
  std::vector<ConfusablePair> confusable;
  double noise_sigma = 0.1;
  std::uint64_t seed = 7;
  std::optional<DecisionSummary> summary;  // bundled application summary, if any
};

inline json to_json(const BenchConfig& c) {
  json j;
  j["name"] = c.name;
  j["vocab"] = c.vocab;
  j["feature_dim"] = c.feature_dim;
  j["n_train"] = c.n_train;
  j["n_eval"] = c.n_eval;
  j["scenes"] = json::array();
  for (const auto& s : c.scenes) j["scenes"].push_back({{"labels", s.labels}, {"prevalence", s.prevalence}});
  j["confusable"] = json::array();
  for (const auto& p : c.confusable) j["confusable"].push_back({{"a", p.a}, {"b", p.b}, {"cosine", p.cosine}});
  j["noise_sigma"] = c.noise_sigma;
  j["seed"] = c.seed;
  if (c.summary) j["summary"] = to_json(*c.summary);
  return j;
}

inline BenchConfig bench_config_from_json(const json& j) {
  BenchConfig c;
  try {
    c.name = j.value("name", std::string("custom"));
    c.vocab = j.at("vocab").get<std::vector<std::string>>();
    c.feature_dim = j.at("feature_dim").get<std::size_t>();
    c.n_train = j.at("n_train").get<std::size_t>();
    c.n_eval = j.at("n_eval").get<std::size_t>();
    for (const auto& s : j.at("scenes"))
      c.scenes.push_back({s.at("labels").get<std::vector<std::string>>(), s.at("prevalence").get<double>()});
    if (j.contains("confusable"))
      for (const auto& p : j.at("confusable"))
        c.confusable.push_back({p.at("a").get<std::string>(), p.at("b").get<std::string>(), p.at("cosine").get<double>()});
    c.noise_sigma = j.at("noise_sigma").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("summary")) c.summary = summary_from_json(j.at("summary"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("bad benchmark config: ") + e.what());
  }
  return c;
}

inline void validate_bench_config(const BenchConfig& c) {
  const Vocabulary vocab(c.vocab);
  CHAMELEON_REQUIRE(c.feature_dim > 0, ErrorCode::InvalidInput, "feature_dim must be > 0");
  CHAMELEON_REQUIRE(!c.scenes.empty(), ErrorCode::InvalidInput, "at least one scene is required");
  CHAMELEON_REQUIRE(std::isfinite(c.noise_sigma) && c.noise_sigma >= 0, ErrorCode::InvalidInput, "noise_sigma must be >= 0");
  double total = 0;
  std::set<std::set<std::string>> seen;
  for (const auto& s : c.scenes) {
    CHAMELEON_REQUIRE(s.prevalence >= 0, ErrorCode::InvalidInput, "scene prevalence must be >= 0");
    total += s.prevalence;
    for (const auto& l : s.labels)
      CHAMELEON_REQUIRE(vocab.find(l).has_value(), ErrorCode::InvalidInput, "scene label '" + l + "' not in vocabulary");
    CHAMELEON_REQUIRE(seen.emplace(s.labels.begin(), s.labels.end()).second, ErrorCode::InvalidInput,
                      "scenes must have distinct label sets");
  }
  CHAMELEON_REQUIRE(total > 0 && total <= 1.0 + 1e-9, ErrorCode::InvalidInput, "scene prevalences must sum to (0,1]");
  for (const auto& p : c.confusable) {
    CHAMELEON_REQUIRE(vocab.find(p.a) && vocab.find(p.b), ErrorCode::InvalidInput,
                      "confusable pair references unknown label");
    CHAMELEON_REQUIRE(p.a != p.b, ErrorCode::InvalidInput, "confusable pair needs two different labels");
    CHAMELEON_REQUIRE(std::isfinite(p.cosine) && std::abs(p.cosine) <= 1.0, ErrorCode::InvalidInput,
                      "infeasible cosine target " + std::to_string(p.cosine));
  }
  // pairs must form a forest
  std::vector<std::size_t> parent(vocab.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& p : c.confusable) {
    const auto ra = root(*vocab.find(p.a)), rb = root(*vocab.find(p.b));
    CHAMELEON_REQUIRE(ra != rb, ErrorCode::InvalidInput,
                      "confusable pairs form a cycle at " + p.a + "/" + p.b);
    parent[ra] = rb;
  }
  if (c.summary) {
    const auto report = validate_summary(*c.summary);
    CHAMELEON_REQUIRE(report.ok(), ErrorCode::InvalidInput, "bundled summary invalid: " + report.to_string());
  }
}

struct Benchmark {
  std::vector<Sample> train;
  std::vector<Sample> eval;
  Vocabulary vocab;
};

namespace workload_detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Scene weights with any missing prevalence mass given to an empty scene.
inline std::vector<double> scene_weights(const BenchConfig& c) {
  std::vector<double> w;
  double total = 0;
  for (const auto& s : c.scenes) {
    w.push_back(s.prevalence);
    total += s.prevalence;
  }
  w.push_back(std::max(0.0, 1.0 - total));
  return w;
}

class Generator {
 public:
  explicit Generator(const BenchConfig& c) : cfg_(c), vocab_(c.vocab) { build_prototypes(); }

  const Vocabulary& vocab() const { return vocab_; }

  Sample draw(Rng& rng, std::size_t scene, std::string id) const {
    Sample s;
    s.id = std::move(id);
    s.features.assign(cfg_.feature_dim, 0.0);
    if (scene < cfg_.scenes.size()) {
      for (const auto& l : cfg_.scenes[scene].labels) {
        s.truth_labels.insert(l);
        const auto& p = protos_[*vocab_.find(l)];
        for (std::size_t d = 0; d < p.size(); ++d) s.features[d] += p[d];
      }
    }
    for (auto& f : s.features) f += cfg_.noise_sigma * rng.normal();
    return s;
  }

  std::vector<Sample> draw_many(Rng& rng, std::size_t n, const std::vector<double>& weights,
                                const std::string& prefix) const {
    std::vector<Sample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t scene = rng.categorical(weights);
      out.push_back(draw(rng, scene, make_id(prefix, i)));
    }
    return out;
  }

  static std::string make_id(const std::string& prefix, std::size_t i) {
    std::string n = std::to_string(i);
    return prefix + "-" + std::string(n.size() < 6 ? 6 - n.size() : 0, '0') + n;
  }

  const std::vector<std::vector<double>>& prototypes() const { return protos_; }

 private:
  void build_prototypes() {
    Rng rng(mix_seed(cfg_.seed, 1));
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg_.feature_dim));
    protos_.assign(vocab_.size(), std::vector<double>(cfg_.feature_dim));
    for (auto& p : protos_)
      for (auto& x : p) x = scale * rng.normal();
    // breadth-first over the pair forest: each label is rotated once, toward
    // a parent that is already placed
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(vocab_.size());
    for (const auto& pair : cfg_.confusable) {
      const auto a = *vocab_.find(pair.a), b = *vocab_.find(pair.b);
      adj[a].push_back({b, pair.cosine});
      adj[b].push_back({a, pair.cosine});
    }
    std::vector<bool> done(vocab_.size(), false);
    for (std::size_t root = 0; root < vocab_.size(); ++root) {
      if (done[root]) continue;
      done[root] = true;
      std::deque<std::size_t> queue{root};
      while (!queue.empty()) {
        const auto at = queue.front();
        queue.pop_front();
        for (const auto& [next, c] : adj[at]) {
          if (done[next]) continue;
          done[next] = true;
          rotate_toward(at, next, c, rng);
          queue.push_back(next);
        }
      }
    }
  }

  // b := |b| * (c * a_hat + sqrt(1 - c^2) * b_perp_hat)
  void rotate_toward(std::size_t ia, std::size_t ib, double c, Rng& rng) {
    const auto& a = protos_[ia];
    auto& b = protos_[ib];
    const double na = std::sqrt(dot(a, a));
    const double nb = std::sqrt(dot(b, b));
    std::vector<double> ahat(a.size()), perp(b.size());
    for (std::size_t d = 0; d < a.size(); ++d) ahat[d] = a[d] / na;
    const double proj = dot(b, ahat);
    for (std::size_t d = 0; d < b.size(); ++d) perp[d] = b[d] - proj * ahat[d];
    double np = std::sqrt(dot(perp, perp));
    while (np < 1e-12) {  // b parallel to a: pick a random orthogonal direction
      for (auto& x : perp) x = rng.normal();
      const double pr = dot(perp, ahat);
      for (std::size_t d = 0; d < perp.size(); ++d) perp[d] -= pr * ahat[d];
      np = std::sqrt(dot(perp, perp));
    }
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (std::size_t d = 0; d < b.size(); ++d) b[d] = nb * (c * ahat[d] + s * perp[d] / np);
  }

  const BenchConfig& cfg_;
  Vocabulary vocab_;
  std::vector<std::vector<double>> protos_;
};

}  // namespace workload_detail

/// Train and eval splits; ids are disjoint ("train-NNNNNN" / "eval-NNNNNN").
inline Benchmark generate_benchmark(const BenchConfig& cfg) {
  validate_bench_config(cfg);
  const workload_detail::Generator gen(cfg);
  const auto weights = workload_detail::scene_weights(cfg);
  Rng train_rng(mix_seed(cfg.seed, 2));
  Rng eval_rng(mix_seed(cfg.seed, 3));
  Benchmark b;
  b.vocab = gen.vocab();
  b.train = gen.draw_many(train_rng, cfg.n_train, weights, "train");
  b.eval = gen.draw_many(eval_rng, cfg.n_eval, weights, "eval");
  return b;
}

/// Scene index of a sample (matching truth set), or scenes.size() for the
/// empty remainder scene / unknown sets.
inline std::size_t scene_of(const Sample& s, const BenchConfig& cfg) {
  for (std::size_t k = 0; k < cfg.scenes.size(); ++k) {
    const std::set<std::string> labels(cfg.scenes[k].labels.begin(), cfg.scenes[k].labels.end());
    if (labels == s.truth_labels) return k;
  }
  return cfg.scenes.size();
}

/// Resamples `eval` (with replacement, same size) under explicit per-scene
/// weights; the last weight, if present, belongs to the empty remainder scene.
inline std::vector<Sample> resample_by_scene(const std::vector<Sample>& eval, const BenchConfig& cfg,
                                             std::vector<double> weights, std::uint64_t seed,
                                             const std::string& prefix) {
  weights.resize(cfg.scenes.size() + 1, 0.0);
  std::vector<std::vector<std::size_t>> groups(cfg.scenes.size() + 1);
  for (std::size_t i = 0; i < eval.size(); ++i) groups[scene_of(eval[i], cfg)].push_back(i);
  for (std::size_t k = 0; k < groups.size(); ++k)
    if (groups[k].empty()) weights[k] = 0;
  double total = 0;
  for (double w : weights) total += w;
  CHAMELEON_REQUIRE(total > 0, ErrorCode::InvalidInput, "shift leaves no scene with eval samples");

  Rng rng(mix_seed(seed, 0x5111F7));
  std::vector<Sample> out;
  out.reserve(eval.size());
  for (std::size_t i = 0; i < eval.size(); ++i) {
    const std::size_t k = rng.categorical(weights);
    const auto& group = groups[k];
    Sample s = eval[group[rng.below(group.size())]];
    s.id = workload_detail::Generator::make_id(prefix, i);
    out.push_back(std::move(s));
  }
  return out;
}

/// Reweights scene prevalences by a Dirichlet draw centred on the configured
/// prevalences (concentration scales how far the draw strays) and resamples.
inline std::vector<Sample> shift_distribution(const std::vector<Sample>& eval, const BenchConfig& cfg,
                                              std::uint64_t shift_seed, double concentration = 0.0) {
  const auto base = workload_detail::scene_weights(cfg);
  if (concentration <= 0) concentration = static_cast<double>(cfg.scenes.size());
  std::vector<double> alpha(base.size());
  for (std::size_t k = 0; k < base.size(); ++k) alpha[k] = concentration * base[k];
  Rng rng(mix_seed(shift_seed, 0xD1A1));
  const auto weights = rng.dirichlet(alpha);
  return resample_by_scene(eval, cfg, weights, shift_seed, "shift" + std::to_string(shift_seed));
}

/// Fraction of samples with no defined ground-truth decision.
inline double ambiguity_rate(const std::vector<Sample>& samples, const DecisionSummary& summary) {
  if (samples.empty()) return 0.0;
  std::size_t n = 0;
  for (const auto& s : samples) n += is_ambiguous(s, summary);
  return static_cast<double>(n) / static_cast<double>(samples.size());
}

// ---------------------------------------------------------------------------
// Presets

namespace presets {

inline TargetClass label_class(std::string name, std::vector<std::string> labels) {
  return {std::move(name), LabelSet(std::move(labels))};
}

inline DecisionSummary smart_can_summary(std::string app_id = "smart_can") {
  DecisionSummary s;
  s.app_id = std::move(app_id);
  s.decision_type = DecisionType::MultiChoice;
  s.order = MappingOrder::ApiOutput;
  s.classes = {
      label_class("Recycle", {"plastic", "wood", "glass", "paper", "cardboard", "metal", "aluminum", "tin", "carton"}),
      label_class("Compost", {"food", "produce", "snack"}),
      label_class("Donate", {"clothing", "jacket", "shirt", "pants", "footwear", "shoe"}),
  };
  return s;
}

inline std::vector<Scene> uniform_scenes(std::vector<std::vector<std::string>> sets) {
  std::vector<Scene> out;
  const double p = 1.0 / static_cast<double>(sets.size());
  for (auto& s : sets) out.push_back({std::move(s), p});
  return out;
}

// Multi-Choice / API-output order with the smart-can classes.
inline BenchConfig b1(std::uint64_t seed = 7) {
  BenchConfig c;
  c.name = "b1";
  c.vocab = {"plastic", "wood",  "glass", "paper", "cardboard", "metal",  "aluminum", "tin",     "carton",
             "food",    "produce", "snack", "clothing", "jacket", "shirt", "pants",   "footwear", "shoe",
             "bottle",  "jar",   "banana", "apple", "table",     "person", "tree",     "sky",     "dog",  "car"};
  c.scenes = uniform_scenes({
      {"plastic", "bottle"}, {"glass", "jar"}, {"paper"}, {"cardboard"}, {"metal"}, {"aluminum"}, {"tin"},
      {"carton"}, {"wood"},
      {"food", "banana"}, {"produce", "apple"}, {"snack"},
      {"clothing"}, {"jacket"}, {"shirt"}, {"pants"}, {"footwear", "shoe"},
      {"table", "person"}, {"tree", "sky"}, {"dog"}, {"car"},
  });
  c.confusable = {
      {"paper", "cardboard", 0.97}, {"cardboard", "carton", 0.97}, {"metal", "aluminum", 0.97},
      {"aluminum", "tin", 0.97},    {"jacket", "shirt", 0.97},     {"shirt", "clothing", 0.97},
      {"pants", "clothing", 0.95},  {"glass", "food", 0.9},        {"snack", "plastic", 0.9},
  };
  c.noise_sigma = 0.1;
  c.seed = seed;
  c.summary = smart_can_summary();
  return c;
}

// Multi-Select over four classes.
inline BenchConfig b2(std::uint64_t seed = 7) {
  BenchConfig c;
  c.name = "b2";
  c.vocab = {"cat",  "dog",   "bird",  "horse", "car",    "truck", "bus",   "bicycle", "tree", "flower",
             "grass", "mountain", "chair", "table", "sofa", "lamp", "sky", "road", "person", "cloud"};
  c.scenes = uniform_scenes({
      {"cat"}, {"dog"}, {"bird", "tree"}, {"horse", "grass"}, {"car", "road"}, {"truck", "road"}, {"bus"},
      {"bicycle", "person"}, {"flower"}, {"mountain", "sky"}, {"chair", "table"}, {"sofa", "lamp"},
      {"dog", "sofa"}, {"cat", "chair"}, {"car", "tree"}, {"person"}, {"sky", "cloud"},
  });
  c.confusable = {
      {"cat", "dog", 0.99},   {"car", "truck", 0.99}, {"truck", "bus", 0.99}, {"chair", "sofa", 0.99},
      {"tree", "flower", 0.95}, {"bird", "cloud", 0.9}, {"horse", "dog", 0.9},
      {"lamp", "flower", 0.9},  {"bicycle", "chair", 0.9}, {"person", "cat", 0.9},
  };
  c.noise_sigma = 0.15;
  c.seed = seed;
  DecisionSummary s;
  s.app_id = "scene_tagger";
  s.decision_type = DecisionType::MultiSelect;
  s.order = MappingOrder::NotApplicable;
  s.classes = {
      label_class("Animal", {"cat", "dog", "bird", "horse"}),
      label_class("Vehicle", {"car", "truck", "bus", "bicycle"}),
      label_class("Nature", {"tree", "flower", "grass", "mountain"}),
      label_class("Furniture", {"chair", "table", "sofa", "lamp"}),
  };
  c.summary = s;
  return c;
}

// True-False over a single class.
inline BenchConfig b3(std::uint64_t seed = 7) {
  BenchConfig c;
  c.name = "b3";
  c.vocab = {"knife", "scissors", "gun", "lighter", "hammer", "spoon", "fork", "pen", "phone", "key",
             "book",  "cup",      "bottle", "toy",  "wallet", "glasses"};
  c.scenes = uniform_scenes({
      {"knife"}, {"scissors"}, {"gun"}, {"lighter"}, {"hammer"}, {"knife", "fork"},
      {"spoon"}, {"fork"}, {"pen"}, {"phone"}, {"key", "wallet"}, {"book"}, {"cup"}, {"bottle"}, {"toy"},
      {"glasses"},
  });
  c.confusable = {
      {"knife", "scissors", 0.97}, {"gun", "lighter", 0.97}, {"lighter", "hammer", 0.95},
      {"knife", "spoon", 0.9},     {"scissors", "pen", 0.9}, {"lighter", "phone", 0.9},
  };
  c.noise_sigma = 0.1;
  c.seed = seed;
  DecisionSummary s;
  s.app_id = "hazard_check";
  s.decision_type = DecisionType::TrueFalse;
  s.order = MappingOrder::NotApplicable;
  s.classes = {label_class("Hazard", {"knife", "scissors", "gun", "lighter", "hammer"})};
  c.summary = s;
  return c;
}

inline BenchConfig by_name(std::string_view name, std::uint64_t seed) {
  if (name == "b1") return b1(seed);
  if (name == "b2") return b2(seed);
  if (name == "b3") return b3(seed);
  throw Error(ErrorCode::InvalidInput, "unknown preset '" + std::string(name) + "' (expected b1, b2 or b3)");
}

}  // namespace presets

}  // namespace chameleon
