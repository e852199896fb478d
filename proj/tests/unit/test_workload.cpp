#include <gtest/gtest.h>

#include <cmath>

#include "chameleon/trainer.hpp"
#include "chameleon/workload.hpp"
#include "support.hpp"

using namespace chameleon;

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

BenchConfig small_config() {
  BenchConfig c;
  c.name = "small";
  c.vocab = {"a", "b", "c", "d"};
  c.feature_dim = 8;
  c.n_train = 300;
  c.n_eval = 200;
  c.scenes = {{{"a"}, 0.3}, {{"b"}, 0.3}, {{"c", "d"}, 0.2}};
  c.confusable = {{"a", "b", 0.8}};
  c.seed = 5;
  return c;
}

}  // namespace

TEST(Workload, DeterministicForSeed) {
  const auto c = presets::b1(11);
  const auto x = generate_benchmark(c);
  const auto y = generate_benchmark(c);
  EXPECT_EQ(samples_to_jsonl(x.train), samples_to_jsonl(y.train));
  EXPECT_EQ(samples_to_jsonl(x.eval), samples_to_jsonl(y.eval));
  const auto z = generate_benchmark(presets::b1(12));
  EXPECT_NE(samples_to_jsonl(x.train), samples_to_jsonl(z.train));
}

TEST(Workload, ConfusablePairsHitTheirCosine) {
  for (const auto& name : {"b1", "b2", "b3"}) {
    const auto c = presets::by_name(name, 7);
    const workload_detail::Generator gen(c);
    for (const auto& p : c.confusable) {
      const auto& pa = gen.prototypes()[*gen.vocab().find(p.a)];
      const auto& pb = gen.prototypes()[*gen.vocab().find(p.b)];
      EXPECT_NEAR(cosine(pa, pb), p.cosine, 1e-9) << name << " " << p.a << "/" << p.b;
    }
  }
}

TEST(Workload, RejectsInfeasibleConfigs) {
  auto c = small_config();
  c.confusable[0].cosine = 1.2;
  try {
    generate_benchmark(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("infeasible cosine target"), std::string::npos);
  }
  c = small_config();
  c.scenes.push_back({{"zzz"}, 0.1});
  EXPECT_THROW(generate_benchmark(c), Error);
  c = small_config();
  c.scenes[0].prevalence = 0.9;
  EXPECT_THROW(generate_benchmark(c), Error);
  c = small_config();
  c.scenes.push_back({{"a"}, 0.05});
  EXPECT_THROW(generate_benchmark(c), Error);
  c = small_config();
  c.confusable[0].b = "a";
  EXPECT_THROW(generate_benchmark(c), Error);
  c = small_config();
  c.confusable = {{"a", "b", 0.5}, {"b", "c", 0.5}, {"c", "a", 0.5}};
  EXPECT_THROW(generate_benchmark(c), Error);
  EXPECT_THROW(presets::by_name("b9", 1), Error);
}

TEST(Workload, SplitsAreWellFormed) {
  const auto c = presets::b2(3);
  const auto b = generate_benchmark(c);
  EXPECT_EQ(b.train.size(), c.n_train);
  EXPECT_EQ(b.eval.size(), c.n_eval);
  std::set<std::string> ids;
  for (const auto* split : {&b.train, &b.eval})
    for (const auto& s : *split) {
      EXPECT_TRUE(ids.insert(s.id).second) << s.id;
      EXPECT_EQ(s.features.size(), c.feature_dim);
      for (const auto& l : s.truth_labels) EXPECT_TRUE(b.vocab.find(l).has_value()) << l;
    }
  EXPECT_EQ(b.train.front().id, "train-000000");
  EXPECT_EQ(b.eval.back().id, "eval-000999");
}

TEST(Workload, PresetAmbiguityIsLow) {
  for (const auto& name : {"b1", "b2", "b3"}) {
    const auto c = presets::by_name(name, 7);
    ASSERT_TRUE(c.summary.has_value());
    const auto b = generate_benchmark(c);
    EXPECT_LE(ambiguity_rate(b.eval, *c.summary), 0.05) << name;
    EXPECT_LE(ambiguity_rate(b.train, *c.summary), 0.05) << name;
  }
}

TEST(Workload, ScenePrevalenceIsRespected) {
  auto c = small_config();
  c.n_eval = 20000;
  const auto b = generate_benchmark(c);
  std::vector<double> counts(c.scenes.size() + 1, 0);
  for (const auto& s : b.eval) counts[scene_of(s, c)] += 1;
  EXPECT_NEAR(counts[0] / 20000.0, 0.3, 0.015);
  EXPECT_NEAR(counts[2] / 20000.0, 0.2, 0.015);
  EXPECT_NEAR(counts[3] / 20000.0, 0.2, 0.015);  // empty remainder scene
}

TEST(Shift, ReweightingToTheSamePrevalences) {
  const auto c = small_config();
  auto big = c;
  big.n_eval = 20000;
  const auto b = generate_benchmark(big);
  const auto shifted = resample_by_scene(b.eval, c, workload_detail::scene_weights(c), 1, "same");
  ASSERT_EQ(shifted.size(), b.eval.size());
  std::vector<double> counts(c.scenes.size() + 1, 0);
  for (const auto& s : shifted) counts[scene_of(s, c)] += 1;
  EXPECT_NEAR(counts[1] / 20000.0, 0.3, 0.015);
  EXPECT_EQ(shifted.front().id, "same-000000");
}

TEST(Shift, ExtremeShiftKeepsOneScene) {
  const auto c = small_config();
  const auto b = generate_benchmark(c);
  const auto shifted = resample_by_scene(b.eval, c, {0, 0, 1, 0}, 2, "x");
  for (const auto& s : shifted) EXPECT_EQ(s.truth_labels, (std::set<std::string>{"c", "d"}));
  EXPECT_THROW(resample_by_scene(b.eval, c, {0, 0, 0, 0}, 2, "x"), Error);
}

TEST(Shift, DirichletShiftIsSeededAndDrawsFromEval) {
  const auto c = presets::b1(7);
  const auto b = generate_benchmark(c);
  const auto s1 = shift_distribution(b.eval, c, 1);
  const auto s1b = shift_distribution(b.eval, c, 1);
  const auto s2 = shift_distribution(b.eval, c, 2);
  EXPECT_EQ(samples_to_jsonl(s1), samples_to_jsonl(s1b));
  EXPECT_NE(samples_to_jsonl(s1), samples_to_jsonl(s2));
  std::set<std::vector<double>> pool;
  for (const auto& s : b.eval) pool.insert(s.features);
  for (const auto& s : s1) EXPECT_TRUE(pool.count(s.features));
}

TEST(Workload, NoiselessSingletonScenesAreLinearlySeparable) {
  BenchConfig c;
  c.name = "clean";
  c.vocab = {"x", "y", "z"};
  c.feature_dim = 6;
  c.noise_sigma = 0;
  c.scenes = {{{"x"}, 0.34}, {{"y"}, 0.33}, {{"z"}, 0.33}};
  c.n_train = 600;
  c.n_eval = 300;
  c.seed = 9;
  const auto b = generate_benchmark(c);
  DecisionSummary s;
  s.app_id = "clean";
  s.decision_type = DecisionType::MultiChoice;
  s.order = MappingOrder::AppChoice;
  s.classes = {{"X", LabelSet{"x"}}, {"Y", LabelSet{"y"}}, {"Z", LabelSet{"z"}}};
  TrainConfig cfg;
  cfg.hidden = {};
  cfg.learning_rate = 0.05;
  cfg.epochs = 60;
  const auto m = train(b.train, b.vocab, cfg);
  EXPECT_EQ(evaluate(m, b.eval, s).incorrect_decision_rate, 0.0);
}

TEST(Workload, ConfigJsonRoundTrip) {
  for (const auto& name : {"b1", "b2", "b3"}) {
    const auto c = presets::by_name(name, 4);
    const auto back = bench_config_from_json(to_json(c));
    EXPECT_EQ(to_json(back).dump(), to_json(c).dump());
    EXPECT_EQ(samples_to_jsonl(generate_benchmark(back).eval), samples_to_jsonl(generate_benchmark(c).eval));
  }
}
