#include <gtest/gtest.h>

#include <cmath>

#include "chameleon/loss.hpp"
#include "support.hpp"

using namespace chameleon;
using cham_test::smart_can;

namespace {

Vocabulary smart_can_vocab() {
  std::vector<std::string> labels;
  for (const auto& c : smart_can().classes)
    for (const auto& l : c.labels()) labels.push_back(l);
  labels.push_back("banana");
  labels.push_back("table");
  return Vocabulary(labels);
}

// Scores where every member of a class shares one value, the rest are 0.
std::vector<double> class_scores(const Vocabulary& v, const DecisionSummary& s, const std::vector<double>& level) {
  std::vector<double> scores(v.size(), 0.0);
  for (std::size_t k = 0; k < s.classes.size(); ++k)
    for (const auto& l : s.classes[k].labels()) scores[*v.find(l)] = level[k];
  return scores;
}

}  // namespace

TEST(SmoothMax, Singleton) {
  const std::vector<double> s{0.2};
  const std::vector<std::size_t> idx{0};
  const auto m = class_smoothmax(s, idx, 0.01);
  EXPECT_DOUBLE_EQ(m.value, 0.2);
  EXPECT_DOUBLE_EQ(m.weights[0], 1.0);
}

TEST(SmoothMax, TwoEqualLabels) {
  const std::vector<double> s{0.5, 0.5};
  const std::vector<std::size_t> idx{0, 1};
  const auto m = class_smoothmax(s, idx, 0.05);
  EXPECT_NEAR(m.value, 0.5 + 0.05 * std::log(2.0), 1e-12);
  EXPECT_NEAR(m.value, 0.534657, 1e-6);
  EXPECT_NEAR(m.weights[0], 0.5, 1e-12);
  EXPECT_NEAR(m.weights[1], 0.5, 1e-12);
}

TEST(SmoothMax, HardMaxLimit) {
  const std::vector<double> s{0.7, 0.2};
  const std::vector<std::size_t> idx{0, 1};
  double prev = 1e9;
  for (double tau : {0.1, 0.01, 0.001, 1e-4}) {
    const auto m = class_smoothmax(s, idx, tau);
    EXPECT_GE(m.value, 0.7);
    EXPECT_LE(m.value, prev);
    prev = m.value;
  }
  EXPECT_NEAR(prev, 0.7, 1e-9);
}

TEST(SmoothMax, EmptyClassIsError) {
  const std::vector<double> s{0.5};
  const std::vector<std::size_t> none;
  EXPECT_THROW(class_smoothmax(s, none, 0.01), Error);
}

TEST(LossConfig, EnforcesTemperatureBound) {
  EXPECT_NO_THROW(LossConfig::create(0.5, {0.05, 0.01, 0.1}, 148));
  EXPECT_THROW(LossConfig::create(0.5, {0.05, 0.01, 0.1}, 149), Error);
  EXPECT_THROW(LossConfig::create(0.5, {0.05, 0.05, 0.1}, 3), Error);
  EXPECT_NO_THROW(LossConfig::create(0.5, {0.05, 0.5, 0.1}, 1));
  EXPECT_THROW(LossConfig::create(0.5, {0.0, 0.01, 0.1}, 2), Error);
  EXPECT_THROW(LossConfig::create(1.0, {}, 2), Error);
}

TEST(DecisionLoss, TrueFalseMarginExamples) {
  DecisionSummary s;
  s.app_id = "t";
  s.decision_type = DecisionType::TrueFalse;
  s.order = MappingOrder::NotApplicable;
  s.classes = {{"C", LabelSet{"x"}}};
  const Vocabulary v({"x", "y"});
  const BoundSummary b(s, v);
  const auto cfg = LossConfig::for_summary(b);
  const std::vector<double> at_margin{0.55, 0.1};
  EXPECT_NEAR(decision_loss(at_margin, DecisionOutcome::boolean(true), b, cfg).value, 0.0, 1e-15);
  const std::vector<double> at_theta{0.5, 0.1};
  EXPECT_NEAR(decision_loss(at_theta, DecisionOutcome::boolean(true), b, cfg).value, 0.05, 1e-15);
  const std::vector<double> off{0.2, 0.9};
  EXPECT_NEAR(decision_loss(off, DecisionOutcome::boolean(false), b, cfg).value, 0.0, 1e-15);
  EXPECT_NEAR(decision_loss(off, DecisionOutcome::boolean(true), b, cfg).value, 0.35, 1e-12);
}

TEST(DecisionLoss, SmartCanApiOutputExample) {
  const auto v = smart_can_vocab();
  const BoundSummary b(smart_can(), v);
  const auto cfg = LossConfig::for_summary(b);
  // one active label per class; the zero-scored members add about tau*e^-10 each
  std::vector<double> scores(v.size(), 0.0);
  scores[*v.find("glass")] = 0.9;
  scores[*v.find("food")] = 0.6;
  scores[*v.find("shirt")] = 0.1;
  const auto strengths = class_strengths(scores, b, cfg.tau());
  EXPECT_NEAR(strengths[0].value, 0.9, 1e-5);
  EXPECT_NEAR(strengths[1].value, 0.6, 1e-5);
  EXPECT_NEAR(strengths[2].value, 0.1, 1e-5);
  const auto r = decision_loss(scores, DecisionOutcome::choice("Compost"), b, cfg);
  // h(0.5+0.05-0.6) + h(0.9-0.6+0.05) + h(0.1-0.6+0.05)
  EXPECT_NEAR(r.value, 0.35, 1e-5);
  EXPECT_NEAR(r.decision_component, 0.35, 1e-5);
}

TEST(DecisionLoss, TypeMismatchIsTyped) {
  const auto v = smart_can_vocab();
  const BoundSummary b(smart_can(), v);
  const auto cfg = LossConfig::for_summary(b);
  const std::vector<double> scores(v.size(), 0.3);
  try {
    decision_loss(scores, DecisionOutcome::boolean(true), b, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::KindMismatch);
  }
  EXPECT_THROW(decision_loss(scores, DecisionOutcome::ambiguous(), b, cfg), Error);
  EXPECT_THROW(decision_loss(scores, DecisionOutcome::choice("Nope"), b, cfg), Error);
}

TEST(DecisionLoss, AppChoiceOnlyPenalizesEarlierClasses) {
  const auto v = smart_can_vocab();
  const auto s = smart_can(MappingOrder::AppChoice);
  const BoundSummary b(s, v);
  const auto cfg = LossConfig::for_summary(b);
  std::vector<double> scores(v.size(), 0.0);
  scores[*v.find("food")] = 0.9;
  scores[*v.find("shirt")] = 0.95;  // later class, ignored for target Compost
  EXPECT_NEAR(decision_loss(scores, DecisionOutcome::choice("Compost"), b, cfg).value, 0.0, 1e-12);
  scores[*v.find("glass")] = 0.6;  // earlier class present -> penalized
  EXPECT_NEAR(decision_loss(scores, DecisionOutcome::choice("Compost"), b, cfg).value, 0.6 - 0.5 + 0.05, 1e-9);
}

TEST(DecisionLoss, DescentAlignment) {
  const auto v = smart_can_vocab();
  Rng rng(12);
  const auto base = smart_can();
  for (auto order : {MappingOrder::ApiOutput, MappingOrder::AppChoice}) {
    const BoundSummary b(smart_can(order), v);
    const auto cfg = LossConfig::for_summary(b);
    for (int i = 0; i < 500; ++i) {
      std::vector<double> scores(v.size());
      for (auto& x : scores) x = rng.uniform();
      const auto& target = base.classes[rng.below(3)];
      const auto r = decision_loss(scores, DecisionOutcome::choice(target.name), b, cfg);
      for (const auto& l : target.labels()) ASSERT_LE(r.grad[*v.find(l)], 0.0);
    }
  }
}

TEST(Bce, Examples) {
  const std::vector<double> half{0.5}, one{1.0};
  EXPECT_NEAR(bce_loss(half, one).value, std::log(2.0), 1e-12);
  EXPECT_NEAR(bce_loss(half, one).value, 0.6931, 1e-4);
  const std::vector<double> perfect{1.0, 0.0, 1.0}, bits{1.0, 0.0, 1.0};
  EXPECT_LE(bce_loss(perfect, bits).value, -std::log(1.0 - kBceEpsilon) * 1.0001);
  const std::vector<double> high{0.8}, zero{0.0};
  EXPECT_GT(bce_loss(high, zero).grad[0], 0.0);
  const std::vector<double> low{0.2};
  EXPECT_LT(bce_loss(low, one).grad[0], 0.0);
  const std::vector<double> two{0.5, 0.5};
  EXPECT_THROW(bce_loss(two, one), Error);
}

TEST(Bce, MaskedLabelsHaveZeroGradient) {
  const std::vector<double> scores{0.3, 0.9, 0.1}, bits{1.0, 0.0, 0.0};
  const auto r = bce_loss(scores, bits, {true, false, true});
  EXPECT_EQ(r.grad[1], 0.0);
  EXPECT_NE(r.grad[0], 0.0);
  EXPECT_NEAR(r.value, -(std::log(0.3) + std::log(0.9)) / 2.0, 1e-12);
}

TEST(TotalLoss, ComponentsAndLambdaZero) {
  const auto v = smart_can_vocab();
  const BoundSummary b(smart_can(), v);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> scores(v.size());
    for (auto& x : scores) x = rng.uniform(0.01, 0.99);
    const auto sample = cham_test::truth({smart_can().classes[rng.below(3)].labels()[0], "banana"});
    const auto cfg = LossConfig::for_summary(b, {0.05, 0.01, 0.1});
    const auto r = total_loss(scores, sample, b, v, cfg);
    EXPECT_NEAR(r.value, r.decision_component + 0.1 * r.bce_component, 1e-12);
    EXPECT_GE(r.value, 0.0);
    ASSERT_EQ(r.grad.size(), v.size());

    const auto cfg0 = LossConfig::for_summary(b, {0.05, 0.01, 0.0});
    const auto r0 = total_loss(scores, sample, b, v, cfg0);
    const auto d = decision_loss(scores, ground_truth_decision(sample, b.summary), b, cfg0);
    EXPECT_DOUBLE_EQ(r0.value, d.value);
    EXPECT_EQ(r0.grad, d.grad);
  }
}

TEST(TotalLoss, PerfectScoresZeroDecisionComponent) {
  Rng rng(31);
  for (const auto& combo : cham_test::combos()) {
    for (int i = 0; i < 300; ++i) {
      const auto s = cham_test::random_summary(rng, combo);
      std::vector<std::string> labels;
      for (std::size_t k = 0; k < 20; ++k) labels.push_back(cham_test::pool_label(k));
      const Vocabulary v(labels);
      const BoundSummary b(s, v);
      const auto cfg = LossConfig::for_summary(b);
      std::set<std::string> truth_labels;
      for (const auto& l : labels)
        if (rng.below(5) == 0) truth_labels.insert(l);
      const auto sample = cham_test::truth(truth_labels);
      if (is_ambiguous(sample, s)) continue;
      std::vector<double> scores(v.size());
      for (std::size_t j = 0; j < v.size(); ++j)
        scores[j] = truth_labels.count(v[j]) ? 1.0 - kBceEpsilon : kBceEpsilon;
      const auto r = total_loss(scores, sample, b, v, cfg);
      ASSERT_EQ(r.decision_component, 0.0) << combo.name << " " << serialize_summary(s);
    }
  }
}

TEST(TotalLoss, AmbiguousSampleRejected) {
  const auto v = smart_can_vocab();
  const BoundSummary b(smart_can(), v);
  const std::vector<double> scores(v.size(), 0.5);
  EXPECT_THROW(total_loss(scores, cham_test::truth({"glass", "food"}), b, v, LossConfig::for_summary(b)), Error);
}

TEST(TotalLoss, OutsideLabelsOnlyMoveBce) {
  const auto v = smart_can_vocab();
  const BoundSummary b(smart_can(), v);
  const auto cfg = LossConfig::for_summary(b);
  std::vector<double> scores(v.size(), 0.3);
  const auto sample = cham_test::truth({"food"});
  const auto before = total_loss(scores, sample, b, v, cfg);
  scores[*v.find("banana")] = 0.95;
  const auto after = total_loss(scores, sample, b, v, cfg);
  EXPECT_EQ(before.decision_component, after.decision_component);
  EXPECT_NE(before.bce_component, after.bce_component);
}

TEST(BoundSummary, SkipsLabelsOutsideVocabulary) {
  const Vocabulary v({"glass", "food", "shirt"});
  const BoundSummary b(smart_can(), v);
  EXPECT_EQ(b.members[0].size(), 1u);
  EXPECT_EQ(b.max_class_size(), 1u);
  const auto mask = b.used_mask(v.size());
  EXPECT_TRUE(mask[0] && mask[1] && mask[2]);
  EXPECT_THROW(BoundSummary(smart_can(), Vocabulary({"glass", "food"})), Error);
}

TEST(DecisionLoss, EqualLevelsGiveClosedForm) {
  const auto v = smart_can_vocab();
  const BoundSummary b(smart_can(MappingOrder::AppChoice), v);
  const auto cfg = LossConfig::for_summary(b);
  const auto scores = class_scores(v, smart_can(), {0.2, 0.2, 0.2});
  const auto st = class_strengths(scores, b, cfg.tau());
  EXPECT_NEAR(st[0].value, 0.2 + 0.01 * std::log(9.0), 1e-12);
  EXPECT_NEAR(st[1].value, 0.2 + 0.01 * std::log(3.0), 1e-12);
}

TEST(TotalLoss, GradientMatchesFiniteDifferences) {
  Rng rng(99);
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < 16; ++k) labels.push_back(cham_test::pool_label(k));
  const Vocabulary v(labels);
  int checked = 0;
  for (const auto& combo : cham_test::combos()) {
    for (int i = 0; i < 200; ++i) {
      const auto s = cham_test::random_summary(rng, combo);
      const BoundSummary b(s, v);
      const auto cfg = LossConfig::for_summary(b);
      std::set<std::string> t;
      for (const auto& l : labels)
        if (rng.below(4) == 0) t.insert(l);
      const auto sample = cham_test::truth(t);
      if (is_ambiguous(sample, s)) continue;
      std::vector<double> scores(v.size());
      for (auto& x : scores) x = rng.uniform(0.02, 0.98);
      // skip points sitting on a hinge kink
      const auto target = ground_truth_decision(sample, s);
      const auto st = class_strengths(scores, b, cfg.tau());
      std::vector<double> m;
      for (const auto& x : st) m.push_back(x.value);
      bool kink = false;
      for (const auto& h : decision_hinges(target, b, cfg))
        if (std::abs(hinge_argument(h, m)) < 1e-4) kink = true;
      if (kink) continue;
      const auto r = total_loss(scores, sample, b, v, cfg);
      const double h = 1e-6;
      double num = 0, den = 0;
      for (std::size_t j = 0; j < scores.size(); ++j) {
        auto up = scores, dn = scores;
        up[j] += h;
        dn[j] -= h;
        const double fd = (total_loss(up, sample, b, v, cfg).value - total_loss(dn, sample, b, v, cfg).value) / (2 * h);
        num += (fd - r.grad[j]) * (fd - r.grad[j]);
        den += fd * fd + r.grad[j] * r.grad[j];
      }
      ASSERT_LE(std::sqrt(num), 1e-4 * std::max(1.0, std::sqrt(den))) << combo.name;
      ++checked;
    }
  }
  EXPECT_GT(checked, 400);
}
