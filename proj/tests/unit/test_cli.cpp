#include <gtest/gtest.h>

#include "chameleon/model.hpp"
#include "support.hpp"

using namespace chameleon;
using cham_test::run_capture;

namespace {

std::string cli() { return CHAM_CLI; }

std::string quote(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST(Cli, Version) {
  int code = 0;
  const auto out = run_capture(cli() + " --version", &code);
  EXPECT_EQ(code, 0);
  EXPECT_NE(out.find("chameleon 0.1.0"), std::string::npos) << out;
  EXPECT_NE(out.find("model format 1"), std::string::npos) << out;
}

TEST(Cli, UnknownFlagIsUsageError) {
  int code = 0;
  run_capture(cli() + " extract --bogus x 2>/dev/null", &code);
  EXPECT_EQ(code, 2);
  run_capture(cli() + " frobnicate 2>/dev/null", &code);
  EXPECT_EQ(code, 2);
}

TEST(Cli, ExtractThenDecideWalkthrough) {
  const auto dir = cham_test::temp_dir("cli_walk");
  const auto src = cham_test::test_dir() / "corpus" / "valid" / "smart_can.py";
  int code = 0;
  run_capture(cli() + " extract " + quote(src) + " -o " + quote(dir / "summary.json"), &code);
  ASSERT_EQ(code, 0);
  const auto summary = parse_summary(read_file(dir / "summary.json"));
  EXPECT_EQ(summary.decision_type, DecisionType::MultiChoice);
  EXPECT_EQ(summary.order, MappingOrder::ApiOutput);

  write_file(dir / "out.json", R"({"labels":[{"name":"glass","score":0.92},{"name":"food","score":0.88},{"name":"tin","score":0.40}]})");
  const auto decided =
      run_capture(cli() + " decide --summary " + quote(dir / "summary.json") + " --output " + quote(dir / "out.json"), &code);
  EXPECT_EQ(code, 0);
  EXPECT_EQ(json::parse(decided), json::parse(R"({"kind":"chosen","value":"Recycle"})"));
}

TEST(Cli, ExtractErrorsCarryPositions) {
  const auto src = cham_test::test_dir() / "corpus" / "invalid" / "helper_function.py";
  int code = 0;
  const auto text = run_capture(cli() + " extract " + quote(src) + " 2>&1", &code);
  EXPECT_EQ(code, 2);
  EXPECT_NE(text.find("helper_function.py:3:1"), std::string::npos) << text;

  const auto js = run_capture(cli() + " --json extract " + quote(src) + " 2>&1 >/dev/null", &code);
  EXPECT_EQ(code, 2);
  const auto first = json::parse(js.substr(0, js.find('\n')));
  EXPECT_EQ(first["line"], 3);
  EXPECT_EQ(first["column"], 1);
  EXPECT_TRUE(first.contains("file"));
}

TEST(Cli, GenBenchTrainEval) {
  const auto dir = cham_test::temp_dir("cli_bench");
  int code = 0;
  run_capture(cli() + " gen-bench --preset b3 --seed 3 -o " + quote(dir / "b3") + " >/dev/null 2>&1", &code);
  ASSERT_EQ(code, 0);
  for (const char* f : {"train.jsonl", "eval.jsonl", "vocab.json", "config.json", "summary.json"})
    EXPECT_TRUE(std::filesystem::exists(dir / "b3" / f)) << f;

  const std::string data = " --data " + quote(dir / "b3" / "train.jsonl") + " --vocab " + quote(dir / "b3" / "vocab.json");
  run_capture(cli() + " train" + data + " --scheme chameleon --epochs 1 -o " + quote(dir / "m.model") + " 2>/dev/null",
              &code);
  EXPECT_EQ(code, 2);  // chameleon without --summary

  run_capture(cli() + " train" + data + " --scheme generic --epochs 2 --hidden 8 -o " + quote(dir / "m.model") +
                  " >/dev/null 2>&1",
              &code);
  ASSERT_EQ(code, 0);
  EXPECT_NO_THROW(load_model(dir / "m.model"));

  const auto report = run_capture(cli() + " --json eval --model " + quote(dir / "m.model") + " --data " +
                                      quote(dir / "b3" / "eval.jsonl") + " --summary " + quote(dir / "b3" / "summary.json"),
                                  &code);
  ASSERT_EQ(code, 0);
  const auto j = json::parse(report);
  EXPECT_TRUE(j.contains("incorrect_decision_rate"));
  EXPECT_GE(j["incorrect_decision_rate"].get<double>(), 0.0);
  EXPECT_LE(j["incorrect_decision_rate"].get<double>(), 1.0);
}

TEST(Cli, MissingFileIsInputError) {
  int code = 0;
  run_capture(cli() + " decide --summary /nonexistent.json --output /nonexistent2.json 2>/dev/null", &code);
  EXPECT_EQ(code, 2);
}
