// chameleon: command-line entry point.
//
//   extract    app source -> decision summary JSON
//   gen-bench  synthetic benchmark preset -> dataset directory
//   train      dataset -> model file
//   eval       model + dataset + summary -> incorrect-decision report
//   decide     summary + API output -> decision outcome
//   serve      model pool over HTTP

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <pthread.h>
#include <thread>

#include "CLI11.hpp"
#include "chameleon/extract.hpp"
#include "chameleon/http.hpp"
#include "chameleon/oracle.hpp"
#include "chameleon/trainer.hpp"
#include "chameleon/workload.hpp"

#ifndef CHAMELEON_VERSION_STRING
#define CHAMELEON_VERSION_STRING "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace chameleon;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

bool g_json = false;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NumericFailure:
    case ErrorCode::Unavailable: return kExitInternal;
    default: return kExitInput;
  }
}

void report_error(const std::string& message, const char* code) {
  if (g_json)
    std::cerr << json{{"error", message}, {"code", code}}.dump() << "\n";
  else
    std::cerr << "chameleon: error: " << message << "\n";
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  return read_file(path);
}

void emit(const std::string& out_path, const std::string& data) {
  if (out_path.empty() || out_path == "-")
    std::cout << data;
  else
    write_file(out_path, data);
}

json read_json(const std::string& path, const char* what) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + " is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------------------

struct ExtractArgs {
  std::string source;
  double theta = kDefaultTheta;
  std::string app_id;
  std::string out;
};

int run_extract(const ExtractArgs& a) {
  source::SourceUnit unit{a.source, read_text(a.source)};
  const auto result = parse_source(unit, a.theta, a.app_id.empty() ? std::nullopt : std::optional(a.app_id));
  for (const auto& d : result.diagnostics) {
    if (g_json) {
      json j = d.to_json();
      j["file"] = a.source;
      std::cerr << j.dump() << "\n";
    } else {
      std::cerr << a.source << ":" << d.line << ":" << d.column << ": "
                << (d.severity == ParseDiagnostic::Severity::Error ? "error" : "warning") << ": " << d.message << "\n";
    }
  }
  if (!result.ok()) return kExitInput;
  emit(a.out, serialize_summary(*result.summary));
  return kExitOk;
}

struct GenArgs {
  std::string preset;
  std::string config;
  std::uint64_t seed = 7;
  std::string out;
};

int run_gen_bench(const GenArgs& a) {
  CHAMELEON_REQUIRE(a.preset.empty() != a.config.empty(), ErrorCode::InvalidInput,
                    "give exactly one of --preset or --config");
  BenchConfig cfg = a.config.empty() ? presets::by_name(a.preset, a.seed)
                                     : bench_config_from_json(read_json(a.config, "benchmark config"));
  const auto bench = generate_benchmark(cfg);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_file(dir / "train.jsonl", samples_to_jsonl(bench.train));
  write_file(dir / "eval.jsonl", samples_to_jsonl(bench.eval));
  write_file(dir / "vocab.json", json(bench.vocab.labels()).dump() + "\n");
  write_file(dir / "config.json", to_json(cfg).dump(2) + "\n");
  json info{{"out_dir", dir.string()}, {"n_train", bench.train.size()}, {"n_eval", bench.eval.size()},
            {"vocab_size", bench.vocab.size()}};
  if (cfg.summary) {
    write_file(dir / "summary.json", serialize_summary(*cfg.summary));
    info["ambiguity_rate_train"] = ambiguity_rate(bench.train, *cfg.summary);
    info["ambiguity_rate_eval"] = ambiguity_rate(bench.eval, *cfg.summary);
  }
  if (g_json) {
    std::cout << info.dump() << "\n";
  } else {
    std::cout << "wrote " << bench.train.size() << " train / " << bench.eval.size() << " eval samples to "
              << dir.string() << "\n";
    if (cfg.summary)
      std::cout << "ambiguity rate: train " << info["ambiguity_rate_train"].get<double>() << ", eval "
                << info["ambiguity_rate_eval"].get<double>() << "\n";
  }
  return kExitOk;
}

struct TrainArgs {
  std::string data;
  std::string vocab;
  std::string scheme = "generic";
  std::string summary;
  std::string init;
  std::string out;
  TrainConfig cfg;
};

int run_train(TrainArgs a) {
  a.cfg.scheme = parse_scheme(a.scheme);
  std::optional<DecisionSummary> summary;
  if (!a.summary.empty()) summary = load_valid_summary(read_text(a.summary));
  auto data = read_samples_jsonl(a.data);
  const Vocabulary vocab = read_vocab(a.vocab);
  std::size_t dropped = 0;
  if (a.cfg.scheme == Scheme::Chameleon) dropped = drop_ambiguous(data, *summary);
  if (dropped > 0 && !g_json) std::cerr << "excluded " << dropped << " ambiguous training samples\n";
  if (!a.init.empty()) {
    a.cfg.init = load_model(a.init);
    a.cfg.hidden = a.cfg.init->hidden;
  }
  const Model model = train(data, vocab, a.cfg, summary);
  save_model(model, a.out);
  json info{{"model", a.out},
            {"scheme", to_string(a.cfg.scheme)},
            {"trained_for", model.trained_for},
            {"n_train", data.size()},
            {"ambiguous_excluded", dropped}};
  if (g_json)
    std::cout << info.dump() << "\n";
  else
    std::cout << "trained " << to_string(a.cfg.scheme) << " model on " << data.size() << " samples -> " << a.out
              << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string model;
  std::string data;
  std::string summary;
  bool json_out = false;
};

int run_eval(const EvalArgs& a) {
  const Model model = load_model(a.model);
  const auto data = read_samples_jsonl(a.data);
  const auto summary = load_valid_summary(read_text(a.summary));
  const auto report = evaluate(model, data, summary);
  if (a.json_out || g_json) {
    std::cout << report.to_json().dump(2) << "\n";
  } else {
    std::cout << "incorrect_decision_rate " << report.incorrect_decision_rate << " (" << report.incorrect_count
              << "/" << report.n_evaluated() << ", " << report.ambiguous_count << " ambiguous excluded)\n";
  }
  return kExitOk;
}

struct DecideArgs {
  std::string summary;
  std::string output;
  std::optional<double> theta;
};

int run_decide(const DecideArgs& a) {
  DecisionSummary summary = load_valid_summary(read_text(a.summary));
  if (a.theta) summary.theta = *a.theta;
  const ApiOutput output = output_from_json(read_json(a.output, "API output"));
  std::cout << to_json(decide(output, summary)).dump() << "\n";
  return kExitOk;
}

struct ServeArgs {
  std::string pool_dir;
  std::string generic_model;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t jobs = 1;
  int epochs = 30;
};

int run_serve(ServeArgs a) {
  if (a.pool_dir.empty())
    if (const char* env = std::getenv("CHAM_POOL_DIR")) a.pool_dir = env;
  CHAMELEON_REQUIRE(!a.pool_dir.empty(), ErrorCode::InvalidInput, "--pool-dir or CHAM_POOL_DIR is required");
  CHAMELEON_REQUIRE(a.jobs >= 1, ErrorCode::InvalidInput, "--jobs must be >= 1");

  // Signals are taken synchronously by a dedicated thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ServeOptions options;
  options.jobs = a.jobs;
  options.train.epochs = a.epochs;
  ModelPool pool(a.pool_dir, options);
  if (!a.generic_model.empty()) pool.set_generic(load_model(a.generic_model));
  if (!pool.has_generic()) std::cerr << "warning: no generic model loaded; classify will answer 503\n";

  HttpFrontend http(pool);
  const int port = http.bind(a.host, a.port);
  CHAMELEON_REQUIRE(port > 0, ErrorCode::Io, "cannot bind " + a.host + ":" + std::to_string(a.port));
  if (g_json)
    std::cout << json{{"host", a.host}, {"port", port}, {"pool_dir", a.pool_dir}}.dump() << std::endl;
  else
    std::cerr << "listening on " << a.host << ":" << port << "\n";

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    http.stop();
  });
  http.listen_after_bind();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Application-aware customization of multi-label classifiers"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "machine-readable output on every subcommand");
  app.set_version_flag("--version",
                       std::string("chameleon ") + CHAMELEON_VERSION_STRING + " (model format " +
                           std::to_string(kModelFormatVersion) + ")");

  std::function<int()> action;

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "extract the decision summary from an application source");
  extract->add_option("source", ex.source, "application source file ('-' for stdin)")->required();
  extract->add_option("--theta", ex.theta, "confidence threshold recorded in the summary")
      ->check(CLI::Range(0.0, 1.0));
  extract->add_option("--app-id", ex.app_id, "application id (default: file stem)");
  extract->add_option("-o,--output", ex.out, "write the summary here instead of stdout");
  extract->callback([&] { action = [&] { return run_extract(ex); }; });

  GenArgs gen;
  auto* gen_bench = app.add_subcommand("gen-bench", "write a synthetic benchmark");
  gen_bench->add_option("--preset", gen.preset, "b1, b2 or b3");
  gen_bench->add_option("--config", gen.config, "benchmark config JSON instead of a preset");
  gen_bench->add_option("--seed", gen.seed, "generator seed (presets only)");
  gen_bench->add_option("-o,--out", gen.out, "output directory")->required();
  gen_bench->callback([&] { action = [&] { return run_gen_bench(gen); }; });

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "train a model");
  train_cmd->add_option("--data", tr.data, "training samples (JSON lines)")->required();
  train_cmd->add_option("--vocab", tr.vocab, "vocabulary JSON array")->required();
  train_cmd->add_option("--scheme", tr.scheme, "generic | categorized | chameleon")
      ->check(CLI::IsMember({"generic", "categorized", "chameleon"}));
  train_cmd->add_option("--summary", tr.summary, "decision summary (required for categorized/chameleon)");
  train_cmd->add_option("--seed", tr.cfg.seed, "training seed");
  train_cmd->add_option("--init", tr.init, "fine-tune from this model");
  train_cmd->add_option("--epochs", tr.cfg.epochs)->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--batch-size", tr.cfg.batch_size)->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", tr.cfg.learning_rate)->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--hidden", tr.cfg.hidden, "hidden layer widths")->expected(0, -1);
  train_cmd->add_option("--margin", tr.cfg.loss.margin, "decision margin")->check(CLI::PositiveNumber);
  train_cmd->add_option("--tau", tr.cfg.loss.tau, "smooth-max temperature")->check(CLI::PositiveNumber);
  train_cmd->add_option("--bce-weight", tr.cfg.loss.bce_weight, "weight of the BCE regularizer")
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_option("-o,--output", tr.out, "model file")->required();
  train_cmd->callback([&] {
    if (tr.scheme != "generic" && tr.summary.empty())
      throw CLI::ValidationError("--summary", "scheme " + tr.scheme + " requires --summary");
    action = [&] { return run_train(tr); };
  });

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "incorrect-decision rate of a model");
  eval_cmd->add_option("--model", ev.model)->required();
  eval_cmd->add_option("--data", ev.data)->required();
  eval_cmd->add_option("--summary", ev.summary)->required();
  eval_cmd->add_flag("--json", ev.json_out, "print the report as JSON");
  eval_cmd->callback([&] { action = [&] { return run_eval(ev); }; });

  DecideArgs de;
  auto* decide_cmd = app.add_subcommand("decide", "apply a summary to one API output");
  decide_cmd->add_option("--summary", de.summary)->required();
  decide_cmd->add_option("--output", de.output, "API output JSON ('-' for stdin)")->required();
  decide_cmd->add_option("--theta", de.theta, "override the summary threshold")->check(CLI::Range(0.0, 1.0));
  decide_cmd->callback([&] { action = [&] { return run_decide(de); }; });

  ServeArgs sv;
  auto* serve_cmd = app.add_subcommand("serve", "serve the model pool over HTTP");
  serve_cmd->add_option("--pool-dir", sv.pool_dir, "pool directory (default: $CHAM_POOL_DIR)");
  serve_cmd->add_option("--generic-model", sv.generic_model, "install this generic model into the pool");
  serve_cmd->add_option("--host", sv.host);
  serve_cmd->add_option("--port", sv.port)->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--jobs", sv.jobs, "parallel customization jobs")->check(CLI::PositiveNumber);
  serve_cmd->add_option("--epochs", sv.epochs, "epochs per customization job")->check(CLI::NonNegativeNumber);
  serve_cmd->callback([&] { action = [&] { return run_serve(sv); }; });

  for (auto* sub : {extract, gen_bench, train_cmd, eval_cmd, decide_cmd, serve_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    return action ? action() : kExitInput;
  } catch (const Error& e) {
    report_error(e.what(), to_string(e.code()));
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    report_error(e.what(), "io");
    return kExitInput;
  } catch (const std::exception& e) {
    report_error(e.what(), "internal");
    return kExitInternal;
  }
}
