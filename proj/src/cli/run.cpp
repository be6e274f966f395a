// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include "eigv/cli/run.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "eigv/cli/config.hpp"
#include "eigv/cli/timeline.hpp"

namespace eigv::cli {

namespace {

using nlohmann::json;

struct Args {
  std::string config_path;
  std::string split;
  std::vector<std::size_t> ids;
};

std::vector<std::string> overrides_from(const std::vector<std::string>& extras) {
  std::vector<std::string> out;
  for (const auto& e : extras) {
    if (e.rfind("--", 0) != 0 || e.find('=') == std::string::npos) {
      throw CLI::ExtrasError({e});
    }
    out.push_back(e.substr(2));
  }
  return out;
}

datagen::CorpusSet load_corpus(const CliConfig& cfg) {
  if (!std::filesystem::exists(cfg.corpus_dir / "manifest.json")) {
    throw Error(Errc::kIo, "no corpus at " + cfg.corpus_dir.string() + " (run `eigv synth` first)");
  }
  return datagen::read_corpus(cfg.corpus_dir);
}

trainkit::EigvModel load_model(const CliConfig& cfg, const datagen::CorpusSet& corpus) {
  if (!std::filesystem::exists(cfg.checkpoint)) {
    throw Error(Errc::kIo, "no checkpoint at " + cfg.checkpoint.string() + " (run `eigv train` first)");
  }
  return trainkit::load_checkpoint(cfg.checkpoint, trainkit::model_dims(corpus.config, cfg.train));
}

std::vector<datagen::Split> splits_for(const std::string& name) {
  if (name.empty()) return {datagen::Split::kTestIid, datagen::Split::kTestOod};
  return {datagen::parse_split(name)};
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

int cmd_synth(const CliConfig& cfg, std::ostream& out) {
  const auto corpus = datagen::generate_corpus(cfg.gen);
  const auto manifest = datagen::write_corpus(corpus, cfg.corpus_dir);
  out << json{{"manifest", manifest.string()},
              {"train", corpus.train.size()},
              {"val", corpus.val.size()},
              {"test_iid", corpus.test_iid.size()},
              {"test_ood", corpus.test_ood.size()}}
             .dump()
      << '\n';
  return kExitOk;
}

int cmd_train(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto corpus = load_corpus(cfg);
  trainkit::EigvModel model(trainkit::model_dims(corpus.config, cfg.train), cfg.train.representation);
  model.init(cfg.train.seed);
  const auto result = trainkit::train(std::move(model), datagen::LabeledView(corpus.train),
                                      datagen::LabeledView(corpus.val), cfg.train,
                                      [&](const trainkit::EpochRecord& r) {
                                        err << json(r).dump() << '\n';
                                      });
  trainkit::save_checkpoint(result.model, cfg.checkpoint);
  const json history = {{"mode", trainkit::mode_name(cfg.train.mode)},
                        {"epochs", result.history},
                        {"step_losses", result.step_losses}};
  const auto history_path = cfg.out_dir / "history.json";
  write_json(history_path, history);
  out << json{{"checkpoint", cfg.checkpoint.string()},
              {"history", history_path.string()},
              {"final_val_accuracy", result.history.back().val_accuracy}}
             .dump()
      << '\n';
  return kExitOk;
}

int cmd_eval(const CliConfig& cfg, const Args& args, std::ostream& out) {
  const auto corpus = load_corpus(cfg);
  const auto model = load_model(cfg, corpus);
  json report = json::object();
  for (auto split : splits_for(args.split)) {
    report[std::string(datagen::split_name(split))] = trainkit::evaluate(model, corpus.get(split));
  }
  write_json(cfg.out_dir / "metrics.json", report);
  out << report.dump() << '\n';
  return kExitOk;
}

int cmd_explain(const CliConfig& cfg, const Args& args, std::ostream& out) {
  if (args.ids.empty()) throw CLI::RequiredError("--ids");
  const auto corpus = load_corpus(cfg);
  const auto model = load_model(cfg, corpus);
  const auto split = args.split.empty() ? datagen::Split::kTestOod : datagen::parse_split(args.split);
  const auto& data = corpus.get(split);
  json written = json::array();
  for (std::size_t id : args.ids) {
    if (id >= data.size()) {
      throw Error(Errc::kInvalidArgument, "sample id " + std::to_string(id) + " out of range for " +
                                              std::string(datagen::split_name(split)) + " (" +
                                              std::to_string(data.size()) + " samples)");
    }
    const auto t = make_timeline(model, data.samples[id], id);
    const std::string stem =
        "timeline_" + std::string(datagen::split_name(split)) + "_" + std::to_string(id);
    for (const auto& p : write_timeline(t, cfg.out_dir, stem)) written.push_back(p.string());
  }
  out << json{{"files", written}}.dump() << '\n';
  return kExitOk;
}

int cmd_diag(const CliConfig& cfg, const Args& args, std::ostream& out) {
  const auto corpus = load_corpus(cfg);
  const auto model = load_model(cfg, corpus);
  json report = json::object();
  for (auto split : splits_for(args.split.empty() ? "test_ood" : args.split)) {
    numkit::RngStream rng(cfg.train.seed, "diag");
    report[std::string(datagen::split_name(split))] =
        trainkit::diagnostics(model, corpus.get(split), cfg.n_probes, rng);
  }
  write_json(cfg.out_dir / "diagnostics.json", report);
  out << report.dump() << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equivariant/invariant grounding for video question answering on synthetic clips",
               "eigv"};
  app.require_subcommand(1);
  app.footer(
      "Any config key can be overridden as --key=value (for example --seed=7 --epochs=10).\n"
      "Precedence: overrides > config file > EIGV_SEED > defaults.");

  Args args;
  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"synth", "generate the synthetic corpus into corpus_dir"},
      {"train", "train on corpus_dir; writes checkpoint and history.json"},
      {"eval", "accuracy and grounding IoU per split (JSON)"},
      {"explain", "write SVG/CSV grounding timelines for --ids"},
      {"diag", "invariance gap and equivariance score (JSON)"},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->allow_extras();
    sub->add_option("-c,--config", args.config_path, "JSON config file");
    if (std::string_view(c.name) != "synth" && std::string_view(c.name) != "train") {
      sub->add_option("--split", args.split, "train, val, test_iid or test_ood");
    }
    if (std::string_view(c.name) == "explain") {
      sub->add_option("--ids", args.ids, "comma-separated sample ids")->delimiter(',');
    }
  }

  CLI::App* chosen = nullptr;
  std::vector<std::string> overrides;
  try {
    app.parse(argc, argv);
    chosen = app.get_subcommands().front();
    overrides = overrides_from(chosen->remaining());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  CliConfig cfg;
  try {
    std::optional<std::filesystem::path> path;
    if (!args.config_path.empty()) path = args.config_path;
    cfg = parse_config(path, overrides);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == Errc::kIo ? kExitFailure : kExitUsage;
  }

  const std::string name = chosen->get_name();
  try {
    write_resolved(cfg);
    if (name == "synth") return cmd_synth(cfg, out);
    if (name == "train") return cmd_train(cfg, out, err);
    if (name == "eval") return cmd_eval(cfg, args, out);
    if (name == "explain") return cmd_explain(cfg, args, out);
    return cmd_diag(cfg, args, out);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << chosen->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace eigv::cli
