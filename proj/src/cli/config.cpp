// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include "eigv/cli/config.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <variant>

namespace eigv::cli {

namespace {

using nlohmann::json;

static_assert(std::is_same_v<std::uint64_t, std::size_t>, "seeds share the size_t binding");

// One flat config key bound to a field.
struct Field {
  const char* key;
  std::variant<std::size_t*, double*, bool*, std::string*, std::filesystem::path*,
               trainkit::TrainMode*, backbone::RepresentationLayer*>
      target;
};

std::vector<Field> fields(CliConfig& c) {
  auto& g = c.gen;
  auto& t = c.train;
  return {
      {"n_videos", &g.n_videos},
      {"n_val", &g.n_val},
      {"n_test_iid", &g.n_test_iid},
      {"n_test_ood", &g.n_test_ood},
      {"clips", &g.clips},
      {"d_in", &g.d_in},
      {"n_concepts_causal", &g.n_concepts_causal},
      {"n_concepts_env", &g.n_concepts_env},
      {"n_question_concepts", &g.n_question_concepts},
      {"n_answers", &g.n_answers},
      {"n_causal_clips", &g.n_causal_clips},
      {"d_q", &g.d_q},
      {"question_length", &g.question_length},
      {"rho_train", &g.rho_train},
      {"rho_test", &g.rho_test},
      {"noise_sigma", &g.noise_sigma},
      {"data_seed", &g.seed},
      {"epochs", &t.epochs},
      {"lr", &t.lr},
      {"patience", &t.patience},
      {"decay", &t.decay},
      {"lr_floor", &t.lr_floor},
      {"batch_size", &t.batch_size},
      {"beta", &t.beta},
      {"alpha", &t.alpha},
      {"tau_g", &t.tau_g},
      {"tau_c", &t.tau_c},
      {"normalize_cl", &t.normalize_cl},
      {"n_visual_negatives", &t.n_visual_negatives},
      {"n_question_negatives", &t.n_question_negatives},
      {"bank_capacity", &t.bank_capacity},
      {"seed", &t.seed},
      {"mode", &t.mode},
      {"hidden", &t.hidden},
      {"representation", &t.representation},
      {"adam_beta1", &t.adam_beta1},
      {"adam_beta2", &t.adam_beta2},
      {"adam_eps", &t.adam_eps},
      {"corpus_dir", &c.corpus_dir},
      {"checkpoint", &c.checkpoint},
      {"out_dir", &c.out_dir},
      {"paper_fidelity", &c.paper_fidelity},
      {"n_probes", &c.n_probes},
  };
}

std::string_view layer_name(backbone::RepresentationLayer layer) {
  return layer == backbone::RepresentationLayer::kLogits ? "logits" : "fused";
}

[[noreturn]] void mismatch(const std::string& key, const char* want, const json& got) {
  throw Error(Errc::kConfig, "config key '" + key + "': expected " + want + ", got " +
                                 std::string(got.type_name()) + " " + got.dump());
}

struct Assign {
  const std::string& key;
  const json& value;

  void operator()(std::size_t* p) const {
    const bool ok = value.is_number_unsigned() ||
                    (value.is_number_integer() && value.get<std::int64_t>() >= 0);
    if (!ok) mismatch(key, "non-negative integer", value);
    *p = value.get<std::size_t>();
  }
  void operator()(double* p) const {
    if (!value.is_number()) mismatch(key, "number", value);
    *p = value.get<double>();
  }
  void operator()(bool* p) const {
    if (!value.is_boolean()) mismatch(key, "boolean", value);
    *p = value.get<bool>();
  }
  void operator()(std::string* p) const {
    if (!value.is_string()) mismatch(key, "string", value);
    *p = value.get<std::string>();
  }
  void operator()(std::filesystem::path* p) const {
    if (!value.is_string()) mismatch(key, "path string", value);
    *p = value.get<std::string>();
  }
  void operator()(trainkit::TrainMode* p) const {
    if (!value.is_string()) mismatch(key, "one of eigv, erm-baseline, mixup-baseline", value);
    try {
      *p = trainkit::parse_mode(value.get<std::string>());
    } catch (const Error&) {
      mismatch(key, "one of eigv, erm-baseline, mixup-baseline", value);
    }
  }
  void operator()(backbone::RepresentationLayer* p) const {
    const std::string s = value.is_string() ? value.get<std::string>() : "";
    if (s == "fused") {
      *p = backbone::RepresentationLayer::kFused;
    } else if (s == "logits") {
      *p = backbone::RepresentationLayer::kLogits;
    } else {
      mismatch(key, "\"fused\" or \"logits\"", value);
    }
  }
};

struct Read {
  json operator()(std::filesystem::path* p) const { return p->string(); }
  json operator()(trainkit::TrainMode* p) const { return trainkit::mode_name(*p); }
  json operator()(backbone::RepresentationLayer* p) const { return layer_name(*p); }
  template <class T>
  json operator()(T* p) const {
    return *p;
  }
};

void assign(CliConfig& cfg, const std::string& key, const json& value) {
  for (auto& f : fields(cfg)) {
    if (key == f.key) {
      std::visit(Assign{key, value}, f.target);
      return;
    }
  }
  throw Error(Errc::kConfig, "unknown config key '" + key + "'");
}

bool is_text_key(CliConfig& cfg, const std::string& key) {
  for (auto& f : fields(cfg)) {
    if (key == f.key) {
      return std::holds_alternative<std::filesystem::path*>(f.target) ||
             std::holds_alternative<std::string*>(f.target) ||
             std::holds_alternative<trainkit::TrainMode*>(f.target) ||
             std::holds_alternative<backbone::RepresentationLayer*>(f.target);
    }
  }
  throw Error(Errc::kConfig, "unknown config key '" + key + "'");
}

}  // namespace

void CliConfig::validate() const {
  gen.validate();
  train.validate();
  if (n_probes == 0) throw Error(Errc::kConfig, "n_probes must be positive");
  if (train.batch_size > gen.n_videos) {
    throw Error(Errc::kConfig, "batch_size exceeds n_videos");
  }
}

nlohmann::json to_json(const CliConfig& cfg) {
  json j = json::object();
  for (auto& f : fields(const_cast<CliConfig&>(cfg))) {
    j[f.key] = std::visit(Read{}, f.target);
  }
  return j;
}

CliConfig resolve_config(const nlohmann::json& file, const std::vector<std::string>& overrides,
                         const std::optional<std::string>& env_seed) {
  if (!file.is_object()) throw Error(Errc::kConfig, "config file must hold a JSON object");
  CliConfig cfg;
  if (env_seed) {
    json seed;
    try {
      seed = json::parse(*env_seed);
    } catch (const json::exception&) {
      throw Error(Errc::kConfig, "EIGV_SEED must be a non-negative integer, got '" + *env_seed + "'");
    }
    assign(cfg, "seed", seed);
  }
  for (const auto& [key, value] : file.items()) assign(cfg, key, value);
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(Errc::kConfig, "override '" + o + "' is not of the form key=value");
    }
    const std::string key = o.substr(0, eq), text = o.substr(eq + 1);
    json value;
    if (is_text_key(cfg, key)) {
      value = text;
    } else {
      try {
        value = json::parse(text);
      } catch (const json::exception&) {
        value = text;
      }
    }
    assign(cfg, key, value);
  }
  if (cfg.paper_fidelity) cfg.train.hidden = 512;
  cfg.validate();
  return cfg;
}

CliConfig parse_config(const std::optional<std::filesystem::path>& path,
                       const std::vector<std::string>& overrides) {
  json file = json::object();
  if (path) {
    std::ifstream in(*path);
    if (!in) throw Error(Errc::kIo, "cannot open config file " + path->string());
    try {
      file = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(Errc::kConfig, "config file " + path->string() + " is not valid JSON: " + e.what());
    }
  }
  std::optional<std::string> env_seed;
  if (const char* s = std::getenv("EIGV_SEED"); s != nullptr && *s != '\0') env_seed = s;
  return resolve_config(file, overrides, env_seed);
}

std::filesystem::path write_resolved(const CliConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  const auto path = cfg.out_dir / "resolved_config.json";
  std::ofstream out(path);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  out << to_json(cfg).dump(2) << '\n';
  return path;
}

}  // namespace eigv::cli
