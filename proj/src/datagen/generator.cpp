// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <numeric>
#include <string>

#include "eigv/datagen/corpus.hpp"
#include "eigv/numkit/rng.hpp"

namespace eigv::datagen {

using numkit::RngStream;

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::kConfig, what);
}

Tensor<float> gaussian_matrix(std::size_t rows, std::size_t cols, RngStream& rng) {
  Tensor<float> t({rows, cols});
  for (auto& v : t.values()) v = static_cast<float>(rng.normal());
  return t;
}

std::vector<int> shuffled_range(std::size_t n, RngStream& rng) {
  std::vector<int> out(n);
  std::iota(out.begin(), out.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(out[i - 1], out[rng.below(i)]);
  }
  return out;
}

}  // namespace

void GenConfig::validate() const {
  require(clips >= 2, "clips must be at least 2");
  require(n_causal_clips >= 1 && n_causal_clips < clips,
          "n_causal_clips must satisfy 1 <= n_causal_clips < clips");
  require(d_in >= 1, "d_in must be positive");
  require(d_q >= 1, "d_q must be positive");
  require(question_length >= 1, "question_length must be positive");
  require(n_answers >= 2, "n_answers must be at least 2");
  require(n_concepts_causal >= 1, "n_concepts_causal must be positive");
  require(n_question_concepts >= 1, "n_question_concepts must be positive");
  require(n_concepts_env >= n_answers,
          "n_concepts_env must be at least n_answers so every answer has a paired environment");
  require(rho_train >= 0.0 && rho_train <= 1.0, "rho_train must lie in [0, 1]");
  require(rho_test >= 0.0 && rho_test <= 1.0, "rho_test must lie in [0, 1]");
  require(noise_sigma >= 0.0, "noise_sigma must be non-negative");
}

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTestIid: return "test_iid";
    case Split::kTestOod: return "test_ood";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  for (Split s : kAllSplits) {
    if (split_name(s) == name) return s;
  }
  throw Error(Errc::kInvalidArgument, "unknown split " + std::string(name));
}

const Corpus& CorpusSet::get(Split split) const {
  switch (split) {
    case Split::kTrain: return train;
    case Split::kVal: return val;
    case Split::kTestIid: return test_iid;
    case Split::kTestOod: return test_ood;
  }
  return train;
}

Corpus& CorpusSet::get(Split split) {
  return const_cast<Corpus&>(std::as_const(*this).get(split));
}

World make_world(const GenConfig& cfg) {
  cfg.validate();
  RngStream rng(cfg.seed, "world");
  World w;
  auto causal_rng = rng.derive("causal");
  auto env_rng = rng.derive("env");
  auto question_rng = rng.derive("question");
  auto table_rng = rng.derive("answers");
  w.causal_embeddings = gaussian_matrix(cfg.n_concepts_causal, cfg.d_in, causal_rng);
  w.env_embeddings = gaussian_matrix(cfg.n_concepts_env, cfg.d_in, env_rng);
  for (std::size_t q = 0; q < cfg.n_question_concepts; ++q) {
    w.question_embeddings.push_back(
        gaussian_matrix(cfg.question_length, cfg.d_q, question_rng));
  }
  // Each question concept reads the causal concept through its own
  // permutation of answers, so the answer depends on both parents.
  for (std::size_t q = 0; q < cfg.n_question_concepts; ++q) {
    const auto perm = shuffled_range(std::max(cfg.n_answers, cfg.n_concepts_causal), table_rng);
    std::vector<int> row(cfg.n_concepts_causal);
    for (std::size_t c = 0; c < cfg.n_concepts_causal; ++c) {
      row[c] = perm[c] % static_cast<int>(cfg.n_answers);
    }
    w.answer_table.push_back(std::move(row));
  }
  const auto env_perm = shuffled_range(cfg.n_concepts_env, table_rng);
  w.paired_env.assign(env_perm.begin(), env_perm.begin() + static_cast<long>(cfg.n_answers));
  return w;
}

GeneratedSample generate_sample(const GenConfig& cfg, const World& world, Split split,
                                std::size_t index) {
  RngStream rng(cfg.seed, std::string("sample/") + std::string(split_name(split)) + "/" +
                              std::to_string(index));
  const double rho = split == Split::kTestOod ? cfg.rho_test : cfg.rho_train;
  const float sigma = static_cast<float>(cfg.noise_sigma);

  GeneratedSample out;
  auto& s = out.sample;
  auto& concepts = out.concepts;
  concepts.question_concept = static_cast<int>(rng.below(cfg.n_question_concepts));
  concepts.causal_concept = static_cast<int>(rng.below(cfg.n_concepts_causal));
  s.answer = world.answer_for(concepts.question_concept, concepts.causal_concept);

  // Causal positions: the first n_causal_clips entries of a shuffled range.
  const auto order = shuffled_range(cfg.clips, rng);
  s.truth_mask.assign(cfg.clips, false);
  for (std::size_t i = 0; i < cfg.n_causal_clips; ++i) s.truth_mask[order[i]] = true;

  const int paired = world.paired_env.at(s.answer);
  s.video = Tensor<float>({cfg.clips, cfg.d_in});
  concepts.clip_env_concepts.assign(cfg.clips, -1);
  for (std::size_t k = 0; k < cfg.clips; ++k) {
    std::span<const float> base;
    if (s.truth_mask[k]) {
      base = world.causal_embeddings.row(static_cast<std::size_t>(concepts.causal_concept));
    } else {
      const bool spurious = rng.uniform01() < rho;
      const int env = spurious ? paired : static_cast<int>(rng.below(cfg.n_concepts_env));
      concepts.clip_env_concepts[k] = env;
      base = world.env_embeddings.row(static_cast<std::size_t>(env));
    }
    auto row = s.video.row(k);
    for (std::size_t j = 0; j < cfg.d_in; ++j) {
      row[j] = base[j] + sigma * static_cast<float>(rng.normal());
    }
  }

  const auto& qemb = world.question_embeddings.at(static_cast<std::size_t>(concepts.question_concept));
  s.question = Tensor<float>({cfg.question_length, cfg.d_q});
  for (std::size_t i = 0; i < s.question.size(); ++i) {
    s.question[i] = qemb[i] + sigma * static_cast<float>(rng.normal());
  }
  return out;
}

Corpus generate_split(const GenConfig& cfg, Split split, std::size_t count) {
  const World world = make_world(cfg);
  Corpus corpus;
  corpus.split = split;
  corpus.config = cfg;
  corpus.samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    corpus.samples.push_back(generate_sample(cfg, world, split, i).sample);
  }
  return corpus;
}

Corpus generate_split(const GenConfig& cfg, Split split) {
  switch (split) {
    case Split::kTrain: return generate_split(cfg, split, cfg.n_videos);
    case Split::kVal: return generate_split(cfg, split, cfg.n_val);
    case Split::kTestIid: return generate_split(cfg, split, cfg.n_test_iid);
    case Split::kTestOod: return generate_split(cfg, split, cfg.n_test_ood);
  }
  return {};
}

CorpusSet generate_corpus(const GenConfig& cfg) {
  CorpusSet set;
  set.config = cfg;
  for (Split s : kAllSplits) set.get(s) = generate_split(cfg, s);
  return set;
}

std::vector<std::vector<std::size_t>> batch_iter(std::size_t count, std::size_t batch_size,
                                                 std::uint64_t epoch_seed) {
  if (batch_size < 2) {
    throw Error(Errc::kInvalidArgument, "batch_size must be at least 2, got " +
                                            std::to_string(batch_size));
  }
  RngStream rng(epoch_seed, "batch_order");
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = count; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t begin = 0; begin < count; begin += batch_size) {
    const std::size_t end = std::min(count, begin + batch_size);
    if (end - begin < 2) break;
    batches.emplace_back(order.begin() + static_cast<long>(begin),
                         order.begin() + static_cast<long>(end));
  }
  return batches;
}

}  // namespace eigv::datagen
