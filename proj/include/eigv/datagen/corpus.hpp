// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "eigv/numkit/tensor.hpp"
#include "json.hpp"

namespace eigv::datagen {

using numkit::Tensor;

struct GenConfig {
  std::size_t n_videos = 2000;  // training split size
  std::size_t n_val = 400;
  std::size_t n_test_iid = 400;
  std::size_t n_test_ood = 400;
  std::size_t clips = 16;  // K
  std::size_t d_in = 32;
  std::size_t n_concepts_causal = 8;
  std::size_t n_concepts_env = 8;
  std::size_t n_question_concepts = 4;
  std::size_t n_answers = 8;
  std::size_t n_causal_clips = 4;
  std::size_t d_q = 16;
  std::size_t question_length = 4;  // L
  double rho_train = 0.9;
  double rho_test = 0.1;
  double noise_sigma = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const GenConfig&) const = default;
};

void to_json(nlohmann::json& j, const GenConfig& c);
void from_json(const nlohmann::json& j, GenConfig& c);

enum class Split { kTrain, kVal, kTestIid, kTestOod };

inline constexpr Split kAllSplits[] = {Split::kTrain, Split::kVal, Split::kTestIid,
                                       Split::kTestOod};

std::string_view split_name(Split split);
Split parse_split(std::string_view name);

struct Sample {
  Tensor<float> video;     // K x d_in
  Tensor<float> question;  // L x d_q
  int answer = 0;
  std::vector<bool> truth_mask;  // K entries; evaluation only
};

struct Corpus {
  Split split = Split::kTrain;
  GenConfig config;
  std::vector<Sample> samples;

  std::size_t size() const noexcept { return samples.size(); }
};

// The four splits generated from one configuration.
struct CorpusSet {
  GenConfig config;
  Corpus train, val, test_iid, test_ood;

  const Corpus& get(Split split) const;
  Corpus& get(Split split);
};

// Read access to a split without the oracle clip annotations. Training
// code receives only this view.
class LabeledView {
 public:
  explicit LabeledView(const Corpus& corpus) : corpus_(&corpus) {}

  std::size_t size() const noexcept { return corpus_->samples.size(); }
  const Tensor<float>& video(std::size_t i) const { return corpus_->samples.at(i).video; }
  const Tensor<float>& question(std::size_t i) const { return corpus_->samples.at(i).question; }
  int answer(std::size_t i) const { return corpus_->samples.at(i).answer; }
  const GenConfig& config() const noexcept { return corpus_->config; }

 private:
  const Corpus* corpus_;
};

// The fixed structural-causal world behind a corpus seed: concept
// embeddings, the (question concept x causal concept) answer table, and
// the answer-to-environment pairing that carries the spurious link.
struct World {
  Tensor<float> causal_embeddings;                // n_concepts_causal x d_in
  Tensor<float> env_embeddings;                   // n_concepts_env x d_in
  std::vector<Tensor<float>> question_embeddings; // per concept: L x d_q
  std::vector<std::vector<int>> answer_table;     // [question][causal]
  std::vector<int> paired_env;                    // [answer] -> env concept

  int answer_for(int question_concept, int causal_concept) const {
    return answer_table.at(question_concept).at(causal_concept);
  }
};

World make_world(const GenConfig& cfg);

// Generator-side view of one sample, kept for corpus diagnostics.
struct SampleConcepts {
  int question_concept = 0;
  int causal_concept = 0;
  std::vector<int> clip_env_concepts;  // -1 at causal positions
};

struct GeneratedSample {
  Sample sample;
  SampleConcepts concepts;
};

GeneratedSample generate_sample(const GenConfig& cfg, const World& world, Split split,
                                std::size_t index);

Corpus generate_split(const GenConfig& cfg, Split split, std::size_t count);
Corpus generate_split(const GenConfig& cfg, Split split);
CorpusSet generate_corpus(const GenConfig& cfg);

// Directory layout: manifest.json plus one .f32 blob per tensor field.
inline constexpr char kBlobMagic[8] = {'E', 'I', 'G', 'V', 'F', '3', '2', '\0'};
inline constexpr std::string_view kFormatVersion = "1";

std::filesystem::path write_corpus(const CorpusSet& corpus, const std::filesystem::path& dir);
CorpusSet read_corpus(const std::filesystem::path& dir);

void write_blob(const std::filesystem::path& path, const Tensor<float>& tensor);
Tensor<float> read_blob(const std::filesystem::path& path, const numkit::Shape& shape);

// Seeded permutation of [0, count) chunked into batches; a trailing chunk of a
// single element is dropped because the intervener pairs samples.
std::vector<std::vector<std::size_t>> batch_iter(std::size_t count, std::size_t batch_size,
                                                 std::uint64_t epoch_seed);

}  // namespace eigv::datagen
