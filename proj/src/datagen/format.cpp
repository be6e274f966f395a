// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "eigv/datagen/corpus.hpp"

namespace eigv::datagen {

namespace fs = std::filesystem;
using nlohmann::json;

void to_json(json& j, const GenConfig& c) {
  j = json{{"n_videos", c.n_videos},
           {"n_val", c.n_val},
           {"n_test_iid", c.n_test_iid},
           {"n_test_ood", c.n_test_ood},
           {"clips", c.clips},
           {"d_in", c.d_in},
           {"n_concepts_causal", c.n_concepts_causal},
           {"n_concepts_env", c.n_concepts_env},
           {"n_question_concepts", c.n_question_concepts},
           {"n_answers", c.n_answers},
           {"n_causal_clips", c.n_causal_clips},
           {"d_q", c.d_q},
           {"question_length", c.question_length},
           {"rho_train", c.rho_train},
           {"rho_test", c.rho_test},
           {"noise_sigma", c.noise_sigma},
           {"seed", c.seed}};
}

void from_json(const json& j, GenConfig& c) {
  j.at("n_videos").get_to(c.n_videos);
  j.at("n_val").get_to(c.n_val);
  j.at("n_test_iid").get_to(c.n_test_iid);
  j.at("n_test_ood").get_to(c.n_test_ood);
  j.at("clips").get_to(c.clips);
  j.at("d_in").get_to(c.d_in);
  j.at("n_concepts_causal").get_to(c.n_concepts_causal);
  j.at("n_concepts_env").get_to(c.n_concepts_env);
  j.at("n_question_concepts").get_to(c.n_question_concepts);
  j.at("n_answers").get_to(c.n_answers);
  j.at("n_causal_clips").get_to(c.n_causal_clips);
  j.at("d_q").get_to(c.d_q);
  j.at("question_length").get_to(c.question_length);
  j.at("rho_train").get_to(c.rho_train);
  j.at("rho_test").get_to(c.rho_test);
  j.at("noise_sigma").get_to(c.noise_sigma);
  j.at("seed").get_to(c.seed);
}

namespace {

void put_u32_le(char* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
}

std::uint32_t get_u32_le(const unsigned char* in) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[i]) << (8 * i);
  return v;
}

std::string blob_name(Split split, std::size_t index, const char* field) {
  std::ostringstream name;
  name << split_name(split) << '/' << std::setw(6) << std::setfill('0') << index << '_'
       << field << ".f32";
  return name.str();
}

}  // namespace

void write_blob(const fs::path& path, const Tensor<float>& tensor) {
  std::string bytes(sizeof(kBlobMagic) + 4 * tensor.size(), '\0');
  std::memcpy(bytes.data(), kBlobMagic, sizeof(kBlobMagic));
  char* out = bytes.data() + sizeof(kBlobMagic);
  for (float v : tensor.values()) {
    put_u32_le(out, std::bit_cast<std::uint32_t>(v));
    out += 4;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(Errc::kIo, "cannot write " + path.string());
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw Error(Errc::kIo, "short write to " + path.string());
}

Tensor<float> read_blob(const fs::path& path, const numkit::Shape& shape) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::kIo, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  if (bytes.size() < sizeof(kBlobMagic) ||
      std::memcmp(bytes.data(), kBlobMagic, sizeof(kBlobMagic)) != 0) {
    throw Error(Errc::kCorruptData, "bad magic bytes in " + path.string());
  }
  const std::size_t count = numkit::shape_size(shape);
  const std::size_t expected = sizeof(kBlobMagic) + 4 * count;
  if (bytes.size() != expected) {
    throw Error(Errc::kShapeMismatch, path.string() + " holds " +
                                          std::to_string(bytes.size()) + " bytes, shape " +
                                          numkit::shape_string(shape) + " needs " +
                                          std::to_string(expected));
  }
  std::vector<float> values(count);
  const auto* in = reinterpret_cast<const unsigned char*>(bytes.data()) + sizeof(kBlobMagic);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = std::bit_cast<float>(get_u32_le(in + 4 * i));
  }
  return Tensor<float>(shape, std::move(values));
}

fs::path write_corpus(const CorpusSet& corpus, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::kIo, "cannot create " + dir.string() + ": " + ec.message());

  json manifest;
  manifest["version"] = std::string(kFormatVersion);
  manifest["config"] = corpus.config;
  json splits = json::object();
  for (Split split : kAllSplits) {
    const Corpus& c = corpus.get(split);
    fs::create_directories(dir / split_name(split), ec);
    if (ec) throw Error(Errc::kIo, "cannot create split directory: " + ec.message());
    json records = json::array();
    for (std::size_t i = 0; i < c.samples.size(); ++i) {
      const Sample& s = c.samples[i];
      const std::string video = blob_name(split, i, "video");
      const std::string question = blob_name(split, i, "question");
      write_blob(dir / video, s.video);
      write_blob(dir / question, s.question);
      json mask = json::array();
      for (bool b : s.truth_mask) mask.push_back(b);
      records.push_back(json{{"video", video},
                             {"shape", s.video.shape()},
                             {"question", question},
                             {"qshape", s.question.shape()},
                             {"answer", s.answer},
                             {"truth_mask", std::move(mask)}});
    }
    splits[std::string(split_name(split))] = std::move(records);
  }
  manifest["splits"] = std::move(splits);

  const fs::path path = dir / "manifest.json";
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw Error(Errc::kIo, "cannot write " + path.string());
  file << manifest.dump(1) << '\n';
  return path;
}

CorpusSet read_corpus(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  std::ifstream file(path);
  if (!file) throw Error(Errc::kIo, "missing manifest " + path.string());
  json manifest;
  try {
    file >> manifest;
  } catch (const json::exception& e) {
    throw Error(Errc::kCorruptData, path.string() + ": " + e.what());
  }

  try {
    const std::string version = manifest.at("version").get<std::string>();
    if (version != kFormatVersion) {
      throw Error(Errc::kUnsupportedVersion, "corpus format version \"" + version +
                                                 "\", reader supports \"" +
                                                 std::string(kFormatVersion) + "\"");
    }
    CorpusSet set;
    set.config = manifest.at("config").get<GenConfig>();
    set.config.validate();
    for (Split split : kAllSplits) {
      Corpus& c = set.get(split);
      c.split = split;
      c.config = set.config;
      const json& records = manifest.at("splits").at(std::string(split_name(split)));
      for (const json& r : records) {
        Sample s;
        const auto vshape = r.at("shape").get<numkit::Shape>();
        const auto qshape = r.at("qshape").get<numkit::Shape>();
        if (vshape != numkit::Shape{set.config.clips, set.config.d_in} ||
            qshape != numkit::Shape{set.config.question_length, set.config.d_q}) {
          throw Error(Errc::kShapeMismatch, "record " + r.at("video").get<std::string>() +
                                                " disagrees with manifest config");
        }
        s.video = read_blob(dir / r.at("video").get<std::string>(), vshape);
        s.question = read_blob(dir / r.at("question").get<std::string>(), qshape);
        s.answer = r.at("answer").get<int>();
        for (const json& b : r.at("truth_mask")) s.truth_mask.push_back(b.get<bool>());
        if (s.truth_mask.size() != set.config.clips) {
          throw Error(Errc::kShapeMismatch, "truth_mask length in " +
                                                r.at("video").get<std::string>());
        }
        c.samples.push_back(std::move(s));
      }
    }
    return set;
  } catch (const json::exception& e) {
    throw Error(Errc::kCorruptData, path.string() + ": " + e.what());
  }
}

}  // namespace eigv::datagen
