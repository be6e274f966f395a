// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include <bit>
#include <cstring>
#include <fstream>

#include "eigv/numkit/rng.hpp"
#include "eigv/trainkit/trainkit.hpp"

namespace eigv::trainkit {

namespace {

std::string_view layer_name(backbone::RepresentationLayer layer) {
  return layer == backbone::RepresentationLayer::kLogits ? "logits" : "fused";
}

backbone::RepresentationLayer parse_layer(const std::string& name) {
  if (name == "fused") return backbone::RepresentationLayer::kFused;
  if (name == "logits") return backbone::RepresentationLayer::kLogits;
  throw Error(Errc::kCorruptData, "checkpoint: unknown representation layer " + name);
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

std::string config_hash(const ModelDims& dims, backbone::RepresentationLayer layer) {
  nlohmann::json j = dims;
  j["representation"] = layer_name(layer);
  const std::uint64_t h = numkit::fnv1a64(j.dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void save_checkpoint(const EigvModel& model, const std::filesystem::path& path) {
  nlohmann::json header;
  header["dims"] = model.dims();
  header["representation"] = layer_name(model.representation_layer());
  header["config_hash"] = config_hash(model.dims(), model.representation_layer());
  header["tensors"] = nlohmann::json::array();
  for (const auto& e : model.params().entries()) {
    header["tensors"].push_back({{"name", e.name}, {"shape", e.value.shape()}});
  }
  const std::string text = header.dump();

  std::string out(kCheckpointMagic, sizeof kCheckpointMagic);
  out.push_back(static_cast<char>(kCheckpointVersion));
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out += text;
  for (const auto& e : model.params().entries()) {
    for (float x : e.value.values()) put_u32(out, std::bit_cast<std::uint32_t>(x));
  }

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(Errc::kIo, "cannot write checkpoint " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(Errc::kIo, "short write to checkpoint " + path.string());
}

EigvModel load_checkpoint(const std::filesystem::path& path,
                          const std::optional<ModelDims>& expected) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::kIo, "cannot open checkpoint " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::string name = path.string();

  constexpr std::size_t kPrefix = sizeof kCheckpointMagic + 1 + 4;
  if (bytes.size() < kPrefix ||
      std::memcmp(bytes.data(), kCheckpointMagic, sizeof kCheckpointMagic) != 0) {
    throw Error(Errc::kCorruptData, "corrupt checkpoint " + name + ": bad magic");
  }
  if (raw[sizeof kCheckpointMagic] != kCheckpointVersion) {
    throw Error(Errc::kUnsupportedVersion,
                "checkpoint " + name + " has version " +
                    std::to_string(raw[sizeof kCheckpointMagic]));
  }
  const std::size_t header_len = get_u32(raw + sizeof kCheckpointMagic + 1);
  if (bytes.size() < kPrefix + header_len) {
    throw Error(Errc::kCorruptData, "corrupt checkpoint " + name + ": truncated header");
  }

  nlohmann::json header;
  ModelDims dims;
  std::vector<std::pair<std::string, numkit::Shape>> tensors;
  backbone::RepresentationLayer layer{};
  try {
    header = nlohmann::json::parse(bytes.substr(kPrefix, header_len));
    dims = header.at("dims").get<ModelDims>();
    layer = parse_layer(header.at("representation").get<std::string>());
    for (const auto& t : header.at("tensors")) {
      tensors.emplace_back(t.at("name").get<std::string>(), t.at("shape").get<numkit::Shape>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kCorruptData, "corrupt checkpoint " + name + ": " + e.what());
  }

  if (expected) {
    const nlohmann::json want = *expected, have = dims;
    for (const auto& [field, value] : want.items()) {
      if (have.at(field) != value) {
        throw Error(Errc::kShapeMismatch, "checkpoint " + name + " dimension mismatch in field '" +
                                              field + "': checkpoint has " +
                                              have.at(field).dump() + ", config expects " +
                                              value.dump());
      }
    }
  }
  if (header.value("config_hash", std::string{}) != config_hash(dims, layer)) {
    throw Error(Errc::kCorruptData, "corrupt checkpoint " + name + ": config hash mismatch");
  }

  std::size_t floats = 0;
  for (const auto& [n, shape] : tensors) floats += numkit::shape_size(shape);
  if (bytes.size() != kPrefix + header_len + 4 * floats) {
    throw Error(Errc::kCorruptData, "corrupt checkpoint " + name + ": expected " +
                                        std::to_string(kPrefix + header_len + 4 * floats) +
                                        " bytes, found " + std::to_string(bytes.size()));
  }

  EigvModel model(dims, layer);
  model.init(0);
  auto& params = model.params();
  if (params.size() != tensors.size()) {
    throw Error(Errc::kCorruptData, "corrupt checkpoint " + name + ": parameter count mismatch");
  }
  const unsigned char* cursor = raw + kPrefix + header_len;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    auto& entry = params.entries()[i];
    if (entry.name != tensors[i].first || entry.value.shape() != tensors[i].second) {
      throw Error(Errc::kCorruptData, "corrupt checkpoint " + name + ": unexpected tensor " +
                                          tensors[i].first);
    }
    for (float& x : entry.value.values()) {
      x = std::bit_cast<float>(get_u32(cursor));
      cursor += 4;
    }
  }
  return model;
}

}  // namespace eigv::trainkit
