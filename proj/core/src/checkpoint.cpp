// Copyright 2026 The trajgan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trajgan/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

#include "trajgan/errors.hpp"

namespace trajgan {

namespace {

constexpr char kMagic[8] = {'T', 'G', 'A', 'N', 'C', 'K', 'P', 'T'};

nlohmann::json dims_to_json(const ModelDims& d) {
  return {{"state_dim", d.state_dim},
          {"embed_dim", d.embed_dim},
          {"hidden_dim", d.hidden_dim},
          {"pool_dim", d.pool_dim},
          {"noise_dim", d.noise_dim},
          {"code_dim", d.code_dim},
          {"decoder_head_dims", d.decoder_head_dims},
          {"disc_proj_dim", d.disc_proj_dim},
          {"obs_len", d.obs_len},
          {"pred_len", d.pred_len}};
}

ModelDims dims_from_json(const nlohmann::json& j) {
  ModelDims d;
  d.state_dim = j.at("state_dim").get<int>();
  d.embed_dim = j.at("embed_dim").get<int>();
  d.hidden_dim = j.at("hidden_dim").get<int>();
  d.pool_dim = j.at("pool_dim").get<int>();
  d.noise_dim = j.at("noise_dim").get<int>();
  d.code_dim = j.at("code_dim").get<int>();
  d.decoder_head_dims = j.at("decoder_head_dims").get<std::vector<int>>();
  d.disc_proj_dim = j.at("disc_proj_dim").get<int>();
  d.obs_len = j.at("obs_len").get<int>();
  d.pred_len = j.at("pred_len").get<int>();
  return d;
}

void index_tensors(nlohmann::json& list, const std::map<std::string, Eigen::MatrixXd>& tensors,
                   uint64_t& offset) {
  for (const auto& [name, m] : tensors) {
    list.push_back({{"name", name},
                    {"rows", m.rows()},
                    {"cols", m.cols()},
                    {"offset", offset}});
    offset += static_cast<uint64_t>(m.size()) * sizeof(double);
  }
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const CheckpointData& data) {
  nlohmann::json header;
  header["format_version"] = data.format_version;
  header["dims"] = dims_to_json(data.dims);
  header["iteration"] = data.iteration;
  header["config_hash"] = data.config_hash;
  header["standardizer_enabled"] = data.standardizer_enabled;
  header["meta"] = data.meta;
  uint64_t offset = 0;
  header["tensors"] = nlohmann::json::array();
  index_tensors(header["tensors"], data.tensors, offset);
  header["optimizer"] = nlohmann::json::array();
  index_tensors(header["optimizer"], data.optimizer, offset);

  const std::string header_text = header.dump();
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write checkpoint: " + tmp.string());
    out.write(kMagic, sizeof(kMagic));
    const uint32_t version = static_cast<uint32_t>(data.format_version);
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    const uint64_t header_len = header_text.size();
    out.write(reinterpret_cast<const char*>(&header_len), sizeof(header_len));
    out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
    auto write_blob = [&out](const std::map<std::string, Eigen::MatrixXd>& tensors) {
      for (const auto& [name, m] : tensors)
        out.write(reinterpret_cast<const char*>(m.data()),
                  static_cast<std::streamsize>(m.size() * sizeof(double)));
    };
    write_blob(data.tensors);
    write_blob(data.optimizer);
    if (!out) throw DataError("short write to checkpoint: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CheckpointData load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path.string());

  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw DataError("not a checkpoint file: " + path.string());
  uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (version != static_cast<uint32_t>(kCheckpointFormatVersion))
    throw DataError("unsupported checkpoint format version " + std::to_string(version) + ": " +
                    path.string());
  uint64_t header_len = 0;
  in.read(reinterpret_cast<char*>(&header_len), sizeof(header_len));
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw DataError("truncated checkpoint header: " + path.string());

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("corrupt checkpoint header: " + std::string(e.what()));
  }

  CheckpointData data;
  data.format_version = header.at("format_version").get<int>();
  data.dims = dims_from_json(header.at("dims"));
  data.iteration = header.at("iteration").get<long>();
  data.config_hash = header.at("config_hash").get<std::string>();
  data.standardizer_enabled = header.value("standardizer_enabled", false);
  data.meta = header.value("meta", std::map<std::string, std::string>{});

  const std::streampos blob_start = in.tellg();
  auto read_blob = [&](const nlohmann::json& list, std::map<std::string, Eigen::MatrixXd>& out) {
    for (const auto& entry : list) {
      const std::string name = entry.at("name").get<std::string>();
      const long rows = entry.at("rows").get<long>();
      const long cols = entry.at("cols").get<long>();
      const uint64_t offset = entry.at("offset").get<uint64_t>();
      Eigen::MatrixXd m(rows, cols);
      in.seekg(blob_start + static_cast<std::streamoff>(offset));
      in.read(reinterpret_cast<char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(double)));
      if (!in) throw DataError("truncated checkpoint tensor: " + name);
      out[name] = std::move(m);
    }
  };
  read_blob(header.at("tensors"), data.tensors);
  read_blob(header.at("optimizer"), data.optimizer);
  return data;
}

}  // namespace trajgan
