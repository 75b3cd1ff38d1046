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

#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "trajgan/model.hpp"

namespace trajgan {

// Everything needed to resume a run: dims, parameter tensors under their
// ModelParameters names, optimizer state, iteration counter, config hash.
struct CheckpointData {
  int format_version = kCheckpointFormatVersion;
  ModelDims dims;
  long iteration = 0;
  std::string config_hash;
  bool standardizer_enabled = false;
  std::map<std::string, Eigen::MatrixXd> tensors;    // model parameters
  std::map<std::string, Eigen::MatrixXd> optimizer;  // moment buffers
  std::map<std::string, std::string> meta;           // regime, counters, ...
};

// Atomic: writes to a temp file in the same directory, then renames.
void save_checkpoint(const std::filesystem::path& path, const CheckpointData& data);

// Rejects unknown format versions.
CheckpointData load_checkpoint(const std::filesystem::path& path);

template <class S>
CheckpointData make_checkpoint(Model<S>& model, const std::string& config_hash) {
  CheckpointData data;
  data.dims = model.dims;
  data.iteration = model.iteration;
  data.config_hash = config_hash;
  data.standardizer_enabled = model.standardizer.enabled;
  data.tensors = model.export_tensors();
  return data;
}

template <class S>
void restore_model(Model<S>& model, const CheckpointData& data) {
  model.dims = data.dims;
  model.init(data.dims, 0);  // sizes every tensor, then overwritten
  model.import_tensors(data.tensors);
  model.standardizer.enabled = data.standardizer_enabled;
  model.iteration = data.iteration;
  model.version = "ckpt-" + data.config_hash;
}

}  // namespace trajgan
