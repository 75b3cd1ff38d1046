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

#include "trajgan/metrics.hpp"
#include "trajgan/types.hpp"

namespace trajgan {

enum class VelocityEstimate { last_frame, mean_of_last_k };

struct LinearPredictorConfig {
  VelocityEstimate velocity_estimate = VelocityEstimate::last_frame;
  int k = 3;  // only for mean_of_last_k; annotation noise makes 1-frame jumpy
};

// Constant-velocity prediction from the target's observed states.
PredictionSample linear_predict(const Scene& scene, const LinearPredictorConfig& config = {});

class LinearPredictor : public Predictor {
 public:
  explicit LinearPredictor(LinearPredictorConfig config = {}) : config_(config) {}
  PredictionSample sample(const Scene& scene, std::mt19937_64&) override {
    return linear_predict(scene, config_);
  }
  bool is_stochastic() const override { return false; }
  std::string name() const override { return "linear"; }

 private:
  LinearPredictorConfig config_;
};

}  // namespace trajgan
