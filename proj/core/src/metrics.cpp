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

#include "trajgan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "trajgan/assignment.hpp"
#include "trajgan/errors.hpp"
#include "trajgan/rng.hpp"

namespace trajgan {

double ade(const Trajectory& pred, const Trajectory& gt) {
  if (pred.size() != gt.size())
    throw ValidationError("ade: trajectory lengths differ (" + std::to_string(pred.size()) +
                          " vs " + std::to_string(gt.size()) + ")");
  if (pred.empty()) throw ValidationError("ade: empty trajectories");
  double sum = 0.0;
  for (size_t t = 0; t < pred.size(); ++t) sum += (pred[t] - gt[t]).norm();
  return sum / static_cast<double>(pred.size());
}

double fde(const Trajectory& pred, const Trajectory& gt) {
  if (pred.size() != gt.size())
    throw ValidationError("fde: trajectory lengths differ (" + std::to_string(pred.size()) +
                          " vs " + std::to_string(gt.size()) + ")");
  if (pred.empty()) throw ValidationError("fde: empty trajectories");
  return (pred.back() - gt.back()).norm();
}

double best_of_k(const std::vector<Trajectory>& samples, const Trajectory& gt,
                 const TrajectoryDistance& metric) {
  if (samples.empty()) throw ValidationError("best_of_k: no samples");
  double best = std::numeric_limits<double>::infinity();
  for (const Trajectory& s : samples) best = std::min(best, metric(s, gt));
  return best;
}

double one_nn_accuracy(const SampleSet& s_real, const SampleSet& s_gen,
                       const TrajectoryDistance& distance) {
  const size_t n = s_real.trajectories.size();
  if (n != s_gen.trajectories.size())
    throw ValidationError("one_nn_accuracy: set sizes differ (" + std::to_string(n) + " vs " +
                          std::to_string(s_gen.trajectories.size()) + ")");
  if (n == 0) throw ValidationError("one_nn_accuracy: empty sets");

  const size_t total = 2 * n;
  auto traj_at = [&](size_t idx) -> const Trajectory& {
    return idx < n ? s_real.trajectories[idx] : s_gen.trajectories[idx - n];
  };
  auto is_real = [&](size_t idx) { return idx < n; };

  Eigen::MatrixXd dist(total, total);
  for (size_t a = 0; a < total; ++a) {
    dist(a, a) = 0.0;
    for (size_t b = a + 1; b < total; ++b) {
      const double d = distance(traj_at(a), traj_at(b));
      dist(a, b) = d;
      dist(b, a) = d;
    }
  }

  size_t correct = 0;
  for (size_t a = 0; a < total; ++a) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t b = 0; b < total; ++b) {
      if (b == a) continue;
      best = std::min(best, dist(a, b));
    }
    bool tie_has_real = false, tie_has_gen = false;
    for (size_t b = 0; b < total; ++b) {
      if (b == a || dist(a, b) != best) continue;
      (is_real(b) ? tie_has_real : tie_has_gen) = true;
    }
    const bool predicted_real = tie_has_real;  // ties resolve toward real
    if (predicted_real == is_real(a)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(total);
}

double emd(const SampleSet& s_real, const SampleSet& s_gen, const TrajectoryDistance& distance) {
  const int n = static_cast<int>(s_real.trajectories.size());
  const int m = static_cast<int>(s_gen.trajectories.size());
  if (n < 1 || m < 1) throw ValidationError("emd: empty sets");

  Eigen::MatrixXd cost(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      cost(i, j) = distance(s_real.trajectories[i], s_gen.trajectories[j]);

  if (n == m) return solve_assignment(cost) / static_cast<double>(n);
  return solve_uniform_transport(cost);
}

double mode_coverage(const std::vector<Trajectory>& samples,
                     const std::vector<EndpointCluster>& clusters) {
  if (clusters.empty()) throw ValidationError("mode_coverage: no clusters");
  std::vector<char> covered(clusters.size(), 0);
  for (const Trajectory& traj : samples) {
    if (traj.empty()) continue;
    const Vec2 end = traj.back();
    size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < clusters.size(); ++k) {
      const double d = (end - clusters[k].center).norm();
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    if (best_d <= 3.0 * clusters[best].stddev) covered[best] = 1;
  }
  const long hit = std::count(covered.begin(), covered.end(), 1);
  return static_cast<double>(hit) / static_cast<double>(clusters.size());
}

Trajectory future_positions(const Scene& scene) {
  Trajectory out;
  if (!scene.has_target_future()) return out;
  for (const AgentState& s : scene.target_future()) out.push_back(s.position);
  return out;
}

namespace {

// Uniform draw of `k` distinct indices out of `total`, stable under seed.
std::vector<size_t> sample_without_replacement(size_t total, size_t k, std::mt19937_64& rng) {
  std::vector<size_t> idx(total);
  std::iota(idx.begin(), idx.end(), size_t{0});
  for (size_t i = 0; i < k && i + 1 < total; ++i) {
    const size_t j = i + static_cast<size_t>(rng() % (total - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(std::min(k, total));
  return idx;
}

}  // namespace

MetricsReport evaluate_model(Predictor& predictor, const std::vector<Scene>& test_scenes,
                             const EvaluateOptions& options) {
  if (test_scenes.empty()) throw ValidationError("evaluate_model: empty test set");

  MetricsReport report;
  const int K = predictor.is_stochastic() ? options.K : 1;
  report.K = K;

  std::mt19937_64 rng(splitmix64(options.seed));

  std::ofstream table;
  const bool dump = !options.per_scene_table.empty();
  if (dump) {
    table.open(options.per_scene_table);
    table << "# scene source target_agent start_frame ade fde\n";
  }

  double ade_sum = 0.0, fde_sum = 0.0;
  std::map<std::string, std::pair<double, long>> per_source_ade;
  std::map<std::string, std::pair<double, long>> per_source_fde;
  for (size_t s = 0; s < test_scenes.size(); ++s) {
    const Scene& scene = test_scenes[s];
    if (!scene.has_target_future())
      throw ValidationError("evaluate_model: scene without ground-truth future");
    const Trajectory gt = future_positions(scene);
    std::vector<Trajectory> samples;
    samples.reserve(K);
    for (int k = 0; k < K; ++k) {
      const PredictionSample p = predictor.sample(scene, rng);
      samples.push_back(p.positions);
    }
    const double scene_ade = best_of_k(samples, gt, ade);
    const double scene_fde = best_of_k(samples, gt, fde);
    ade_sum += scene_ade;
    fde_sum += scene_fde;
    const std::string src = scene.source.empty() ? "default" : scene.source;
    per_source_ade[src].first += scene_ade;
    per_source_ade[src].second += 1;
    per_source_fde[src].first += scene_fde;
    per_source_fde[src].second += 1;
    if (dump)
      table << s << ' ' << src << ' ' << scene.target_agent_id << ' ' << scene.start_frame << ' '
            << scene_ade << ' ' << scene_fde << '\n';
  }
  report.ade = ade_sum / static_cast<double>(test_scenes.size());
  report.fde = fde_sum / static_cast<double>(test_scenes.size());
  for (const auto& [src, acc] : per_source_ade)
    report.breakdown["ade." + src] = acc.first / static_cast<double>(acc.second);
  for (const auto& [src, acc] : per_source_fde)
    report.breakdown["fde." + src] = acc.first / static_cast<double>(acc.second);

  // Distribution metrics per condition group where provenance exists.
  std::map<int, std::vector<size_t>> by_condition;
  for (size_t s = 0; s < test_scenes.size(); ++s)
    if (test_scenes[s].toy_condition >= 0) by_condition[test_scenes[s].toy_condition].push_back(s);

  if (!by_condition.empty()) {
    double nn_sum = 0.0, emd_sum = 0.0;
    long groups = 0;
    std::vector<Trajectory> coverage_samples;
    for (const auto& [condition, indices] : by_condition) {
      const size_t set_size = static_cast<size_t>(options.distribution_set_size);
      if (indices.size() < set_size) continue;

      SampleSet s_real{{}, SampleLabel::real};
      for (size_t i : sample_without_replacement(indices.size(), set_size, rng))
        s_real.trajectories.push_back(future_positions(test_scenes[indices[i]]));

      SampleSet s_gen{{}, SampleLabel::generated};
      for (size_t i : sample_without_replacement(indices.size(), set_size, rng)) {
        const PredictionSample p = predictor.sample(test_scenes[indices[i]], rng);
        s_gen.trajectories.push_back(p.positions);
      }

      const double nn = one_nn_accuracy(s_real, s_gen);
      const double dist = emd(s_real, s_gen);
      report.breakdown["one_nn.cond" + std::to_string(condition)] = nn;
      report.breakdown["emd.cond" + std::to_string(condition)] = dist;
      nn_sum += nn;
      emd_sum += dist;
      ++groups;

      if (options.clusters) {
        for (int k = 0; k < options.coverage_samples_per_condition; ++k) {
          const Scene& scene = test_scenes[indices[k % indices.size()]];
          coverage_samples.push_back(predictor.sample(scene, rng).positions);
        }
      }
    }
    if (groups > 0) {
      report.one_nn_accuracy = nn_sum / static_cast<double>(groups);
      report.emd = emd_sum / static_cast<double>(groups);
    }
    if (options.clusters && !coverage_samples.empty())
      report.mode_coverage = mode_coverage(coverage_samples, *options.clusters);
  }

  return report;
}

void MetricsReport::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write metrics report: " + path.string());
  out.precision(10);
  out << "ade = " << ade << "\n";
  out << "fde = " << fde << "\n";
  out << "K = " << K << "\n";
  out << "one_nn_accuracy = " << one_nn_accuracy << "\n";
  out << "emd = " << emd << "\n";
  out << "mode_coverage = " << mode_coverage << "\n";
  out << "config_hash = " << config_hash << "\n";
  for (const auto& [key, value] : breakdown) out << key << " = " << value << "\n";
}

MetricsReport MetricsReport::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read metrics report: " + path.string());
  MetricsReport report;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "ade") report.ade = std::stod(value);
    else if (key == "fde") report.fde = std::stod(value);
    else if (key == "K") report.K = std::stoi(value);
    else if (key == "one_nn_accuracy") report.one_nn_accuracy = std::stod(value);
    else if (key == "emd") report.emd = std::stod(value);
    else if (key == "mode_coverage") report.mode_coverage = std::stod(value);
    else if (key == "config_hash") report.config_hash = value;
    else report.breakdown[key] = std::stod(value);
  }
  return report;
}

}  // namespace trajgan
