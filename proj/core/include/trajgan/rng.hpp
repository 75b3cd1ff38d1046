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

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace trajgan {

// All randomness in a run funnels through one master seed. Components pull
// named sub-streams so that adding a consumer never perturbs the others, and
// per-iteration streams can be re-derived statelessly when resuming.

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class RngStreams {
 public:
  explicit RngStreams(uint64_t master_seed) : master_(master_seed) {}

  uint64_t master() const { return master_; }

  // Stream for a named component.
  std::mt19937_64 stream(std::string_view name) const {
    return std::mt19937_64(splitmix64(master_ ^ fnv1a64(name)));
  }

  // Stream for a named component at a given step (stateless resume).
  std::mt19937_64 stream(std::string_view name, uint64_t step) const {
    return std::mt19937_64(splitmix64(splitmix64(master_ ^ fnv1a64(name)) + step));
  }

 private:
  uint64_t master_;
};

// Deterministic standard normal draw. Hand-rolled Box-Muller so that the
// sequence does not depend on the standard library's distribution internals.
class GaussianSampler {
 public:
  double operator()(std::mt19937_64& rng) {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = to_unit(rng());
    } while (u1 <= 0.0);
    u2 = to_unit(rng());
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  static double to_unit(uint64_t v) {
    return static_cast<double>(v >> 11) * (1.0 / 9007199254740992.0);
  }
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

// Uniform in [lo, hi).
inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

}  // namespace trajgan
