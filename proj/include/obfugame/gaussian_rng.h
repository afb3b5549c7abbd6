// Copyright 2026 The Obfugame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OBFUGAME_GAUSSIAN_RNG_H_
#define OBFUGAME_GAUSSIAN_RNG_H_

#include <cstdint>
#include <random>

namespace obfugame {

// SplitMix64 finalizer of seed + stream; gives well-separated child seeds for
// independent sub-streams of one run.
inline std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seedable normal sampler with a frozen, platform-independent stream.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Uniforms take the top 53 bits of each engine word. Normals use
// the Marsaglia polar method and return both variates of an accepted pair
// (the second one on the following call). std::normal_distribution is not
// used because its algorithm is implementation-defined.
//
// One instance per thread; instances are movable but not copyable.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

  GaussianRng(const GaussianRng&) = delete;
  GaussianRng& operator=(const GaussianRng&) = delete;
  GaussianRng(GaussianRng&&) = default;
  GaussianRng& operator=(GaussianRng&&) = default;

  // Uniform on [0, 1).
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal.
  double Normal();

  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }

  // +1 or -1 with equal probability.
  int Sign() { return (engine_() >> 63) != 0 ? 1 : -1; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace obfugame

#endif  // OBFUGAME_GAUSSIAN_RNG_H_
