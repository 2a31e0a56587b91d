// SPDX-License-Identifier: Apache-2.0
//
// riscatter: joint primary/backscatter rate characterization for scatter-assisted links
// Copyright (C) 2026 riscatter contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef riscatter_rng_H
#define riscatter_rng_H

#include <complex>
#include <cstdint>
#include <random>

namespace riscatter
{

// Every random quantity is drawn from a named substream keyed on
// (seed, realization, tag, node). Results therefore do not depend on the
// order in which realizations are evaluated, including across threads.
enum class StreamTag : std::uint64_t
{
    geometry = 1,
    direct = 2,
    forward = 3,
    backward = 4,
    csi_error = 5,
    generic = 6,
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t realization, StreamTag tag,
                                 std::uint64_t node = 0);

// Gaussians come from an explicit Box-Muller transform instead of
// std::normal_distribution so the deterministic-output contract does not
// depend on the standard library implementation.
class Rng
{
  public:
    explicit Rng(std::uint64_t stream_seed);
    Rng(std::uint64_t seed, std::uint64_t realization, StreamTag tag, std::uint64_t node = 0);

    std::uint64_t raw();
    double uniform(); // [0, 1)
    double standard_normal();
    std::complex<double> standard_complex_normal(); // CN(0, 1)

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace riscatter

#endif
