// SPDX-License-Identifier: Apache-2.0
//
// iasim - link-level simulation library for interference-aligned MIMO networks
// Copyright (C) 2026 the iasim authors
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

#ifndef IASIM_RNG_HPP
#define IASIM_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace iasim {

/// Seeding contract for a whole run. Every trial draws from a substream
/// whose state is a pure function of (master_seed, stream_id, trial), so
/// results do not depend on worker count or scheduling.
///
/// Derivation rule (stable across versions, mirrored in the run manifest):
///   h = mix64(master_seed + 0x9e3779b97f4a7c15 * (stream_id + 1))
///   h = mix64(h           + 0x9e3779b97f4a7c15 * (trial + 1))
/// where mix64 is the SplitMix64 finalizer. h seeds a std::mt19937_64,
/// and all variates are produced by the fixed transforms below (never
/// std::*_distribution, whose algorithms are implementation-defined).
struct RngSpec {
    std::uint64_t master_seed = 0;
};

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t trial) {
    constexpr std::uint64_t phi = 0x9e3779b97f4a7c15ULL;
    std::uint64_t h = mix64(master + phi * (stream + 1));
    h = mix64(h + phi * (trial + 1));
    return h;
}

class TrialRng {
   public:
    TrialRng(std::uint64_t master, std::uint64_t stream, std::uint64_t trial)
        : eng_(derive_seed(master, stream, trial)) {}
    explicit TrialRng(std::uint64_t raw_seed) : eng_(raw_seed) {}

    std::uint64_t bits64() { return eng_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; used where log() must not see zero.
    double uniform_pos() { return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double t = 2.0 * M_PI * uniform();
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    /// Circular complex Gaussian CN(0,1): total variance 1, i.e. each of the
    /// real and imaginary parts is N(0, 1/2).
    std::complex<double> cgaussian() {
        const double r = std::sqrt(-std::log(uniform_pos()));
        const double t = 2.0 * M_PI * uniform();
        return {r * std::cos(t), r * std::sin(t)};
    }

    /// Uniform integer in [0, n), n <= 2^32. Top-bits modulo is fine here:
    /// n is a small power of two (constellation sizes) in every caller.
    std::uint32_t uniform_int(std::uint32_t n) {
        return static_cast<std::uint32_t>(eng_() >> 32) % n;
    }

   private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace iasim

#endif  // IASIM_RNG_HPP
