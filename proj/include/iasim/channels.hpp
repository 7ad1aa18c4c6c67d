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

#ifndef IASIM_CHANNELS_HPP
#define IASIM_CHANNELS_HPP

#include <cstdint>

#include "iasim/cmat.hpp"
#include "iasim/constellation.hpp"
#include "iasim/rng.hpp"

namespace iasim {

/// One Rayleigh block-fading realization of the 2x2 double-antenna X
/// channel. H[j][i] is the 2x2 link from transmitter j to receiver i
/// (0-based), entries i.i.d. CN(0,1), constant for the whole block.
struct ChannelSetX {
    CMat H[2][2];
};

/// One realization of a two-cell network. H[j][i]: desired link of the
/// (transmitter j, cell/user i) pair; I[j][i]: the matching interfering
/// link into the other cell. All entries i.i.d. CN(0,1).
struct ChannelSetCell {
    CMat H[2][2];
    CMat I[2][2];
};

inline CMat sample_matrix(TrialRng& rng, int rows, int cols) {
    CMat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.cgaussian();
    return m;
}

inline ChannelSetX sample_x_channels(TrialRng& rng) {
    ChannelSetX ch;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) ch.H[j][i] = sample_matrix(rng, 2, 2);
    return ch;
}

inline ChannelSetCell sample_cell_channels(TrialRng& rng) {
    ChannelSetCell ch;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) ch.H[j][i] = sample_matrix(rng, 2, 2);
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) ch.I[j][i] = sample_matrix(rng, 2, 2);
    return ch;
}

/// Adds circular complex Gaussian noise of the given per-entry variance
/// (default 1, the normalized-noise convention that makes network SNR = P).
/// variance == 0 is the exact zero-noise test mode and draws nothing.
inline void add_awgn(CMat& block, TrialRng& rng, double variance = 1.0) {
    if (variance == 0.0) return;
    const double s = std::sqrt(variance);
    for (int i = 0; i < block.rows(); ++i)
        for (int j = 0; j < block.cols(); ++j) block(i, j) += s * rng.cgaussian();
}

/// The uncoded symbols of one transmission block: s[j][i][k] is symbol k
/// of the (transmitter j -> receiver i) direction, E|s|^2 = P. Labels keep
/// the source bits; with Gray maps, bit errors = popcount(label ^ decoded).
struct SymbolFrame {
    cplx s[2][2][2];
    std::uint32_t label[2][2][2];
};

inline SymbolFrame random_frame(const Constellation& c, double power, TrialRng& rng) {
    SymbolFrame f;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) {
                const std::uint32_t label = rng.uniform_int(static_cast<std::uint32_t>(c.size()));
                f.label[j][i][k] = label;
                f.s[j][i][k] = modulate_label(c, label, power);
            }
    return f;
}

inline SymbolFrame zero_frame() {
    SymbolFrame f{};
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) {
                f.s[j][i][k] = cplx{};
                f.label[j][i][k] = 0;
            }
    return f;
}

}  // namespace iasim

#endif  // IASIM_CHANNELS_HPP
