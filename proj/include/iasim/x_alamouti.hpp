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
//
// The Alamouti-embedded alignment scheme for the double-antenna 2x2 X
// channel. Each transmitter sends two Alamouti-coded symbols to each
// receiver over T = 3 slots; the beamformer for each direction is the
// normalized inverse of the cross link, which collapses the four
// interfering symbols at each receiver into two fixed dimensions.
//
// Block layout: transmit/receive blocks are 3x2, rows = time slots,
// columns = antennas; Y^[i] = X^[0] H[0][i] + X^[1] H[1][i] + W.
//
// The receiver stacks y~ = (Y00, Y10*, Y20, Y01, Y11*, Y21). With this
// conjugation convention the interference-cancelled system has the exact
// per-column sub-blocks Hhat_n = [[h~0n, h~1n], [h~1n*, -h~0n*]] used
// throughout; the two-step cancellation below removes the aligned
// interference and then decouples the two transmitters.

#ifndef IASIM_X_ALAMOUTI_HPP
#define IASIM_X_ALAMOUTI_HPP

#include <array>
#include <optional>

#include "iasim/channels.hpp"
#include "iasim/cmat.hpp"
#include "iasim/constellation.hpp"

namespace iasim {

inline constexpr double kXPowerScale = 0.75;  // the 3/4 block-power factor

/// Per-direction alignment precoders V[j][i] = c[j][i] * cross[j][i]^-1
/// with tr(V V^H) = 1, plus the equivalent desired links Ht = V * H.
struct XBeamformers {
    CMat V[2][2];
    double c[2][2];
    CMat Ht[2][2];
};

/// cross[j][i] is the link the (j -> i) direction must invert to align its
/// interference: H[j][1-i] in the X channel, I[j][i] in the IMAC.
inline std::optional<XBeamformers> x_beamformers_from(const CMat desired[2][2],
                                                      const CMat cross[2][2]) {
    XBeamformers bf;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
            auto inv = try_inverse2(cross[j][i]);
            if (!inv) return std::nullopt;
            const double cji = 1.0 / inv->frob_norm();
            bf.V[j][i] = *inv * cji;
            bf.c[j][i] = cji;
            bf.Ht[j][i] = bf.V[j][i] * desired[j][i];
        }
    return bf;
}

inline std::optional<XBeamformers> x_beamformers(const ChannelSetX& ch) {
    CMat cross[2][2];
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) cross[j][i] = ch.H[j][1 - i];
    return x_beamformers_from(ch.H, cross);
}

/// Transmit blocks, one 3x2 block per transmitter. Receiver-0 symbols ride
/// an Alamouti block in slots 0-1, receiver-1 symbols in slots 1-2; the
/// sqrt(3/4) factor normalizes the expected block power to 3P.
struct XTransmitBlock {
    CMat X[2];
};

inline XTransmitBlock x_encode(const SymbolFrame& f, const XBeamformers& bf) {
    const double g = std::sqrt(kXPowerScale);
    XTransmitBlock tb;
    for (int j = 0; j < 2; ++j) {
        CMat top(3, 2);
        top(0, 0) = f.s[j][0][0];
        top(0, 1) = f.s[j][0][1];
        top(1, 0) = -std::conj(f.s[j][0][1]);
        top(1, 1) = std::conj(f.s[j][0][0]);
        CMat bot(3, 2);
        bot(1, 0) = -std::conj(f.s[j][1][1]);
        bot(1, 1) = std::conj(f.s[j][1][0]);
        bot(2, 0) = f.s[j][1][0];
        bot(2, 1) = f.s[j][1][1];
        tb.X[j] = (top * bf.V[j][0] + bot * bf.V[j][1]) * g;
    }
    return tb;
}

/// Y^[i] = X^[0] links[0][i] + X^[1] links[1][i] + W, per receiver.
inline std::array<CMat, 2> x_apply_channel(const XTransmitBlock& tb, const CMat links[2][2],
                                           TrialRng& rng, double noise_var = 1.0) {
    std::array<CMat, 2> Y;
    for (int i = 0; i < 2; ++i) {
        Y[i] = tb.X[0] * links[0][i] + tb.X[1] * links[1][i];
        add_awgn(Y[i], rng, noise_var);
    }
    return Y;
}

/// Stacks the received block into the 6-vector the IC receiver works on.
/// The same pattern serves both receivers.
inline CMat x_receive_stack(const CMat& Y) {
    CMat y(6, 1);
    y(0, 0) = Y(0, 0);
    y(1, 0) = std::conj(Y(1, 0));
    y(2, 0) = Y(2, 0);
    y(3, 0) = Y(0, 1);
    y(4, 0) = std::conj(Y(1, 1));
    y(5, 0) = Y(2, 1);
    return y;
}

/// Step 1 of IC: the aligned interference occupies two constant columns of
/// the stacked system; these index combinations null it exactly. Returns
/// the two 2-vectors (yhat_1, yhat_2); the equivalent noise covariance is
/// diag(1, 2, 1, 2).
inline std::pair<CMat, CMat> x_cancel_aligned(const CMat& y, int receiver) {
    CMat y1(2, 1), y2(2, 1);
    if (receiver == 0) {
        y1(0, 0) = y(0, 0);
        y1(1, 0) = y(1, 0) + y(5, 0);
        y2(0, 0) = y(3, 0);
        y2(1, 0) = y(4, 0) - y(2, 0);
    } else {
        y1(0, 0) = y(2, 0);
        y1(1, 0) = y(1, 0) + y(3, 0);
        y2(0, 0) = y(5, 0);
        y2(1, 0) = y(4, 0) - y(0, 0);
    }
    return {y1, y2};
}

/// The constant interference columns of the stacked system at a receiver
/// (the span the aligned interference is confined to).
inline std::pair<CMat, CMat> x_interference_columns(int receiver) {
    CMat i0(6, 1), i1(6, 1);
    if (receiver == 0) {
        i0(2, 0) = 1.0;
        i0(4, 0) = 1.0;
        i1(1, 0) = -1.0;
        i1(5, 0) = 1.0;
    } else {
        i0(0, 0) = 1.0;
        i0(4, 0) = 1.0;
        i1(1, 0) = -1.0;
        i1(3, 0) = 1.0;
    }
    return {i0, i1};
}

/// Sub-block for symbol column n of the equivalent link Ht:
/// [[h~0n, h~1n], [h~1n*, -h~0n*]].
inline CMat x_hat_block(const CMat& Ht, int n) {
    return CMat(2, 2,
                {Ht(0, n), Ht(1, n), std::conj(Ht(1, n)), -std::conj(Ht(0, n))});
}

/// Step 2 of IC: combine the two post-cancellation blocks so transmitter
/// 1-j drops out, leaving yhat = sqrt(3/4) Hhat s^[j,i] + noise with Hhat
/// Alamouti. Gated on the norms of the cancelled transmitter's blocks.
struct XDecoupled {
    CMat y;  // 2x1
    CMat H;  // 2x2, Alamouti
};

inline std::optional<XDecoupled> x_decouple_users(const CMat& y1, const CMat& y2,
                                                  const XBeamformers& bf, int receiver, int j) {
    const int jo = 1 - j;
    const CMat A0 = x_hat_block(bf.Ht[jo][receiver], 0);
    const CMat A1 = x_hat_block(bf.Ht[jo][receiver], 1);
    const double n0 = A0.frob_norm_sq(), n1 = A1.frob_norm_sq();
    if (n0 <= 1e-18 || n1 <= 1e-18) return std::nullopt;
    const CMat B0 = x_hat_block(bf.Ht[j][receiver], 0);
    const CMat B1 = x_hat_block(bf.Ht[j][receiver], 1);
    XDecoupled d;
    d.y = A0.herm() * y1 * (1.0 / n0) - A1.herm() * y2 * (1.0 / n1);
    d.H = A0.herm() * B0 * (1.0 / n0) - A1.herm() * B1 * (1.0 / n1);
    return d;
}

/// Symbol-by-symbol matched-filter decision. For PSK this is the
/// correlation decoder; the same metric handles QAM16 exactly.
inline std::array<std::uint32_t, 2> x_ml_decode(const XDecoupled& d, const Constellation& c,
                                                double power) {
    std::array<std::uint32_t, 2> labels;
    for (int k = 0; k < 2; ++k) {
        const CMat hk = d.H.col(k);
        const cplx z = vdot(hk, d.y);
        const cplx gain = std::sqrt(kXPowerScale) * hk.frob_norm_sq() * std::sqrt(power);
        labels[k] = nearest_label_scaled(c, z, gain);
    }
    return labels;
}

/// Full receiver: all four directions decoded from the two received blocks.
/// out[j][i][k] = decoded label of symbol k of direction (j -> i).
inline std::optional<std::array<std::array<std::array<std::uint32_t, 2>, 2>, 2>> x_decode_all(
    const std::array<CMat, 2>& Y, const XBeamformers& bf, const Constellation& c, double power) {
    std::array<std::array<std::array<std::uint32_t, 2>, 2>, 2> out{};
    for (int i = 0; i < 2; ++i) {
        const CMat y = x_receive_stack(Y[i]);
        auto [y1, y2] = x_cancel_aligned(y, i);
        for (int j = 0; j < 2; ++j) {
            auto d = x_decouple_users(y1, y2, bf, i, j);
            if (!d) return std::nullopt;
            out[j][i] = x_ml_decode(*d, c, power);
        }
    }
    return out;
}

/// Instantaneous normalized receive SNR of symbol k of direction (j -> i):
/// the exact ZF value (whiten the cancelled system, null the three
/// remaining interfering columns, project), which is invariant across all
/// full-rank ZF receivers. gamma_bar is the Sigma-free Eq.-(33)-style
/// quantity that brackets it: (3/4) gamma_bar >= gamma >= (3/8) gamma_bar.
struct XGamma {
    double gamma;
    double gamma_bar;
};

inline std::optional<XGamma> x_gamma(const XBeamformers& bf, int j, int i, int k) {
    const int jo = 1 - j;
    const CMat A0 = x_hat_block(bf.Ht[jo][i], 0);
    const CMat A1 = x_hat_block(bf.Ht[jo][i], 1);
    const double n0 = A0.frob_norm_sq(), n1 = A1.frob_norm_sq();
    if (n0 <= 1e-18 || n1 <= 1e-18) return std::nullopt;
    const CMat B0 = x_hat_block(bf.Ht[j][i], 0);
    const CMat B1 = x_hat_block(bf.Ht[j][i], 1);
    // Post-cancellation columns, rows (1,3) whitened by 1/sqrt(2)
    // (noise covariance diag(1,2,1,2)). Column order: own k, own 1-k,
    // other transmitter's two.
    CMat C(4, 4);
    auto put = [&C](int col, const CMat& T0, const CMat& T1, int n) {
        C(0, col) = T0(0, n);
        C(1, col) = T0(1, n) * M_SQRT1_2;
        C(2, col) = T1(0, n);
        C(3, col) = T1(1, n) * M_SQRT1_2;
    };
    put(0, B0, B1, k);
    put(1, B0, B1, 1 - k);
    put(2, A0, A1, 0);
    put(3, A0, A1, 1);
    const CMat B = C.block(0, 1, 4, 3);
    auto gram_inv = try_inverse(B.herm() * B);
    if (!gram_inv) return std::nullopt;
    const CMat h = C.col(0);
    const CMat proj = B * (*gram_inv) * (B.herm() * h);
    XGamma g;
    g.gamma = kXPowerScale * (h - proj).frob_norm_sq();
    // gamma_bar: the orthogonal-column simplification, no noise weighting.
    CMat W(4, 2);
    W.set_block(0, 0, A0 * (1.0 / n0));
    W.set_block(2, 0, A1 * (-1.0 / n1));
    CMat hv(4, 1);
    hv(0, 0) = B0(0, k);
    hv(1, 0) = B0(1, k);
    hv(2, 0) = B1(0, k);
    hv(3, 0) = B1(1, k);
    const double b = 1.0 / (0.5 / n0 + 0.5 / n1);
    g.gamma_bar = b * (W.herm() * hv).frob_norm_sq();
    return g;
}

/// The stacked 6x6 system matrix G at a receiver, columns ordered
/// (s_0^[0i], s_1^[0i], s_0^[1i], s_1^[1i], I_0, I_1), such that in
/// noiseless operation x_receive_stack(Y) == G * (s, I) exactly.
inline CMat x_equivalent_matrix(const XBeamformers& bf, int receiver) {
    const double g = std::sqrt(kXPowerScale);
    CMat G(6, 6);
    auto [i0, i1] = x_interference_columns(receiver);
    for (int r = 0; r < 6; ++r) {
        G(r, 4) = g * i0(r, 0);
        G(r, 5) = g * i1(r, 0);
    }
    // Desired rows: receiver 0 sees data rows (0,1,3,4), receiver 1 (2,1,5,4).
    const int r_top = receiver == 0 ? 0 : 2;
    const int r_bot = receiver == 0 ? 3 : 5;
    for (int j = 0; j < 2; ++j) {
        const CMat& Ht = bf.Ht[j][receiver];
        const int c0 = 2 * j;
        G(r_top, c0 + 0) = g * Ht(0, 0);
        G(r_top, c0 + 1) = g * Ht(1, 0);
        G(1, c0 + 0) = g * std::conj(Ht(1, 0));
        G(1, c0 + 1) = -g * std::conj(Ht(0, 0));
        G(r_bot, c0 + 0) = g * Ht(0, 1);
        G(r_bot, c0 + 1) = g * Ht(1, 1);
        G(4, c0 + 0) = g * std::conj(Ht(1, 1));
        G(4, c0 + 1) = -g * std::conj(Ht(0, 1));
    }
    return G;
}

/// The 4x4 matrix whose full rank carries the scheme's DoF claim: the
/// stacked equivalent channels of the four desired symbols at a receiver.
inline CMat x_desired_matrix(const XBeamformers& bf, int receiver) {
    CMat M(4, 4);
    for (int j = 0; j < 2; ++j) {
        const CMat& Ht = bf.Ht[j][receiver];
        const int c0 = 2 * j;
        M(0, c0 + 0) = Ht(0, 0);
        M(0, c0 + 1) = Ht(1, 0);
        M(1, c0 + 0) = std::conj(Ht(1, 0));
        M(1, c0 + 1) = -std::conj(Ht(0, 0));
        M(2, c0 + 0) = Ht(0, 1);
        M(2, c0 + 1) = Ht(1, 1);
        M(3, c0 + 0) = std::conj(Ht(1, 1));
        M(3, c0 + 1) = -std::conj(Ht(0, 1));
    }
    return M;
}

}  // namespace iasim

#endif  // IASIM_X_ALAMOUTI_HPP
