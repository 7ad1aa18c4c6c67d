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
// Two-cell networks:
//  - IMAC: the Alamouti-embedded X-channel pipeline with the interfering
//    links in place of the cross links (the X channel is the special case
//    I[j][i] == H[j][1-i], bit for bit).
//  - IBC: the dual downlink scheme. Each base station Alamouti-encodes and
//    linearly precodes its two users' symbols, then pads the redundant
//    slot with the orthogonal completion of a data row; receivers invert
//    only their own interfering link and combine two slots, which drops
//    all six interfering symbols (they stay confined to a constant
//    four-dimensional subspace of the six-dimensional receive space).
//  - The extended downlink-IA baseline: shared random precoder, per-user
//    receive nulling of the other cell, per-cell ZF of intra-cell streams.

#ifndef IASIM_CELLULAR_HPP
#define IASIM_CELLULAR_HPP

#include <array>
#include <optional>

#include "iasim/channels.hpp"
#include "iasim/cmat.hpp"
#include "iasim/constellation.hpp"
#include "iasim/x_alamouti.hpp"

namespace iasim {

// ------------------------------------------------------------------ IMAC

inline std::optional<XBeamformers> imac_beamformers(const ChannelSetCell& ch) {
    return x_beamformers_from(ch.H, ch.I);
}

/// Per-direction transmit parts: T[j][i] is the 3x2 block of the (j, i)
/// transmitter (cell i's transmitter j in the IMAC; one half of
/// transmitter j's block in the X channel).
struct XTransmitParts {
    CMat T[2][2];
};

inline XTransmitParts x_encode_parts(const SymbolFrame& f, const XBeamformers& bf) {
    const double g = std::sqrt(kXPowerScale);
    XTransmitParts p;
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
        p.T[j][0] = top * bf.V[j][0] * g;
        p.T[j][1] = bot * bf.V[j][1] * g;
    }
    return p;
}

/// Receiver i collects its cell's parts through the desired links and the
/// other cell's parts through the cross links. Passing cross == desired
/// H[j][1-i] links reproduces the X channel exactly.
inline std::array<CMat, 2> xpipe_apply_channel(const XTransmitParts& p, const CMat desired[2][2],
                                               const CMat cross[2][2], TrialRng& rng,
                                               double noise_var = 1.0) {
    std::array<CMat, 2> Y;
    for (int i = 0; i < 2; ++i) {
        Y[i] = p.T[0][i] * desired[0][i] + p.T[1][i] * desired[1][i] +
               p.T[0][1 - i] * cross[0][1 - i] + p.T[1][1 - i] * cross[1][1 - i];
        add_awgn(Y[i], rng, noise_var);
    }
    return Y;
}

inline std::array<CMat, 2> imac_apply_channel(const XTransmitParts& p, const ChannelSetCell& ch,
                                              TrialRng& rng, double noise_var = 1.0) {
    return xpipe_apply_channel(p, ch.H, ch.I, rng, noise_var);
}

// ------------------------------------------------------------------- IBC

/// Eq.-(20)-style precoders. Ht[j][i] = H[j][i] * inv(I[j][i]) is the link
/// seen after the receiver's beamforming; Hhat[j][i][m] is the Alamouti
/// block of its row m; P[j][i] includes the power scale alpha[j][i].
struct IbcPrecoders {
    CMat Ht[2][2];
    CMat Hhat[2][2][2];
    CMat P[2][2];
    CMat D[2][2];  // the rotation factor: C^[ji] = alpha S^[ji] D[j][i]
    double alpha[2][2];
    double iinv_norm_sq[2][2];  // ||inv(I[j][i])||_F^2 (receive noise gain)
};

namespace detail {
/// Column bracket of Eq. (20): [conj(row0)/||row0||^2, -conj(row1)/||row1||^2].
inline CMat ibc_bracket(const CMat& Ht) {
    const double r0 = std::norm(Ht(0, 0)) + std::norm(Ht(0, 1));
    const double r1 = std::norm(Ht(1, 0)) + std::norm(Ht(1, 1));
    CMat B(2, 2);
    B(0, 0) = std::conj(Ht(0, 0)) / r0;
    B(1, 0) = std::conj(Ht(0, 1)) / r0;
    B(0, 1) = -std::conj(Ht(1, 0)) / r1;
    B(1, 1) = -std::conj(Ht(1, 1)) / r1;
    return B;
}
}  // namespace detail

inline std::optional<IbcPrecoders> ibc_precoders(const ChannelSetCell& ch) {
    IbcPrecoders pre;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
            auto inv = try_inverse2(ch.I[j][i]);
            if (!inv) return std::nullopt;
            pre.iinv_norm_sq[j][i] = inv->frob_norm_sq();
            pre.Ht[j][i] = ch.H[j][i] * (*inv);
            for (int m = 0; m < 2; ++m) {
                const double rn =
                    std::norm(pre.Ht[j][i](m, 0)) + std::norm(pre.Ht[j][i](m, 1));
                if (rn <= 1e-12) return std::nullopt;
                pre.Hhat[j][i][m] = alamouti_embed(pre.Ht[j][i](m, 0), pre.Ht[j][i](m, 1));
            }
        }
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
            const int io = 1 - i;
            const double r0 =
                std::norm(pre.Ht[j][io](0, 0)) + std::norm(pre.Ht[j][io](0, 1));
            const double r1 =
                std::norm(pre.Ht[j][io](1, 0)) + std::norm(pre.Ht[j][io](1, 1));
            pre.D[j][i] = pre.Hhat[j][i][0].herm() * pre.Hhat[j][io][0] * (1.0 / r0) -
                          pre.Hhat[j][i][1].herm() * pre.Hhat[j][io][1] * (1.0 / r1);
            const CMat praw = pre.D[j][i] * detail::ibc_bracket(pre.Ht[j][io]);
            const double n = praw.frob_norm();
            if (n <= 1e-9) return std::nullopt;
            // Per-BS expected block power 3P, split equally between the two
            // users: ||P[j][i]||_F^2 = 1/2 (one data row of the padded block
            // is retransmitted, which contributes the extra 3rd of 3P).
            pre.alpha[j][i] = 1.0 / (std::sqrt(2.0) * n);
            pre.P[j][i] = praw * pre.alpha[j][i];
        }
    return pre;
}

/// The rotated symbols of a direction: Alamouti(c_0, c_1) = alpha S D.
inline CMat ibc_rotated_symbols(const SymbolFrame& f, const IbcPrecoders& pre, int j, int i) {
    const CMat S = alamouti_embed(f.s[j][i][0], f.s[j][i][1]);
    return S * pre.D[j][i] * pre.alpha[j][i];
}

struct IbcTransmitBlock {
    CMat X[2];  // 3x2 padded blocks, one per base station
};

/// BS 0 sends its four precoded symbols in slots 0-1 and pads slot 2; BS 1
/// pads slot 0 and sends in slots 1-2 with its two data rows exchanged.
/// Each pad completes the neighboring data row so that the two-slot window
/// the other cell's receivers combine over cancels exactly.
inline IbcTransmitBlock ibc_encode(const SymbolFrame& f, const IbcPrecoders& pre) {
    IbcTransmitBlock tb;
    for (int j = 0; j < 2; ++j) {
        const CMat x = alamouti_embed(f.s[j][0][0], f.s[j][0][1]) * pre.P[j][0] +
                       alamouti_embed(f.s[j][1][0], f.s[j][1][1]) * pre.P[j][1];
        CMat X(3, 2);
        const cplx pad0 = -std::conj(x(1, 1));
        const cplx pad1 = std::conj(x(1, 0));
        if (j == 0) {
            X.set_block(0, 0, x);
            X(2, 0) = pad0;
            X(2, 1) = pad1;
        } else {
            X(0, 0) = pad0;
            X(0, 1) = pad1;
            X(1, 0) = x(1, 0);
            X(1, 1) = x(1, 1);
            X(2, 0) = x(0, 0);
            X(2, 1) = x(0, 1);
        }
        tb.X[j] = X;
    }
    return tb;
}

/// Y[j][i]: the block at user i of cell j.
inline std::array<std::array<CMat, 2>, 2> ibc_apply_channel(const IbcTransmitBlock& tb,
                                                            const ChannelSetCell& ch,
                                                            TrialRng& rng,
                                                            double noise_var = 1.0) {
    std::array<std::array<CMat, 2>, 2> Y;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
            Y[j][i] = tb.X[j] * ch.H[j][i] + tb.X[1 - j] * ch.I[j][i];
            add_awgn(Y[j][i], rng, noise_var);
        }
    return Y;
}

/// Receiver (j, i): invert the own interfering link, then combine the two
/// data slots of its cell. Everything with the swapped Alamouti structure
/// cancels, leaving yhat_k = g s_k + noise with a real positive gain.
inline std::optional<std::array<cplx, 2>> ibc_receive(const CMat& Y, const ChannelSetCell& ch,
                                                      int j, int i) {
    auto inv = try_inverse2(ch.I[j][i]);
    if (!inv) return std::nullopt;
    const CMat Yt = Y * (*inv);
    std::array<cplx, 2> yhat;
    if (j == 0) {
        yhat[0] = Yt(0, 0) + std::conj(Yt(1, 1));
        yhat[1] = Yt(0, 1) - std::conj(Yt(1, 0));
    } else {
        yhat[0] = Yt(2, 0) + std::conj(Yt(1, 1));
        yhat[1] = Yt(2, 1) - std::conj(Yt(1, 0));
    }
    return yhat;
}

/// Blind PSK correlation decision max_s Re(yhat s*); needs no channel
/// knowledge because the end-to-end gain is real and positive.
inline std::array<std::uint32_t, 2> ibc_decode(const std::array<cplx, 2>& yhat,
                                               const Constellation& c, double power) {
    const double amp = std::sqrt(power);
    std::array<std::uint32_t, 2> out;
    for (int k = 0; k < 2; ++k) {
        unsigned best = 0;
        double best_m = -1e300;
        for (unsigned l = 0; l < c.points.size(); ++l) {
            const double m = (yhat[k] * std::conj(amp * c.points[l])).real();
            if (m > best_m) {
                best_m = m;
                best = l;
            }
        }
        out[k] = best;
    }
    return out;
}

/// End-to-end 2x2 map s^[ji] -> yhat at user (j, i) in noiseless operation.
/// The construction makes it g * I with g real positive; gamma per stream
/// is g^2 over the post-beamforming noise variance ||inv(I[j][i])||_F^2.
inline std::optional<CMat> ibc_effective_map(const ChannelSetCell& ch, const IbcPrecoders& pre,
                                             int j, int i) {
    CMat M(2, 2);
    for (int k = 0; k < 2; ++k) {
        SymbolFrame f = zero_frame();
        f.s[j][i][k] = 1.0;
        const IbcTransmitBlock tb = ibc_encode(f, pre);
        CMat Y = tb.X[j] * ch.H[j][i] + tb.X[1 - j] * ch.I[j][i];
        auto yhat = ibc_receive(Y, ch, j, i);
        if (!yhat) return std::nullopt;
        M(0, k) = (*yhat)[0];
        M(1, k) = (*yhat)[1];
    }
    return M;
}

inline std::optional<double> ibc_gamma(const ChannelSetCell& ch, const IbcPrecoders& pre, int j,
                                       int i) {
    auto M = ibc_effective_map(ch, pre, j, i);
    if (!M) return std::nullopt;
    const double g = 0.5 * ((*M)(0, 0).real() + (*M)(1, 1).real());
    return g * g / pre.iinv_norm_sq[j][i];
}

/// The 6-dim receive-side stack of Eq.-(27)ff used for the alignment
/// pattern checks: (Yt00, Yt01, Yt10*, Yt11*, Yt20, Yt21).
inline CMat ibc_stack(const CMat& Yt) {
    CMat y(6, 1);
    y(0, 0) = Yt(0, 0);
    y(1, 0) = Yt(0, 1);
    y(2, 0) = std::conj(Yt(1, 0));
    y(3, 0) = std::conj(Yt(1, 1));
    y(4, 0) = Yt(2, 0);
    y(5, 0) = Yt(2, 1);
    return y;
}

/// Constant 6x4 basis of the interference subspace at a cell-j receiver,
/// in the ibc_stack coordinate order.
inline CMat ibc_interference_basis(int j) {
    // Columns correspond to the other BS's variables
    // (x(1,0)*, x(1,1)*, x(0,0), x(0,1)) as they enter the stack.
    CMat Q(6, 4);
    if (j == 0) {
        Q(0, 1) = -1.0;
        Q(1, 0) = 1.0;
        Q(2, 0) = 1.0;
        Q(3, 1) = 1.0;
        Q(4, 2) = 1.0;
        Q(5, 3) = 1.0;
    } else {
        Q(0, 2) = 1.0;
        Q(1, 3) = 1.0;
        Q(2, 0) = 1.0;
        Q(3, 1) = 1.0;
        Q(4, 1) = -1.0;
        Q(5, 0) = 1.0;
    }
    return Q;
}

/// The swapped-Alamouti equivalent channel of the same-cell interfering
/// user at receiver (j, i) (Eq. (26) in the cell-0 instance).
inline CMat ibc_intra_cell_equivalent(const IbcPrecoders& pre, int j, int i) {
    return detail::ibc_bracket(pre.Ht[j][i]) * pre.Ht[j][i];
}

/// The desired equivalent channel at receiver (j, i) and its two-slot
/// combination (the Alamouti matrix of Eq. (30)).
inline CMat ibc_desired_equivalent(const IbcPrecoders& pre, int j, int i) {
    return detail::ibc_bracket(pre.Ht[j][1 - i]) * pre.Ht[j][i];
}

inline CMat ibc_combined_matrix(const CMat& Hd) {
    return CMat(2, 2,
                {Hd(0, 0) + std::conj(Hd(1, 1)), Hd(1, 0) - std::conj(Hd(0, 1)),
                 Hd(0, 1) - std::conj(Hd(1, 0)), Hd(1, 1) + std::conj(Hd(0, 0))});
}

// --------------------------------------------- extended downlink-IA baseline

struct DownlinkIaPrecoders {
    CMat Prand;            // 6x4, shared by both cells, drawn per trial
    CMat u[2][2];          // 2x6 receive beamformers, orthonormal rows
    CMat G[2];             // 6x4 composite transmit precoders, power 3P per BS
    double beta[2][2][2];  // beta[j][i][k]: end-to-end stream amplitude
};

namespace detail {
inline CMat per_slot_apply6(const CMat& m, const CMat& v) {
    CMat r(6, v.cols());
    for (int t = 0; t < 3; ++t) r.set_block(2 * t, 0, m * v.block(2 * t, 0, 2, v.cols()));
    return r;
}

/// Orthonormal basis of the left null space of the 6x4 matrix A, as two
/// rows. Deterministic: Gram-Schmidt over A's columns, then over the
/// canonical basis vectors in index order.
inline std::optional<CMat> left_null_basis(const CMat& A) {
    std::array<CMat, 6> q;
    int nq = 0;
    auto push = [&](CMat v, double min_keep) -> int {
        for (int pass = 0; pass < 2; ++pass)
            for (int m = 0; m < nq; ++m) v -= q[m] * vdot(q[m], v);
        const double n = v.frob_norm();
        if (n < min_keep) return 0;
        q[nq++] = v * (1.0 / n);
        return 1;
    };
    const double scale = A.frob_norm() / std::sqrt(4.0);
    for (int c = 0; c < 4; ++c)
        if (!push(A.col(c), 1e-9 * scale)) return std::nullopt;
    CMat U(2, 6);
    int found = 0;
    for (int i = 0; i < 6 && found < 2; ++i) {
        CMat e(6, 1);
        e(i, 0) = 1.0;
        if (push(e, 1e-6)) {
            for (int c = 0; c < 6; ++c) U(found, c) = std::conj(q[nq - 1](c, 0));
            ++found;
        }
    }
    if (found < 2) return std::nullopt;
    return U;
}
}  // namespace detail

inline std::optional<DownlinkIaPrecoders> downlink_ia_build(const ChannelSetCell& ch,
                                                            const CMat& Prand) {
    DownlinkIaPrecoders d;
    d.Prand = Prand;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
            auto u = detail::left_null_basis(detail::per_slot_apply6(ch.I[j][i], Prand));
            if (!u) return std::nullopt;
            d.u[j][i] = *u;
        }
    for (int j = 0; j < 2; ++j) {
        CMat F(4, 4);
        for (int i = 0; i < 2; ++i) {
            const CMat Fi = d.u[j][i] * detail::per_slot_apply6(ch.H[j][i], Prand);
            F.set_block(2 * i, 0, Fi);
        }
        auto Finv = try_inverse(F);
        if (!Finv) return std::nullopt;
        const CMat G0 = Prand * (*Finv);
        CMat G(6, 4);
        for (int k = 0; k < 4; ++k) {
            const double n = G0.col(k).frob_norm();
            if (n <= 1e-9 || n >= 1e9) return std::nullopt;
            const double amp = std::sqrt(kXPowerScale) / n;  // 3/4 power per stream
            for (int r = 0; r < 6; ++r) G(r, k) = G0(r, k) * amp;
            d.beta[j][k / 2][k % 2] = amp;
        }
        d.G[j] = G;
    }
    return d;
}

inline std::optional<DownlinkIaPrecoders> downlink_ia_build(const ChannelSetCell& ch,
                                                            TrialRng& rng) {
    return downlink_ia_build(ch, sample_matrix(rng, 6, 4));
}

inline std::array<CMat, 2> downlink_ia_encode(const SymbolFrame& f,
                                              const DownlinkIaPrecoders& d) {
    std::array<CMat, 2> x{CMat(6, 1), CMat(6, 1)};
    for (int j = 0; j < 2; ++j) {
        CMat s(4, 1);
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) s(2 * i + k, 0) = f.s[j][i][k];
        x[j] = d.G[j] * s;
    }
    return x;
}

/// z[j][i]: the two post-beamforming decision statistics of user (j, i).
inline std::array<std::array<CMat, 2>, 2> downlink_ia_receive(const std::array<CMat, 2>& x,
                                                              const ChannelSetCell& ch,
                                                              const DownlinkIaPrecoders& d,
                                                              TrialRng& rng,
                                                              double noise_var = 1.0) {
    std::array<std::array<CMat, 2>, 2> z;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
            CMat y = detail::per_slot_apply6(ch.H[j][i], x[j]) +
                     detail::per_slot_apply6(ch.I[j][i], x[1 - j]);
            add_awgn(y, rng, noise_var);
            z[j][i] = d.u[j][i] * y;
        }
    return z;
}

inline std::array<std::uint32_t, 2> downlink_ia_decode(const CMat& z,
                                                       const DownlinkIaPrecoders& d,
                                                       const Constellation& c, double power,
                                                       int j, int i) {
    const double amp = std::sqrt(power);
    return {nearest_label_scaled(c, z(0, 0), d.beta[j][i][0] * amp),
            nearest_label_scaled(c, z(1, 0), d.beta[j][i][1] * amp)};
}

inline double downlink_ia_gamma(const DownlinkIaPrecoders& d, int j, int i, int k) {
    return d.beta[j][i][k] * d.beta[j][i][k];
}

}  // namespace iasim

#endif  // IASIM_CELLULAR_HPP
