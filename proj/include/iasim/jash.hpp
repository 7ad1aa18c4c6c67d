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
// The eigenvector-based linear alignment baseline for the 2x2 X channel
// (M = 2), its ZF receiver, and the modified variant that puts an Alamouti
// inner code on top of two alignment blocks at half the symbol rate.
//
// Signal-space convention for this scheme: the T = 3 slot extension is a
// 6-vector of three per-slot antenna pairs, and receiver i sees per slot
// y_t = H[0][i] x_t^[0] + H[1][i] x_t^[1] + w_t. The beamformers come from
// the eigenvectors u_1, u_2 of inv(H[0][0]) H[1][0] inv(H[1][1]) H[0][1];
// the transmitter-0 patterns place (u_1, u_2 / u_2, u_1) in slots {0,1}
// for its receiver-0 symbols and slots {0,2} for its receiver-1 symbols,
// and transmitter 1 solves the alignment identities for its own patterns.
// This design requires global CSIT (contrast with the Alamouti-embedded
// scheme, whose precoders use only the transmitter's local links).

#ifndef IASIM_JASH_HPP
#define IASIM_JASH_HPP

#include <array>
#include <optional>

#include "iasim/channels.hpp"
#include "iasim/cmat.hpp"
#include "iasim/constellation.hpp"

namespace iasim {

struct JashBeamformers {
    Eig2 eig;
    CMat u;              // [u1 u2], 2x2
    CMat vraw[2][2];     // 6x2 unnormalized beamformers; columns are streams
    double scale[2][2];  // per-stream amplitude scales (power normalization)
};

namespace detail {
// 6x2 beamformer from per-slot column pairs; `slots` lists the two slots
// carrying (a,b) and (b,a) respectively, the remaining slot stays zero.
inline CMat vbar_pattern(const CMat& a, const CMat& b, int slot_ab, int slot_ba) {
    CMat v(6, 2);
    v(2 * slot_ab + 0, 0) = a(0, 0);
    v(2 * slot_ab + 1, 0) = a(1, 0);
    v(2 * slot_ab + 0, 1) = b(0, 0);
    v(2 * slot_ab + 1, 1) = b(1, 0);
    v(2 * slot_ba + 0, 0) = b(0, 0);
    v(2 * slot_ba + 1, 0) = b(1, 0);
    v(2 * slot_ba + 0, 1) = a(0, 0);
    v(2 * slot_ba + 1, 1) = a(1, 0);
    return v;
}

// Applies a 2x2 matrix to each slot block of a 6xN matrix (I_3 kron M).
inline CMat per_slot_apply(const CMat& m, const CMat& v) {
    CMat r(6, v.cols());
    for (int t = 0; t < 3; ++t) {
        const CMat blk = m * v.block(2 * t, 0, 2, v.cols());
        r.set_block(2 * t, 0, blk);
    }
    return r;
}
}  // namespace detail

inline std::optional<JashBeamformers> jash_beamformers(const ChannelSetX& ch) {
    auto inv00 = try_inverse2(ch.H[0][0]);
    auto inv11 = try_inverse2(ch.H[1][1]);
    auto inv10 = try_inverse2(ch.H[1][0]);
    if (!inv00 || !inv11 || !inv10) return std::nullopt;
    const CMat A = (*inv00) * ch.H[1][0] * (*inv11) * ch.H[0][1];
    auto eig = try_eig2x2(A);
    if (!eig) return std::nullopt;

    JashBeamformers bf;
    bf.eig = *eig;
    bf.u = CMat(2, 2);
    bf.u.set_col(0, eig->u1);
    bf.u.set_col(1, eig->u2);

    bf.vraw[0][0] = detail::vbar_pattern(eig->u1, eig->u2, 0, 1);
    bf.vraw[0][1] = detail::vbar_pattern(eig->u1, eig->u2, 0, 2);
    // Alignment identities: tx-1 mirrors tx-0 through the cross links.
    bf.vraw[1][0] = detail::per_slot_apply((*inv11) * ch.H[0][1], bf.vraw[0][0]);
    bf.vraw[1][1] = detail::per_slot_apply((*inv10) * ch.H[0][0], bf.vraw[0][1]);

    // Expected block power 3P per transmitter, split equally over its four
    // streams: each scaled column must carry squared norm 3/4.
    constexpr double target = 0.75;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
            const double n = bf.vraw[j][i].col(0).frob_norm_sq();
            if (n <= 1e-18) return std::nullopt;
            bf.scale[j][i] = std::sqrt(target / n);
        }
    return bf;
}

/// x^[j] = sum_i scale[j][i] * vraw[j][i] * (s_0^[ji], s_1^[ji]).
inline std::array<CMat, 2> jash_encode(const SymbolFrame& f, const JashBeamformers& bf) {
    std::array<CMat, 2> x{CMat(6, 1), CMat(6, 1)};
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
            CMat s(2, 1);
            s(0, 0) = f.s[j][i][0];
            s(1, 0) = f.s[j][i][1];
            x[j] += bf.vraw[j][i] * s * bf.scale[j][i];
        }
    return x;
}

inline std::array<CMat, 2> jash_apply_channel(const std::array<CMat, 2>& x, const ChannelSetX& ch,
                                              TrialRng& rng, double noise_var = 1.0) {
    std::array<CMat, 2> y;
    for (int i = 0; i < 2; ++i) {
        y[i] = detail::per_slot_apply(ch.H[0][i], x[0]) + detail::per_slot_apply(ch.H[1][i], x[1]);
        add_awgn(y[i], rng, noise_var);
    }
    return y;
}

/// The stacked receive-side system at receiver i: columns are the
/// equivalent channels of (s_0^[0i], s_1^[0i], s_0^[1i], s_1^[1i]) followed
/// by the two aligned-interference directions. Desired columns carry the
/// transmit power scales; interference columns are the raw shared pair.
inline CMat jash_equivalent_matrix(const ChannelSetX& ch, const JashBeamformers& bf, int i) {
    CMat G(6, 6);
    for (int j = 0; j < 2; ++j) {
        const CMat cols = detail::per_slot_apply(ch.H[j][i], bf.vraw[j][i]) * bf.scale[j][i];
        G.set_block(0, 2 * j, cols);
    }
    const CMat icols = detail::per_slot_apply(ch.H[0][i], bf.vraw[0][1 - i]);
    G.set_block(0, 4, icols);
    return G;
}

/// Values of the two aligned interference symbols seen at receiver i,
/// relative to the raw interference columns of jash_equivalent_matrix.
inline std::array<cplx, 2> jash_aligned_symbols(const SymbolFrame& f, const JashBeamformers& bf,
                                                int i) {
    const int io = 1 - i;
    return {bf.scale[0][io] * f.s[0][io][0] + bf.scale[1][io] * f.s[1][io][0],
            bf.scale[0][io] * f.s[0][io][1] + bf.scale[1][io] * f.s[1][io][1]};
}

namespace detail {
/// Orthogonal projection onto the null space of the columns of B.
inline std::optional<CMat> null_projector(const CMat& B) {
    auto gram_inv = try_inverse(B.herm() * B);
    if (!gram_inv) return std::nullopt;
    return CMat::identity(B.rows()) - B * (*gram_inv) * B.herm();
}

/// Post-ZF scalar statistic for column m of G against unit white noise:
/// z = h^H P y = g s_m + n with Var n = g and g = h^H P h.
struct ZfStream {
    CMat ph;   // P h, 6x1
    double g;  // ||P h||^2 = instantaneous normalized receive SNR
};

inline std::optional<ZfStream> zf_stream(const CMat& G, int m) {
    CMat B(6, 5);
    int c = 0;
    for (int k = 0; k < 6; ++k) {
        if (k == m) continue;
        for (int r = 0; r < 6; ++r) B(r, c) = G(r, k);
        ++c;
    }
    auto P = null_projector(B);
    if (!P) return std::nullopt;
    ZfStream s;
    s.ph = (*P) * G.col(m);
    s.g = s.ph.frob_norm_sq();
    return s;
}
}  // namespace detail

/// ZF decode of all four directions. out[j][i][k] = decoded label.
inline std::optional<std::array<std::array<std::array<std::uint32_t, 2>, 2>, 2>> jash_decode_all(
    const std::array<CMat, 2>& y, const ChannelSetX& ch, const JashBeamformers& bf,
    const Constellation& c, double power) {
    std::array<std::array<std::array<std::uint32_t, 2>, 2>, 2> out{};
    const double amp = std::sqrt(power);
    for (int i = 0; i < 2; ++i) {
        const CMat G = jash_equivalent_matrix(ch, bf, i);
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                auto zs = detail::zf_stream(G, 2 * j + k);
                if (!zs || zs->g <= 1e-15) return std::nullopt;
                const cplx z = vdot(zs->ph, y[i]);
                out[j][i][k] = nearest_label_scaled(c, z, zs->g * amp);
            }
    }
    return out;
}

/// Instantaneous normalized receive SNR of stream (j, i, k); includes the
/// scheme's power normalization, so the receive SNR at power P is gamma*P.
inline std::optional<double> jash_gamma(const ChannelSetX& ch, const JashBeamformers& bf, int j,
                                        int i, int k) {
    const CMat G = jash_equivalent_matrix(ch, bf, i);
    auto zs = detail::zf_stream(G, 2 * j + k);
    if (!zs) return std::nullopt;
    return zs->g;
}

/// Same projector SNR with the transmit power normalization stripped
/// (unit-norm eigenvector columns), the quantity the upper bound gamma'
/// dominates.
inline std::optional<double> jash_gamma_raw(const ChannelSetX& ch, const JashBeamformers& bf,
                                            int j, int i, int k) {
    auto g = jash_gamma(ch, bf, j, i, k);
    if (!g) return std::nullopt;
    return *g / (bf.scale[j][i] * bf.scale[j][i]);
}

struct JashGammaParts {
    cplx kappa;
    double delta11, delta22;  // diagonal of (u^H H^H H u)^-1 for H = H[0][0]
};

inline std::optional<JashGammaParts> jash_gamma_parts(const ChannelSetX& ch,
                                                      const JashBeamformers& bf) {
    auto d = try_inverse2(bf.u.herm() * ch.H[0][0].herm() * ch.H[0][0] * bf.u);
    if (!d) return std::nullopt;
    JashGammaParts p;
    p.kappa = bf.eig.kappa;
    p.delta11 = (*d)(0, 0).real();
    p.delta22 = (*d)(1, 1).real();
    return p;
}

/// gamma' of the interference-free upper-bound system for stream
/// (0, 0, 0): |1-kappa|^2 / (delta11 + |kappa|^2 delta22).
inline std::optional<double> jash_gamma_upper(const ChannelSetX& ch, const JashBeamformers& bf) {
    auto p = jash_gamma_parts(ch, bf);
    if (!p) return std::nullopt;
    const double k2 = std::norm(p->kappa);
    const double denom = p->delta11 + k2 * p->delta22;
    if (denom <= 0.0) return std::nullopt;
    return std::norm(1.0 - p->kappa) / denom;
}

// ----- Modified variant: Alamouti inner code over two alignment blocks ---

/// Two transmit frames carrying one Alamouti codeword per direction:
/// block A sends (a_0, a_1), block B sends (-a_1*, a_0*).
inline std::pair<SymbolFrame, SymbolFrame> modified_jash_frames(const SymbolFrame& a) {
    SymbolFrame fb = a;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
            fb.s[j][i][0] = -std::conj(a.s[j][i][1]);
            fb.s[j][i][1] = std::conj(a.s[j][i][0]);
        }
    return {a, fb};
}

/// MRC-combined decode of the inner Alamouti code. The two post-ZF streams
/// of a direction have gains (g_0, g_1) in both blocks; combining gives
/// each symbol the summed SNR g_0 + g_1.
inline std::optional<std::array<std::array<std::array<std::uint32_t, 2>, 2>, 2>>
modified_jash_decode_all(const std::array<CMat, 2>& yA, const std::array<CMat, 2>& yB,
                         const ChannelSetX& ch, const JashBeamformers& bf, const Constellation& c,
                         double power) {
    std::array<std::array<std::array<std::uint32_t, 2>, 2>, 2> out{};
    const double amp = std::sqrt(power);
    for (int i = 0; i < 2; ++i) {
        const CMat G = jash_equivalent_matrix(ch, bf, i);
        for (int j = 0; j < 2; ++j) {
            auto z0 = detail::zf_stream(G, 2 * j + 0);
            auto z1 = detail::zf_stream(G, 2 * j + 1);
            if (!z0 || !z1 || z0->g + z1->g <= 1e-15) return std::nullopt;
            const cplx z0A = vdot(z0->ph, yA[i]);
            const cplx z1A = vdot(z1->ph, yA[i]);
            const cplx z0B = vdot(z0->ph, yB[i]);
            const cplx z1B = vdot(z1->ph, yB[i]);
            const double gsum = z0->g + z1->g;
            const cplx r0 = z0A + std::conj(z1B);
            const cplx r1 = z1A - std::conj(z0B);
            out[j][i][0] = nearest_label_scaled(c, r0, gsum * amp);
            out[j][i][1] = nearest_label_scaled(c, r1, gsum * amp);
        }
    }
    return out;
}

/// Effective SNR of direction (j, i) under the modified scheme.
inline std::optional<double> modified_jash_gamma(const ChannelSetX& ch, const JashBeamformers& bf,
                                                 int j, int i) {
    auto g0 = jash_gamma(ch, bf, j, i, 0);
    auto g1 = jash_gamma(ch, bf, j, i, 1);
    if (!g0 || !g1) return std::nullopt;
    return *g0 + *g1;
}

}  // namespace iasim

#endif  // IASIM_JASH_HPP
