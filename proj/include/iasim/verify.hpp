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
// Fast structural checks over random realizations: exact interference
// alignment, the algebraic structure of every equivalent channel the
// receivers rely on, and full rank of the desired signal space. These run
// in seconds and make up the `verify` command together with the slower
// statistical lemma verifiers in metrics.hpp.

#ifndef IASIM_VERIFY_HPP
#define IASIM_VERIFY_HPP

#include <string>
#include <vector>

#include "iasim/metrics.hpp"

namespace iasim {

namespace detail {
/// Relative residual of v against the span of the columns of B.
inline double span_residual(const CMat& v, const CMat& B) {
    auto P = null_projector(B);  // projector onto the orthogonal complement
    if (!P) return 1.0;
    const double vn = v.frob_norm();
    if (vn == 0.0) return 0.0;
    return ((*P) * v).frob_norm() / vn;
}
}  // namespace detail

/// X channel: noiseless received interference lies exactly in the span of
/// the two constant columns of the stacked system.
inline VerifyReport verify_x_alignment(std::uint64_t trials, RngSpec rng, int workers) {
    const std::uint64_t stream_id = make_stream_id(SchemeId::XAlamouti, 10, 0);
    constexpr std::uint64_t kBatch = 512;
    const std::uint64_t nb = (trials + kBatch - 1) / kBatch;
    std::vector<double> worst(nb, 0.0);
    parallel_batches(nb, workers, [&](std::uint64_t b) {
        double w = 0;
        const std::uint64_t t1 = std::min((b + 1) * kBatch, trials);
        for (std::uint64_t t = b * kBatch; t < t1; ++t) {
            TrialRng trng(rng.master_seed, stream_id, t);
            std::uint32_t res = 0;
            auto [ch, bf] = detail::sample_gated(trng, res, sample_x_channels,
                                                 [](const ChannelSetX& s) { return x_beamformers(s); });
            // Interference-only frame: zero the desired directions of each
            // receiver in turn.
            const Constellation c = make_constellation(ConstellationKind::QPSK);
            SymbolFrame f = random_frame(c, 1.0, trng);
            for (int i = 0; i < 2; ++i) {
                SymbolFrame fi = f;
                fi.s[0][i][0] = fi.s[0][i][1] = fi.s[1][i][0] = fi.s[1][i][1] = 0.0;
                const XTransmitParts parts = x_encode_parts(fi, bf);
                CMat cross[2][2];
                for (int j = 0; j < 2; ++j)
                    for (int i2 = 0; i2 < 2; ++i2) cross[j][i2] = ch.H[j][1 - i2];
                const auto Y = xpipe_apply_channel(parts, ch.H, cross, trng, 0.0);
                const CMat ystack = x_receive_stack(Y[i]);
                auto [i0, i1] = x_interference_columns(i);
                CMat B(6, 2);
                B.set_block(0, 0, i0);
                for (int r = 0; r < 6; ++r) B(r, 1) = i1(r, 0);
                w = std::max(w, detail::span_residual(ystack, B));
            }
        }
        worst[b] = w;
    });
    VerifyReport r;
    r.name = "x_interference_span";
    r.stat = *std::max_element(worst.begin(), worst.end());
    r.pass = r.stat < 1e-10;
    r.detail = "max relative residual " + std::to_string(r.stat) + " over " +
               std::to_string(trials) + " realizations x 2 receivers";
    return r;
}

/// The decoupled per-transmitter matrix is Alamouti at every receiver.
inline VerifyReport verify_x_hat_alamouti(std::uint64_t trials, RngSpec rng, int workers) {
    const std::uint64_t stream_id = make_stream_id(SchemeId::XAlamouti, 11, 0);
    constexpr std::uint64_t kBatch = 1024;
    const std::uint64_t nb = (trials + kBatch - 1) / kBatch;
    std::vector<std::uint64_t> bad(nb, 0);
    parallel_batches(nb, workers, [&](std::uint64_t b) {
        const std::uint64_t t1 = std::min((b + 1) * kBatch, trials);
        for (std::uint64_t t = b * kBatch; t < t1; ++t) {
            TrialRng trng(rng.master_seed, stream_id, t);
            std::uint32_t res = 0;
            auto [ch, bf] = detail::sample_gated(trng, res, sample_x_channels,
                                                 [](const ChannelSetX& s) { return x_beamformers(s); });
            CMat y1(2, 1), y2(2, 1);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    auto d = x_decouple_users(y1, y2, bf, i, j);
                    if (!d || !is_alamouti(d->H, 1e-10 * std::max(1.0, d->H.frob_norm())))
                        bad[b] += 1;
                }
        }
    });
    std::uint64_t viol = 0;
    for (auto v : bad) viol += v;
    VerifyReport r;
    r.name = "x_decoupled_alamouti";
    r.stat = static_cast<double>(viol);
    r.pass = viol == 0;
    r.detail = std::to_string(viol) + " non-Alamouti decoupled matrices over " +
               std::to_string(trials) + " realizations x 4 directions";
    return r;
}

/// Full rank of the stacked desired-signal matrix (the DoF argument).
inline VerifyReport verify_x_desired_rank(std::uint64_t trials, RngSpec rng, int workers) {
    const std::uint64_t stream_id = make_stream_id(SchemeId::XAlamouti, 12, 0);
    constexpr std::uint64_t kBatch = 1024;
    const std::uint64_t nb = (trials + kBatch - 1) / kBatch;
    std::vector<double> mins(nb, 1e300);
    parallel_batches(nb, workers, [&](std::uint64_t b) {
        double mn = 1e300;
        const std::uint64_t t1 = std::min((b + 1) * kBatch, trials);
        for (std::uint64_t t = b * kBatch; t < t1; ++t) {
            TrialRng trng(rng.master_seed, stream_id, t);
            std::uint32_t res = 0;
            auto [ch, bf] = detail::sample_gated(trng, res, sample_x_channels,
                                                 [](const ChannelSetX& s) { return x_beamformers(s); });
            for (int i = 0; i < 2; ++i) mn = std::min(mn, svd_smallest(x_desired_matrix(bf, i)));
        }
        mins[b] = mn;
    });
    VerifyReport r;
    r.name = "x_desired_full_rank";
    r.stat = *std::min_element(mins.begin(), mins.end());
    r.pass = r.stat > 0.0;
    r.detail = "min smallest singular value " + std::to_string(r.stat) + " over " +
               std::to_string(trials) + " realizations x 2 receivers";
    return r;
}

/// IBC: the intra-cell equivalent channel satisfies the swapped-Alamouti
/// identities, and all six interfering symbols stay in span(Q).
inline VerifyReport verify_ibc_structure(std::uint64_t trials, RngSpec rng, int workers) {
    const std::uint64_t stream_id = make_stream_id(SchemeId::IbcAlamouti, 13, 0);
    constexpr std::uint64_t kBatch = 256;
    const std::uint64_t nb = (trials + kBatch - 1) / kBatch;
    struct Part {
        double worst_swapped = 0, worst_span = 0;
    };
    std::vector<Part> parts(nb);
    parallel_batches(nb, workers, [&](std::uint64_t b) {
        Part& p = parts[b];
        const std::uint64_t t1 = std::min((b + 1) * kBatch, trials);
        const Constellation c = make_constellation(ConstellationKind::QPSK);
        for (std::uint64_t t = b * kBatch; t < t1; ++t) {
            TrialRng trng(rng.master_seed, stream_id, t);
            std::uint32_t res = 0;
            auto [ch, pre] =
                detail::sample_gated(trng, res, sample_cell_channels,
                                     [](const ChannelSetCell& s) { return ibc_precoders(s); });
            for (int j = 0; j < 2; ++j)
                for (int i = 0; i < 2; ++i) {
                    const CMat Hi = ibc_intra_cell_equivalent(pre, j, i);
                    const double sc = std::max(1.0, Hi.frob_norm());
                    const double r1 = std::abs(Hi(1, 0) - std::conj(Hi(0, 1))) / sc;
                    const double r2 = std::abs(Hi(1, 1) + std::conj(Hi(0, 0))) / sc;
                    p.worst_swapped = std::max({p.worst_swapped, r1, r2});
                }
            // Interference span: zero the desired user's symbols, stack.
            const SymbolFrame f = random_frame(c, 1.0, trng);
            for (int j = 0; j < 2; ++j)
                for (int i = 0; i < 2; ++i) {
                    SymbolFrame fi = f;
                    fi.s[j][i][0] = fi.s[j][i][1] = 0.0;
                    const IbcTransmitBlock tb = ibc_encode(fi, pre);
                    CMat Y = tb.X[j] * ch.H[j][i] + tb.X[1 - j] * ch.I[j][i];
                    auto inv = try_inverse2(ch.I[j][i]);
                    if (!inv) continue;
                    const CMat ystack = ibc_stack(Y * (*inv));
                    p.worst_span = std::max(
                        p.worst_span, detail::span_residual(ystack, ibc_interference_basis(j)));
                }
        }
    });
    VerifyReport r;
    r.name = "ibc_alignment_structure";
    double ws = 0, wq = 0;
    for (const Part& p : parts) {
        ws = std::max(ws, p.worst_swapped);
        wq = std::max(wq, p.worst_span);
    }
    r.stat = std::max(ws, wq);
    r.pass = ws < 1e-10 && wq < 1e-10;
    r.detail = "max swapped-identity residual " + std::to_string(ws) + ", max span(Q) residual " +
               std::to_string(wq) + " over " + std::to_string(trials) + " realizations";
    return r;
}

/// Composite pass over the structural suite plus the lemma verifiers.
inline std::vector<VerifyReport> run_verify_suite(std::uint64_t structural_trials,
                                                  std::uint64_t statistical_trials, RngSpec rng,
                                                  int workers) {
    std::vector<VerifyReport> reports;
    reports.push_back(verify_x_alignment(structural_trials, rng, workers));
    reports.push_back(verify_x_hat_alamouti(structural_trials, rng, workers));
    reports.push_back(verify_x_desired_rank(structural_trials, rng, workers));
    reports.push_back(verify_ibc_structure(structural_trials, rng, workers));
    reports.push_back(verify_lemma2(structural_trials, rng, workers));
    reports.push_back(verify_gamma_bar_bracket(statistical_trials, rng, workers));
    reports.push_back(verify_gamma_prime(statistical_trials, rng, workers));
    reports.push_back(verify_lemma1(std::max<std::uint64_t>(statistical_trials, 1000000), rng, workers));
    reports.push_back(verify_phi_bounds(std::max<std::uint64_t>(statistical_trials, 1000000), rng, workers));
    return reports;
}

}  // namespace iasim

#endif  // IASIM_VERIFY_HPP
