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
// One-trial Monte Carlo drivers for every transmission scheme: channel
// sampling with conditioning gates (degenerate realizations are resampled
// and counted), one uncoded block round trip for BER, and the post-ZF
// per-stream SNR samplers the diversity and mutual-information metrics
// consume.

#ifndef IASIM_SCHEMES_HPP
#define IASIM_SCHEMES_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "iasim/cellular.hpp"
#include "iasim/channels.hpp"
#include "iasim/cmat.hpp"
#include "iasim/constellation.hpp"
#include "iasim/jash.hpp"
#include "iasim/x_alamouti.hpp"

namespace iasim {

enum class SchemeId { XAlamouti, Jash, JashModified, Imac, IbcAlamouti, IbcDownlinkIa };

inline const char* scheme_name(SchemeId s) {
    switch (s) {
        case SchemeId::XAlamouti: return "x_alamouti";
        case SchemeId::Jash: return "jash";
        case SchemeId::JashModified: return "jash_modified";
        case SchemeId::Imac: return "imac";
        case SchemeId::IbcAlamouti: return "ibc_alamouti";
        case SchemeId::IbcDownlinkIa: return "ibc_downlink_ia";
    }
    return "?";
}

inline SchemeId scheme_from_name(const std::string& s) {
    if (s == "x_alamouti") return SchemeId::XAlamouti;
    if (s == "jash") return SchemeId::Jash;
    if (s == "jash_modified") return SchemeId::JashModified;
    if (s == "imac") return SchemeId::Imac;
    if (s == "ibc_alamouti") return SchemeId::IbcAlamouti;
    if (s == "ibc_downlink_ia") return SchemeId::IbcDownlinkIa;
    throw std::invalid_argument("unknown scheme name: " + s);
}

/// The IBC correlation decoder assumes constant-modulus symbols.
inline bool scheme_supports(SchemeId s, ConstellationKind c) {
    if (s == SchemeId::IbcAlamouti) return is_psk(c);
    return true;
}

/// Channel uses per independent symbol frame (the modified JaSh variant
/// spends two alignment blocks per codeword).
inline int scheme_slots_per_frame(SchemeId s) {
    return s == SchemeId::JashModified ? 6 : 3;
}

struct TrialOutcome {
    std::uint32_t bit_errors = 0;
    std::uint32_t bits = 0;
    std::uint32_t resamples = 0;
};

namespace detail {
constexpr int kMaxResample = 64;

inline std::uint32_t bit_diff(std::uint32_t a, std::uint32_t b) {
    return static_cast<std::uint32_t>(std::popcount(a ^ b));
}

template <typename Sampler, typename Builder>
auto sample_gated(TrialRng& rng, std::uint32_t& resamples, Sampler sample, Builder build) {
    for (int t = 0; t < kMaxResample; ++t) {
        auto ch = sample(rng);
        auto built = build(ch);
        if (built) return std::make_pair(ch, *built);
        ++resamples;
    }
    throw std::runtime_error("channel conditioning gates failed 64 consecutive draws");
}

inline std::uint32_t count_frame_errors(
    const SymbolFrame& f, const std::array<std::array<std::array<std::uint32_t, 2>, 2>, 2>& dec) {
    std::uint32_t e = 0;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) e += bit_diff(f.label[j][i][k], dec[j][i][k]);
    return e;
}
}  // namespace detail

/// One uncoded block: draw a channel (resampling degenerate realizations),
/// draw fresh symbols, transmit at SNR P over unit noise, decode, count
/// bit errors over all eight desired streams.
inline TrialOutcome simulate_ber_trial(SchemeId scheme, const Constellation& c, double P,
                                       TrialRng& rng) {
    TrialOutcome out;
    const int bits_per_frame = 8 * c.bits_per_symbol;
    switch (scheme) {
        case SchemeId::XAlamouti: {
            auto [ch, bf] = detail::sample_gated(rng, out.resamples, sample_x_channels,
                                                 [](const ChannelSetX& s) { return x_beamformers(s); });
            const SymbolFrame f = random_frame(c, P, rng);
            const XTransmitParts parts = x_encode_parts(f, bf);
            CMat cross[2][2];
            for (int j = 0; j < 2; ++j)
                for (int i = 0; i < 2; ++i) cross[j][i] = ch.H[j][1 - i];
            const auto Y = xpipe_apply_channel(parts, ch.H, cross, rng);
            auto dec = x_decode_all(Y, bf, c, P);
            if (!dec) throw std::runtime_error("x decode gate failed after beamformer gate");
            out.bit_errors = detail::count_frame_errors(f, *dec);
            break;
        }
        case SchemeId::Imac: {
            auto [ch, bf] =
                detail::sample_gated(rng, out.resamples, sample_cell_channels,
                                     [](const ChannelSetCell& s) { return imac_beamformers(s); });
            const SymbolFrame f = random_frame(c, P, rng);
            const XTransmitParts parts = x_encode_parts(f, bf);
            const auto Y = imac_apply_channel(parts, ch, rng);
            auto dec = x_decode_all(Y, bf, c, P);
            if (!dec) throw std::runtime_error("imac decode gate failed after beamformer gate");
            out.bit_errors = detail::count_frame_errors(f, *dec);
            break;
        }
        case SchemeId::Jash: {
            auto [ch, bf] =
                detail::sample_gated(rng, out.resamples, sample_x_channels,
                                     [](const ChannelSetX& s) { return jash_beamformers(s); });
            const SymbolFrame f = random_frame(c, P, rng);
            const auto x = jash_encode(f, bf);
            const auto y = jash_apply_channel(x, ch, rng);
            auto dec = jash_decode_all(y, ch, bf, c, P);
            if (!dec) throw std::runtime_error("jash decode gate failed after beamformer gate");
            out.bit_errors = detail::count_frame_errors(f, *dec);
            break;
        }
        case SchemeId::JashModified: {
            auto [ch, bf] =
                detail::sample_gated(rng, out.resamples, sample_x_channels,
                                     [](const ChannelSetX& s) { return jash_beamformers(s); });
            const SymbolFrame f = random_frame(c, P, rng);
            auto [fa, fb] = modified_jash_frames(f);
            const auto yA = jash_apply_channel(jash_encode(fa, bf), ch, rng);
            const auto yB = jash_apply_channel(jash_encode(fb, bf), ch, rng);
            auto dec = modified_jash_decode_all(yA, yB, ch, bf, c, P);
            if (!dec) throw std::runtime_error("modified jash decode gate failed");
            out.bit_errors = detail::count_frame_errors(f, *dec);
            break;
        }
        case SchemeId::IbcAlamouti: {
            auto [ch, pre] =
                detail::sample_gated(rng, out.resamples, sample_cell_channels,
                                     [](const ChannelSetCell& s) { return ibc_precoders(s); });
            const SymbolFrame f = random_frame(c, P, rng);
            const IbcTransmitBlock tb = ibc_encode(f, pre);
            const auto Y = ibc_apply_channel(tb, ch, rng);
            for (int j = 0; j < 2; ++j)
                for (int i = 0; i < 2; ++i) {
                    auto yhat = ibc_receive(Y[j][i], ch, j, i);
                    if (!yhat) throw std::runtime_error("ibc receive gate failed");
                    const auto labels = ibc_decode(*yhat, c, P);
                    out.bit_errors += detail::bit_diff(f.label[j][i][0], labels[0]);
                    out.bit_errors += detail::bit_diff(f.label[j][i][1], labels[1]);
                }
            break;
        }
        case SchemeId::IbcDownlinkIa: {
            auto built = [&rng](const ChannelSetCell& s) {
                // The random precoder is part of the scheme and is drawn per
                // trial from the trial's own substream.
                return std::optional<ChannelSetCell>(s);
            };
            for (int attempt = 0;; ++attempt) {
                if (attempt >= detail::kMaxResample)
                    throw std::runtime_error("downlink-ia gates failed 64 consecutive draws");
                const ChannelSetCell ch = sample_cell_channels(rng);
                auto d = downlink_ia_build(ch, rng);
                if (!d) {
                    ++out.resamples;
                    continue;
                }
                const SymbolFrame f = random_frame(c, P, rng);
                const auto x = downlink_ia_encode(f, *d);
                const auto z = downlink_ia_receive(x, ch, *d, rng);
                for (int j = 0; j < 2; ++j)
                    for (int i = 0; i < 2; ++i) {
                        const auto labels = downlink_ia_decode(z[j][i], *d, c, P, j, i);
                        out.bit_errors += detail::bit_diff(f.label[j][i][0], labels[0]);
                        out.bit_errors += detail::bit_diff(f.label[j][i][1], labels[1]);
                    }
                break;
            }
            break;
        }
    }
    out.bits = bits_per_frame;
    return out;
}

/// Post-ZF instantaneous normalized receive SNR of the reference stream
/// (direction 0->0, symbol 0; for the modified JaSh scheme the combined
/// SNR of that direction), one fresh channel realization per call.
inline double sample_gamma_ref(SchemeId scheme, TrialRng& rng, std::uint32_t& resamples) {
    switch (scheme) {
        case SchemeId::XAlamouti: {
            auto [ch, bf] = detail::sample_gated(rng, resamples, sample_x_channels,
                                                 [](const ChannelSetX& s) { return x_beamformers(s); });
            auto g = x_gamma(bf, 0, 0, 0);
            if (!g) throw std::runtime_error("x_gamma gate failed after beamformer gate");
            return g->gamma;
        }
        case SchemeId::Imac: {
            auto [ch, bf] =
                detail::sample_gated(rng, resamples, sample_cell_channels,
                                     [](const ChannelSetCell& s) { return imac_beamformers(s); });
            auto g = x_gamma(bf, 0, 0, 0);
            if (!g) throw std::runtime_error("imac gamma gate failed");
            return g->gamma;
        }
        case SchemeId::Jash: {
            auto [ch, bf] =
                detail::sample_gated(rng, resamples, sample_x_channels,
                                     [](const ChannelSetX& s) { return jash_beamformers(s); });
            auto g = jash_gamma(ch, bf, 0, 0, 0);
            if (!g) throw std::runtime_error("jash gamma gate failed");
            return *g;
        }
        case SchemeId::JashModified: {
            auto [ch, bf] =
                detail::sample_gated(rng, resamples, sample_x_channels,
                                     [](const ChannelSetX& s) { return jash_beamformers(s); });
            auto g = modified_jash_gamma(ch, bf, 0, 0);
            if (!g) throw std::runtime_error("modified jash gamma gate failed");
            return *g;
        }
        case SchemeId::IbcAlamouti: {
            auto [ch, pre] =
                detail::sample_gated(rng, resamples, sample_cell_channels,
                                     [](const ChannelSetCell& s) { return ibc_precoders(s); });
            auto g = ibc_gamma(ch, pre, 0, 0);
            if (!g) throw std::runtime_error("ibc gamma gate failed");
            return *g;
        }
        case SchemeId::IbcDownlinkIa: {
            for (int attempt = 0;; ++attempt) {
                if (attempt >= detail::kMaxResample)
                    throw std::runtime_error("downlink-ia gates failed 64 consecutive draws");
                const ChannelSetCell ch = sample_cell_channels(rng);
                auto d = downlink_ia_build(ch, rng);
                if (!d) {
                    ++resamples;
                    continue;
                }
                return downlink_ia_gamma(*d, 0, 0, 0);
            }
        }
    }
    return 0.0;
}

/// Per-stream SNRs of all eight desired streams of one realization,
/// ordered (j, i, k). For the modified JaSh scheme the two entries of a
/// direction both carry the combined SNR (each codeword symbol enjoys it).
inline std::array<double, 8> sample_gamma_all(SchemeId scheme, TrialRng& rng,
                                              std::uint32_t& resamples) {
    std::array<double, 8> g{};
    auto idx = [](int j, int i, int k) { return 4 * j + 2 * i + k; };
    switch (scheme) {
        case SchemeId::XAlamouti:
        case SchemeId::Imac: {
            if (scheme == SchemeId::XAlamouti) {
                auto [ch, bf] =
                    detail::sample_gated(rng, resamples, sample_x_channels,
                                         [](const ChannelSetX& s) { return x_beamformers(s); });
                for (int j = 0; j < 2; ++j)
                    for (int i = 0; i < 2; ++i)
                        for (int k = 0; k < 2; ++k) {
                            auto x = x_gamma(bf, j, i, k);
                            if (!x) throw std::runtime_error("x_gamma gate failed");
                            g[idx(j, i, k)] = x->gamma;
                        }
            } else {
                auto [ch, bf] =
                    detail::sample_gated(rng, resamples, sample_cell_channels,
                                         [](const ChannelSetCell& s) { return imac_beamformers(s); });
                for (int j = 0; j < 2; ++j)
                    for (int i = 0; i < 2; ++i)
                        for (int k = 0; k < 2; ++k) {
                            auto x = x_gamma(bf, j, i, k);
                            if (!x) throw std::runtime_error("imac gamma gate failed");
                            g[idx(j, i, k)] = x->gamma;
                        }
            }
            break;
        }
        case SchemeId::Jash: {
            auto [ch, bf] =
                detail::sample_gated(rng, resamples, sample_x_channels,
                                     [](const ChannelSetX& s) { return jash_beamformers(s); });
            for (int j = 0; j < 2; ++j)
                for (int i = 0; i < 2; ++i)
                    for (int k = 0; k < 2; ++k) {
                        auto v = jash_gamma(ch, bf, j, i, k);
                        if (!v) throw std::runtime_error("jash gamma gate failed");
                        g[idx(j, i, k)] = *v;
                    }
            break;
        }
        case SchemeId::JashModified: {
            auto [ch, bf] =
                detail::sample_gated(rng, resamples, sample_x_channels,
                                     [](const ChannelSetX& s) { return jash_beamformers(s); });
            for (int j = 0; j < 2; ++j)
                for (int i = 0; i < 2; ++i) {
                    auto v = modified_jash_gamma(ch, bf, j, i);
                    if (!v) throw std::runtime_error("modified jash gamma gate failed");
                    g[idx(j, i, 0)] = g[idx(j, i, 1)] = *v;
                }
            break;
        }
        case SchemeId::IbcAlamouti: {
            auto [ch, pre] =
                detail::sample_gated(rng, resamples, sample_cell_channels,
                                     [](const ChannelSetCell& s) { return ibc_precoders(s); });
            for (int j = 0; j < 2; ++j)
                for (int i = 0; i < 2; ++i) {
                    auto v = ibc_gamma(ch, pre, j, i);
                    if (!v) throw std::runtime_error("ibc gamma gate failed");
                    g[idx(j, i, 0)] = g[idx(j, i, 1)] = *v;
                }
            break;
        }
        case SchemeId::IbcDownlinkIa: {
            for (int attempt = 0;; ++attempt) {
                if (attempt >= detail::kMaxResample)
                    throw std::runtime_error("downlink-ia gates failed 64 consecutive draws");
                const ChannelSetCell ch = sample_cell_channels(rng);
                auto d = downlink_ia_build(ch, rng);
                if (!d) {
                    ++resamples;
                    continue;
                }
                for (int j = 0; j < 2; ++j)
                    for (int i = 0; i < 2; ++i)
                        for (int k = 0; k < 2; ++k)
                            g[idx(j, i, k)] = downlink_ia_gamma(*d, j, i, k);
                break;
            }
            break;
        }
    }
    return g;
}

}  // namespace iasim

#endif  // IASIM_SCHEMES_HPP
