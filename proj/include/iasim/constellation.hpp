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

#ifndef IASIM_CONSTELLATION_HPP
#define IASIM_CONSTELLATION_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace iasim {

enum class ConstellationKind { BPSK, QPSK, PSK16, QAM16 };

inline bool is_psk(ConstellationKind k) { return k != ConstellationKind::QAM16; }

inline const char* constellation_name(ConstellationKind k) {
    switch (k) {
        case ConstellationKind::BPSK: return "BPSK";
        case ConstellationKind::QPSK: return "QPSK";
        case ConstellationKind::PSK16: return "PSK16";
        case ConstellationKind::QAM16: return "QAM16";
    }
    return "?";
}

inline ConstellationKind constellation_from_name(const std::string& s) {
    if (s == "BPSK") return ConstellationKind::BPSK;
    if (s == "QPSK") return ConstellationKind::QPSK;
    if (s == "PSK16" || s == "16PSK") return ConstellationKind::PSK16;
    if (s == "QAM16" || s == "16QAM") return ConstellationKind::QAM16;
    throw std::invalid_argument("unknown constellation name: " + s);
}

/// Gray-labeled constellation with unit average energy. points[label] is
/// the point whose bit pattern equals `label` (MSB first), so the bit
/// errors between two labels are popcount(label ^ label').
struct Constellation {
    ConstellationKind kind;
    int bits_per_symbol;
    std::vector<std::complex<double>> points;

    std::size_t size() const { return points.size(); }
};

namespace detail {
// 2-bit Gray-coded 4-PAM axis used by QAM16: 00 01 11 10 -> -3 -1 +1 +3.
inline double gray_pam4(unsigned b) {
    static constexpr double level[4] = {-3.0, -1.0, +3.0, +1.0};
    return level[b & 3u];
}
}  // namespace detail

inline Constellation make_constellation(ConstellationKind kind) {
    Constellation c;
    c.kind = kind;
    switch (kind) {
        case ConstellationKind::BPSK:
            c.bits_per_symbol = 1;
            c.points = {{+1.0, 0.0}, {-1.0, 0.0}};  // bit 0 -> +1
            break;
        case ConstellationKind::QPSK: {
            c.bits_per_symbol = 2;
            const double a = 1.0 / std::sqrt(2.0);
            c.points.resize(4);
            for (unsigned label = 0; label < 4; ++label) {
                const double re = (label & 2u) ? -a : a;
                const double im = (label & 1u) ? -a : a;
                c.points[label] = {re, im};
            }
            break;
        }
        case ConstellationKind::PSK16: {
            c.bits_per_symbol = 4;
            c.points.resize(16);
            for (unsigned k = 0; k < 16; ++k) {
                const unsigned gray = k ^ (k >> 1);
                const double t = 2.0 * M_PI * k / 16.0;
                c.points[gray] = {std::cos(t), std::sin(t)};
            }
            break;
        }
        case ConstellationKind::QAM16: {
            c.bits_per_symbol = 4;
            const double scale = 1.0 / std::sqrt(10.0);
            c.points.resize(16);
            for (unsigned label = 0; label < 16; ++label) {
                const double re = detail::gray_pam4(label >> 2);
                const double im = detail::gray_pam4(label & 3u);
                c.points[label] = {re * scale, im * scale};
            }
            break;
        }
    }
    return c;
}

/// Label bits -> transmit symbol with E|s|^2 = power.
inline std::complex<double> modulate_label(const Constellation& c, unsigned label, double power) {
    return c.points[label] * std::sqrt(power);
}

/// Minimum-Euclidean-distance decision against the power-scaled points.
inline unsigned demodulate_nearest(const Constellation& c, std::complex<double> z, double power) {
    const double amp = std::sqrt(power);
    unsigned best = 0;
    double best_d = std::norm(z - amp * c.points[0]);
    for (unsigned l = 1; l < c.points.size(); ++l) {
        const double d = std::norm(z - amp * c.points[l]);
        if (d < best_d) {
            best_d = d;
            best = l;
        }
    }
    return best;
}

/// Nearest point to z among g * points, i.e. the decision for a scalar
/// system z = g * s + w with known real gain g = gain_times_amp.
inline unsigned nearest_label_scaled(const Constellation& c, std::complex<double> z,
                                     std::complex<double> gain_times_amp) {
    unsigned best = 0;
    double best_d = std::norm(z - gain_times_amp * c.points[0]);
    for (unsigned l = 1; l < c.points.size(); ++l) {
        const double d = std::norm(z - gain_times_amp * c.points[l]);
        if (d < best_d) {
            best_d = d;
            best = l;
        }
    }
    return best;
}

}  // namespace iasim

#endif  // IASIM_CONSTELLATION_HPP
