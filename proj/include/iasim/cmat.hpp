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

#ifndef IASIM_CMAT_HPP
#define IASIM_CMAT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <optional>
#include <stdexcept>

namespace iasim {

using cplx = std::complex<double>;

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SingularMatrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateEigenvalues : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense complex matrix with inline storage for every shape this library
/// needs (2x2 channels up to 6x6 stacked systems). Row-major, value
/// semantics, no heap. Indices are 0-based.
class CMat {
   public:
    static constexpr int kMaxDim = 6;
    static constexpr int kCapacity = kMaxDim * kMaxDim;

    CMat() : rows_(0), cols_(0) {}
    CMat(int rows, int cols) : rows_(rows), cols_(cols) {
        check_shape(rows, cols);
        data_.fill(cplx{});
    }
    CMat(int rows, int cols, std::initializer_list<cplx> entries) : rows_(rows), cols_(cols) {
        check_shape(rows, cols);
        if (static_cast<int>(entries.size()) != rows * cols)
            throw DimensionMismatch("CMat: entry count does not match shape");
        int k = 0;
        for (const cplx& v : entries) data_[k++] = v;
    }

    static CMat zero(int rows, int cols) { return CMat(rows, cols); }
    static CMat identity(int n) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int size() const { return rows_ * cols_; }

    cplx& operator()(int r, int c) { return data_[r * cols_ + c]; }
    const cplx& operator()(int r, int c) const { return data_[r * cols_ + c]; }

    cplx& at(int r, int c) {
        check_index(r, c);
        return data_[r * cols_ + c];
    }
    const cplx& at(int r, int c) const {
        check_index(r, c);
        return data_[r * cols_ + c];
    }

    CMat operator+(const CMat& o) const {
        require_same_shape(o);
        CMat r(rows_, cols_);
        for (int k = 0; k < size(); ++k) r.data_[k] = data_[k] + o.data_[k];
        return r;
    }
    CMat operator-(const CMat& o) const {
        require_same_shape(o);
        CMat r(rows_, cols_);
        for (int k = 0; k < size(); ++k) r.data_[k] = data_[k] - o.data_[k];
        return r;
    }
    CMat operator-() const {
        CMat r(rows_, cols_);
        for (int k = 0; k < size(); ++k) r.data_[k] = -data_[k];
        return r;
    }
    CMat operator*(const CMat& o) const {
        if (cols_ != o.rows_) throw DimensionMismatch("CMat: inner dimensions differ in product");
        CMat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const cplx a = (*this)(i, k);
                if (a == cplx{}) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }
    CMat operator*(cplx s) const {
        CMat r(rows_, cols_);
        for (int k = 0; k < size(); ++k) r.data_[k] = data_[k] * s;
        return r;
    }
    friend CMat operator*(cplx s, const CMat& m) { return m * s; }

    CMat& operator+=(const CMat& o) { return *this = *this + o; }
    CMat& operator-=(const CMat& o) { return *this = *this - o; }
    CMat& operator*=(cplx s) {
        for (int k = 0; k < size(); ++k) data_[k] *= s;
        return *this;
    }

    CMat transpose() const {
        CMat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }
    CMat conjugate() const {
        CMat r(rows_, cols_);
        for (int k = 0; k < size(); ++k) r.data_[k] = std::conj(data_[k]);
        return r;
    }
    /// Hermitian (conjugate) transpose.
    CMat herm() const {
        CMat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    double frob_norm_sq() const {
        double s = 0.0;
        for (int k = 0; k < size(); ++k) s += std::norm(data_[k]);
        return s;
    }
    double frob_norm() const { return std::sqrt(frob_norm_sq()); }

    cplx trace() const {
        cplx s{};
        for (int i = 0; i < rows_ && i < cols_; ++i) s += (*this)(i, i);
        return s;
    }

    CMat col(int j) const {
        CMat r(rows_, 1);
        for (int i = 0; i < rows_; ++i) r(i, 0) = (*this)(i, j);
        return r;
    }
    CMat row(int i) const {
        CMat r(1, cols_);
        for (int j = 0; j < cols_; ++j) r(0, j) = (*this)(i, j);
        return r;
    }
    void set_col(int j, const CMat& v) {
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = v(i, 0);
    }
    void set_block(int r0, int c0, const CMat& b) {
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }
    CMat block(int r0, int c0, int nr, int nc) const {
        CMat r(nr, nc);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
        return r;
    }

    bool all_finite() const {
        for (int k = 0; k < size(); ++k)
            if (!std::isfinite(data_[k].real()) || !std::isfinite(data_[k].imag())) return false;
        return true;
    }

   private:
    static void check_shape(int rows, int cols) {
        if (rows < 0 || cols < 0 || rows > kMaxDim || cols > kMaxDim)
            throw DimensionMismatch("CMat: shape outside supported range");
    }
    void check_index(int r, int c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
            throw DimensionMismatch("CMat: index out of range");
    }
    void require_same_shape(const CMat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw DimensionMismatch("CMat: shape mismatch");
    }

    int rows_, cols_;
    std::array<cplx, kCapacity> data_;
};

/// Scalar Hermitian inner product <a, b> = a^H b of two column vectors.
inline cplx vdot(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows() || a.cols() != 1 || b.cols() != 1)
        throw DimensionMismatch("vdot: expects equal-length column vectors");
    cplx s{};
    for (int i = 0; i < a.rows(); ++i) s += std::conj(a(i, 0)) * b(i, 0);
    return s;
}

inline CMat kron(const CMat& a, const CMat& b) {
    CMat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return r;
}

/// Column-stacking vectorization: the columns of m, top to bottom.
inline CMat vecm(const CMat& m) {
    CMat r(m.rows() * m.cols(), 1);
    int k = 0;
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i) r(k++, 0) = m(i, j);
    return r;
}

namespace detail {
constexpr double kCondLimit = 1e12;
}

/// Closed-form 2x2 inverse. Fails (nullopt) when the condition-number
/// estimate ||A||_F^2 / |det A| exceeds 1e12; callers treat that as a
/// cue to resample the channel realization.
inline std::optional<CMat> try_inverse2(const CMat& a) {
    if (a.rows() != 2 || a.cols() != 2) throw DimensionMismatch("try_inverse2: expects 2x2");
    const cplx det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double ad = std::abs(det);
    if (ad <= 0.0 || a.frob_norm_sq() / ad >= detail::kCondLimit) return std::nullopt;
    CMat r(2, 2);
    r(0, 0) = a(1, 1) / det;
    r(0, 1) = -a(0, 1) / det;
    r(1, 0) = -a(1, 0) / det;
    r(1, 1) = a(0, 0) / det;
    return r;
}

inline CMat inverse2(const CMat& a) {
    auto r = try_inverse2(a);
    if (!r) throw SingularMatrix("inverse2: matrix is singular or ill-conditioned");
    return *r;
}

/// Gauss-Jordan inverse with partial pivoting for n <= 6.
inline std::optional<CMat> try_inverse(const CMat& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("try_inverse: expects square matrix");
    const int n = a.rows();
    if (n == 2) return try_inverse2(a);
    CMat m = a;
    CMat inv = CMat::identity(n);
    const double scale = a.frob_norm();
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(m(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double v = std::abs(m(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best <= 1e-13 * scale) return std::nullopt;
        if (piv != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(m(piv, j), m(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        }
        const cplx d = m(col, col);
        for (int j = 0; j < n; ++j) {
            m(col, j) /= d;
            inv(col, j) /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const cplx f = m(r, col);
            if (f == cplx{}) continue;
            for (int j = 0; j < n; ++j) {
                m(r, j) -= f * m(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

inline CMat inverse(const CMat& a) {
    auto r = try_inverse(a);
    if (!r) throw SingularMatrix("inverse: matrix is singular or ill-conditioned");
    return *r;
}

/// Determinant by LU with partial pivoting (n <= 6).
inline cplx determinant(const CMat& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("determinant: expects square matrix");
    const int n = a.rows();
    CMat m = a;
    cplx det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(m(col, col));
        for (int r = col + 1; r < n; ++r)
            if (std::abs(m(r, col)) > best) {
                best = std::abs(m(r, col));
                piv = r;
            }
        if (best == 0.0) return cplx{};
        if (piv != col) {
            for (int j = col; j < n; ++j) std::swap(m(piv, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        for (int r = col + 1; r < n; ++r) {
            const cplx f = m(r, col) / m(col, col);
            if (f == cplx{}) continue;
            for (int j = col; j < n; ++j) m(r, j) -= f * m(col, j);
        }
    }
    return det;
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.
/// Ascending order. Input must be Hermitian (not checked beyond shape).
inline std::array<double, CMat::kMaxDim> hermitian_eigenvalues(const CMat& h, int* count = nullptr) {
    if (h.rows() != h.cols()) throw DimensionMismatch("hermitian_eigenvalues: expects square");
    const int n = h.rows();
    CMat g = h;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(g(p, q));
        if (off <= 1e-30 * (1.0 + g.frob_norm_sq())) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = g(p, q);
                const double abs_apq = std::abs(apq);
                if (abs_apq < 1e-300) continue;
                const double app = g(p, p).real();
                const double aqq = g(q, q).real();
                const double tau = (aqq - app) / (2.0 * abs_apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx phase = apq / abs_apq;
                // Rotation columns: [c, s*phase; -s*conj(phase), c]
                for (int k = 0; k < n; ++k) {
                    const cplx gkp = g(k, p), gkq = g(k, q);
                    g(k, p) = c * gkp - s * std::conj(phase) * gkq;
                    g(k, q) = s * phase * gkp + c * gkq;
                }
                for (int k = 0; k < n; ++k) {
                    const cplx gpk = g(p, k), gqk = g(q, k);
                    g(p, k) = c * gpk - s * phase * gqk;
                    g(q, k) = s * std::conj(phase) * gpk + c * gqk;
                }
            }
        }
    }
    std::array<double, CMat::kMaxDim> ev{};
    for (int i = 0; i < n; ++i) ev[i] = g(i, i).real();
    std::sort(ev.begin(), ev.begin() + n);
    if (count) *count = n;
    return ev;
}

/// Smallest singular value of m (any supported shape).
inline double svd_smallest(const CMat& m) {
    const bool wide = m.cols() > m.rows();
    const CMat g = wide ? m * m.herm() : m.herm() * m;
    int n = 0;
    auto ev = hermitian_eigenvalues(g, &n);
    return std::sqrt(std::max(0.0, ev[0]));
}

struct Eig2 {
    cplx lambda1, lambda2;  // |lambda1| >= |lambda2|
    CMat u1, u2;            // unit-norm 2x1 eigenvectors
    cplx kappa;             // lambda1 / lambda2
};

namespace detail {
inline CMat eigvec2(const CMat& a, cplx lambda) {
    // (A - lambda I) u = 0; two algebraic null-vector candidates, keep the
    // better-conditioned one.
    CMat c1(2, 1, {a(0, 1), lambda - a(0, 0)});
    CMat c2(2, 1, {lambda - a(1, 1), a(1, 0)});
    CMat u = c1.frob_norm_sq() >= c2.frob_norm_sq() ? c1 : c2;
    // Normalize and fix the phase: largest-magnitude entry real positive,
    // so downstream beamformers are deterministic functions of the channel.
    const int imax = std::norm(u(0, 0)) >= std::norm(u(1, 0)) ? 0 : 1;
    const cplx piv = u(imax, 0);
    u *= std::conj(piv) / (std::abs(piv) * u.frob_norm());
    return u;
}
}  // namespace detail

/// Closed-form eigendecomposition of a 2x2 matrix with distinct eigenvalues.
/// Ordering: |lambda1| >= |lambda2|, ties broken by larger real part then
/// larger imaginary part. Fails when |lambda1-lambda2| <= 1e-12 ||A||_F.
inline std::optional<Eig2> try_eig2x2(const CMat& a) {
    if (a.rows() != 2 || a.cols() != 2) throw DimensionMismatch("eig2x2: expects 2x2");
    const cplx tr = a(0, 0) + a(1, 1);
    const cplx det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    cplx l1 = 0.5 * (tr + disc);
    cplx l2 = 0.5 * (tr - disc);
    const double a1 = std::abs(l1), a2 = std::abs(l2);
    bool swap_them = a1 < a2;
    if (a1 == a2) {
        if (l1.real() != l2.real())
            swap_them = l1.real() < l2.real();
        else
            swap_them = l1.imag() < l2.imag();
    }
    if (swap_them) std::swap(l1, l2);
    if (std::abs(l1 - l2) <= 1e-12 * a.frob_norm()) return std::nullopt;
    Eig2 e;
    e.lambda1 = l1;
    e.lambda2 = l2;
    e.u1 = detail::eigvec2(a, l1);
    e.u2 = detail::eigvec2(a, l2);
    e.kappa = l1 / l2;
    return e;
}

inline Eig2 eig2x2(const CMat& a) {
    auto e = try_eig2x2(a);
    if (!e) throw DegenerateEigenvalues("eig2x2: eigenvalue gap below tolerance");
    return *e;
}

/// The rate-one orthogonal 2x2 block [[a, b], [-b*, a*]].
inline CMat alamouti_embed(cplx a, cplx b) {
    return CMat(2, 2, {a, b, -std::conj(b), std::conj(a)});
}

/// [[a, b], [b*, -a*]]: an Alamouti block with its columns exchanged.
inline CMat swapped_alamouti_embed(cplx a, cplx b) {
    return CMat(2, 2, {a, b, std::conj(b), -std::conj(a)});
}

inline bool is_alamouti(const CMat& m, double tol) {
    if (m.rows() != 2 || m.cols() != 2) throw DimensionMismatch("is_alamouti: expects 2x2");
    return std::abs(m(1, 1) - std::conj(m(0, 0))) <= tol &&
           std::abs(m(1, 0) + std::conj(m(0, 1))) <= tol;
}

inline bool is_swapped_alamouti(const CMat& m, double tol) {
    if (m.rows() != 2 || m.cols() != 2) throw DimensionMismatch("is_swapped_alamouti: expects 2x2");
    return std::abs(m(1, 0) - std::conj(m(0, 1))) <= tol &&
           std::abs(m(1, 1) + std::conj(m(0, 0))) <= tol;
}

}  // namespace iasim

#endif  // IASIM_CMAT_HPP
