// algebra.hpp — Complex 3x3 Hermitian eigendecomposition and the Gell-Mann
// slot structure shared by all model families.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "tmono/errors.hpp"

namespace tmono {

using Complex = std::complex<double>;
using Matrix3 = Eigen::Matrix3cd;
using Vector3 = Eigen::Vector3cd;

/// A point (qx, qy, qz, qw) in the 4D coefficient space of the chiral
/// Hamiltonian family.
struct QVector {
    double x{0}, y{0}, z{0}, w{0};

    double norm() const { return std::sqrt(x * x + y * y + z * z + w * w); }

    double operator[](int i) const {
        switch (i) {
            case 0: return x;
            case 1: return y;
            case 2: return z;
            default: return w;
        }
    }
};

/// The chiral 3x3 Hamiltonian q·λ with λ = (λ1, λ2, λ6, λ7*):
///   [ 0        qx - i qy   0        ]
///   [ qx + i qy    0       qz + i qw]
///   [ 0        qz - i qw   0        ]
inline Matrix3 gellmann_compose(const QVector& q) {
    Matrix3 h = Matrix3::Zero();
    const Complex a(q.x, -q.y);
    const Complex b(q.z, q.w);
    h(0, 1) = a;
    h(1, 0) = std::conj(a);
    h(1, 2) = b;
    h(2, 1) = std::conj(b);
    return h;
}

inline double matrix_scale(const Matrix3& h) {
    double s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s = std::max(s, std::abs(h(i, j)));
    return s;
}

inline bool is_hermitian(const Matrix3& h, double rtol = 1e-12) {
    const double scale = matrix_scale(h);
    const double tol = rtol * std::max(scale, 1.0);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            if (std::abs(h(i, j) - std::conj(h(j, i))) > tol) return false;
    return true;
}

/// Sorted spectral decomposition of a 3x3 Hermitian matrix.
/// values ascending; vectors column-aligned with values.
struct EigenSystem3 {
    std::array<double, 3> values{};
    Matrix3 vectors = Matrix3::Identity();
    bool degenerate = false;  // two eigenvalues within 1e-9 * ||H||
};

namespace detail {

// Null vector of a rank-2 matrix via the formal (bilinear) cross product of
// two rows: (M v)_i = sum_j M_ij v_j, so v must annihilate each row without
// conjugation.
inline Vector3 row_cross(const Matrix3& m, int r1, int r2) {
    Vector3 a = m.row(r1), b = m.row(r2);
    Vector3 v;
    v(0) = a(1) * b(2) - a(2) * b(1);
    v(1) = a(2) * b(0) - a(0) * b(2);
    v(2) = a(0) * b(1) - a(1) * b(0);
    return v;
}

inline void fix_phase(Vector3& v) {
    int imax = 0;
    double best = 0;
    for (int i = 0; i < 3; ++i)
        if (std::abs(v(i)) > best) { best = std::abs(v(i)); imax = i; }
    if (best > 0) v *= std::conj(v(imax)) / std::abs(v(imax));
    // scrub -0.0 / residual imaginary dust on the pivot
    v(imax) = Complex(std::abs(v(imax)), 0.0);
}

}  // namespace detail

/// Closed-form eigendecomposition of the cubic characteristic polynomial with
/// one inverse-iteration refinement per vector. Deterministic for identical
/// input, which keeps nested finite differences reproducible.
inline EigenSystem3 eigh3(const Matrix3& h_in) {
    if (!is_hermitian(h_in)) throw NonHermitianInput("eigh3: matrix is not Hermitian within tolerance");

    // symmetrize to kill roundoff-level asymmetry
    Matrix3 h = 0.5 * (h_in + h_in.adjoint().eval());
    const double scale = matrix_scale(h);

    EigenSystem3 out;
    if (scale == 0.0) return out;  // zero matrix: values 0, identity basis

    const double shift = h.trace().real() / 3.0;
    Matrix3 b = h - shift * Matrix3::Identity();

    const double p1 = std::norm(b(0, 1)) + std::norm(b(0, 2)) + std::norm(b(1, 2));
    const double p2 = b(0, 0).real() * b(0, 0).real() + b(1, 1).real() * b(1, 1).real() +
                      b(2, 2).real() * b(2, 2).real() + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);

    if (p <= 1e-15 * scale) {
        out.values = {shift, shift, shift};
        out.degenerate = true;
        return out;
    }

    const Matrix3 bn = b / p;
    double r = bn.determinant().real() / 2.0;
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;

    std::array<double, 3> ev{};
    for (int k = 0; k < 3; ++k)
        ev[k] = shift + 2.0 * p * std::cos(phi + 2.0 * M_PI * k / 3.0);
    std::sort(ev.begin(), ev.end());

    for (int k = 0; k < 3; ++k) {
        Matrix3 m = h - ev[k] * Matrix3::Identity();
        Vector3 v = Vector3::Zero();
        double best = -1;
        for (auto [r1, r2] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
            Vector3 c = detail::row_cross(m, r1, r2);
            if (c.norm() > best) { best = c.norm(); v = c; }
        }
        if (best <= 1e-13 * scale * scale) {
            // (near-)degenerate eigenspace: fall back to a canonical direction
            v = Vector3::Unit(k);
        }
        v.normalize();

        // one inverse-iteration step against a slightly shifted pivot
        const double eps = 1e-12 * scale;
        Eigen::FullPivLU<Matrix3> lu(h - (ev[k] + eps) * Matrix3::Identity());
        if (lu.isInvertible()) {
            Vector3 w = lu.solve(v);
            const double wn = w.norm();
            if (wn > 0 && std::isfinite(wn)) v = w / wn;
        }

        // Rayleigh-quotient polish of the eigenvalue
        ev[k] = (v.adjoint() * h * v)(0).real();
        out.vectors.col(k) = v;
    }
    // keep (value, vector) pairs aligned if the polish reordered anything
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int c) { return ev[a] < ev[c]; });
    {
        Matrix3 sorted;
        std::array<double, 3> sv{};
        for (int k = 0; k < 3; ++k) {
            sv[k] = ev[order[k]];
            sorted.col(k) = out.vectors.col(order[k]);
        }
        ev = sv;
        out.vectors = sorted;
    }
    out.values = ev;
    // flag from the polished values: the trigonometric roots lose ~sqrt(eps)
    // of accuracy exactly where eigenvalues collide
    out.degenerate = (ev[1] - ev[0] < 1e-9 * scale) || (ev[2] - ev[1] < 1e-9 * scale);

    // re-orthonormalize (matters only for near-degenerate pairs)
    for (int k = 0; k < 3; ++k) {
        Vector3 v = out.vectors.col(k);
        for (int j = 0; j < k; ++j) {
            Vector3 u = out.vectors.col(j);
            v -= u * (u.adjoint() * v)(0);
        }
        v.normalize();
        detail::fix_phase(v);
        out.vectors.col(k) = v;
    }
    return out;
}

}  // namespace tmono
