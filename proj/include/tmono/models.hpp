// models.hpp — The three Hamiltonian families over the 4D phase space, plus
// the charge-basis circuit Hamiltonian used as a truncation oracle.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <variant>

#include <Eigen/Dense>

#include "tmono/algebra.hpp"
#include "tmono/errors.hpp"

namespace tmono {

enum class Axis : int { X = 0, Y = 1, Z = 2, W = 3 };

constexpr std::array<Axis, 4> kAxes{Axis::X, Axis::Y, Axis::Z, Axis::W};

inline const char* axis_name(Axis a) {
    switch (a) {
        case Axis::X: return "x";
        case Axis::Y: return "y";
        case Axis::Z: return "z";
        default: return "w";
    }
}

/// A point (phi_x, phi_y, phi_z, phi_w) in the 4D synthetic phase space,
/// in radians. All model Hamiltonians are 2pi-periodic in every component.
struct PhasePoint {
    double x{0}, y{0}, z{0}, w{0};

    double operator[](int i) const {
        switch (i) {
            case 0: return x;
            case 1: return y;
            case 2: return z;
            default: return w;
        }
    }
    double& operator[](int i) {
        switch (i) {
            case 0: return x;
            case 1: return y;
            case 2: return z;
            default: return w;
        }
    }
    double operator[](Axis a) const { return (*this)[static_cast<int>(a)]; }

    PhasePoint shifted(Axis a, double delta) const {
        PhasePoint p = *this;
        p[static_cast<int>(a)] += delta;
        return p;
    }
};

// ---------------------------------------------------------------------------
// Canonical model: identity chart q = phi.

struct CanonicalParams {};

// ---------------------------------------------------------------------------
// Superconducting-circuit model.

/// Josephson energies of the two junction triplets, the charging energy and
/// the island offset charges. The three-level chiral regime needs
/// ng_l = ng_r = 1/2.
struct CircuitParams {
    std::array<double, 3> ej_l{1, 1, 1};
    std::array<double, 3> ej_r{1, 1, 1};
    double e_c{1};
    double ng_l{0.5};
    double ng_r{0.5};

    void validate() const {
        for (double e : ej_l)
            if (!(e > 0)) throw Error("CircuitParams: left Josephson energies must be > 0");
        for (double e : ej_r)
            if (!(e > 0)) throw Error("CircuitParams: right Josephson energies must be > 0");
        if (!(e_c > 0)) throw Error("CircuitParams: charging energy must be > 0");
    }
    bool chiral() const { return ng_l == 0.5 && ng_r == 0.5; }
};

/// f_L = EJL1 + EJL2 e^{i phi_x} + EJL3 e^{i(phi_x+phi_y)},
/// f_R = EJR1 + EJR2 e^{i phi_z} + EJR3 e^{i(phi_z+phi_w)}.
inline std::pair<Complex, Complex> circuit_couplings(const CircuitParams& p, const PhasePoint& pt) {
    using namespace std::complex_literals;
    const Complex fl = p.ej_l[0] + p.ej_l[1] * std::exp(1i * pt.x) + p.ej_l[2] * std::exp(1i * (pt.x + pt.y));
    const Complex fr = p.ej_r[0] + p.ej_r[1] * std::exp(1i * pt.z) + p.ej_r[2] * std::exp(1i * (pt.z + pt.w));
    return {fl, fr};
}

/// Three-level Hamiltonian in the ordered charge basis (|L>, |0>, |R>):
/// charging diagonal plus -f_L |L><0| - f_R |0><R| + h.c.
inline Matrix3 circuit_low_energy_h(const CircuitParams& p, const PhasePoint& pt) {
    auto [fl, fr] = circuit_couplings(p, pt);
    Matrix3 h = Matrix3::Zero();
    h(0, 0) = p.e_c / 3.0 * (1.0 - 2.0 * p.ng_l);
    h(2, 2) = p.e_c / 3.0 * (1.0 - 2.0 * p.ng_r);
    h(0, 1) = -fl;
    h(1, 0) = -std::conj(fl);
    h(1, 2) = -fr;
    h(2, 1) = -std::conj(fr);
    return h;
}

/// Full charge-basis circuit Hamiltonian with n_L, n_R in [-cutoff, cutoff].
/// Diagonal: E_C/3 [(n_L-ng_L)^2 + (n_R-ng_R)^2] (equal junction
/// capacitances, diagonal inverse-capacitance matrix). Hopping: raising n_L
/// carries -f_L, lowering n_R carries -f_R, matching the three-level block
/// <L|H|0> = -f_L, <0|H|R> = -f_R exactly.
inline Eigen::MatrixXcd circuit_full_h(const CircuitParams& p, const PhasePoint& pt, int cutoff) {
    if (cutoff < 1) throw CutoffTooSmall("circuit_full_h: cutoff must be >= 1");
    auto [fl, fr] = circuit_couplings(p, pt);

    const int n = 2 * cutoff + 1;
    const int dim = n * n;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    auto idx = [&](int nl, int nr) { return (nl + cutoff) * n + (nr + cutoff); };

    for (int nl = -cutoff; nl <= cutoff; ++nl) {
        for (int nr = -cutoff; nr <= cutoff; ++nr) {
            const int i = idx(nl, nr);
            const double dl = nl - p.ng_l, dr = nr - p.ng_r;
            h(i, i) = p.e_c / 3.0 * (dl * dl + dr * dr);
            if (nl + 1 <= cutoff) {
                h(idx(nl + 1, nr), i) += -fl;
                h(i, idx(nl + 1, nr)) += -std::conj(fl);
            }
            if (nr - 1 >= -cutoff) {
                h(idx(nl, nr - 1), i) += -fr;
                h(i, idx(nl, nr - 1)) += -std::conj(fr);
            }
        }
    }
    return h;
}

// ---------------------------------------------------------------------------
// Triple-dot model.

/// Direct dot-dot couplings v_L, v_R, the four non-local (crossed-Andreev)
/// couplings Gamma_j and the dot energies. `main_text_signs` switches to the
/// published main-text sign of the Gamma_y / Gamma_w terms, which is
/// inconsistent with the stated degeneracy positions; kept for comparison.
struct TripleDotParams {
    double v_l{1}, v_r{1};
    double gamma_x{1}, gamma_y{1}, gamma_z{1}, gamma_w{1};
    std::array<double, 3> eps{0, 0, 0};
    bool main_text_signs{false};

    void validate() const {
        for (double g : {gamma_x, gamma_y, gamma_z, gamma_w})
            if (!(g > 0)) throw Error("TripleDotParams: non-local couplings must be > 0");
    }
    bool chiral() const { return eps[0] == eps[1] && eps[1] == eps[2]; }
};

/// f_LM = v_L - Gx e^{-i phi_x} - Gy e^{-i phi_y},
/// f_MR = v_R - Gz e^{ i phi_z} - Gw e^{ i phi_w}.
inline std::pair<Complex, Complex> tripledot_couplings(const TripleDotParams& p, const PhasePoint& pt) {
    using namespace std::complex_literals;
    const double sy = p.main_text_signs ? +1.0 : -1.0;
    const Complex flm = p.v_l - p.gamma_x * std::exp(-1i * pt.x) + sy * p.gamma_y * std::exp(-1i * pt.y);
    const Complex fmr = p.v_r - p.gamma_z * std::exp(1i * pt.z) + sy * p.gamma_w * std::exp(1i * pt.w);
    return {flm, fmr};
}

/// Effective single-particle Hamiltonian in the basis (|L>, |M>, |R>), with
/// the uniform part of the dot energies removed: f_LM |M><L| + f_MR |R><M| + h.c.
inline Matrix3 tripledot_h(const TripleDotParams& p, const PhasePoint& pt) {
    auto [flm, fmr] = tripledot_couplings(p, pt);
    const double mean = (p.eps[0] + p.eps[1] + p.eps[2]) / 3.0;
    Matrix3 h = Matrix3::Zero();
    h(0, 0) = p.eps[0] - mean;
    h(1, 1) = p.eps[1] - mean;
    h(2, 2) = p.eps[2] - mean;
    h(1, 0) = flm;
    h(0, 1) = std::conj(flm);
    h(2, 1) = fmr;
    h(1, 2) = std::conj(fmr);
    return h;
}

/// Linearized q-chart around the triple-dot degeneracy labeled (s1, s2), for
/// symmetric couplings v = v_L = v_R and Gamma = Gamma_j with 0 < v < 2 Gamma:
///   qx = s1 G sqrt(1-(v/2G)^2) (dx - dy),  qy = (v/2)(dx + dy),
///   qz = s2 G sqrt(1-(v/2G)^2) (dz - dw),  qw = (v/2)(dz + dw).
/// The s-independent imaginary parts follow from differentiating f_LM, f_MR
/// with the corrected signs; see the spectrum- and curvature-consistency tests.
inline QVector linearized_q(const TripleDotParams& p, int s1, int s2, const PhasePoint& dpt) {
    const double v = p.v_l;
    const double g = p.gamma_x;
    if (!(v > 0.0) || !(v < 2.0 * g))
        throw OutsideTopologicalRegion("linearized_q: requires 0 < v < 2*Gamma");
    const double a = g * std::sqrt(1.0 - (v / (2.0 * g)) * (v / (2.0 * g)));
    const double b = v / 2.0;
    return QVector{s1 * a * (dpt.x - dpt.y), b * (dpt.x + dpt.y),
                   s2 * a * (dpt.z - dpt.w), b * (dpt.z + dpt.w)};
}

// ---------------------------------------------------------------------------
// Unified model.

/// Tagged union over the three families; every variant exposes
/// hamiltonian(pt) and the pair of chiral couplings (f_left, f_right).
class Model {
public:
    using Variant = std::variant<CanonicalParams, CircuitParams, TripleDotParams>;

    Model(CanonicalParams p) : v_(p) {}
    Model(CircuitParams p) : v_(p) { p.validate(); }
    Model(TripleDotParams p) : v_(p) { p.validate(); }

    Matrix3 hamiltonian(const PhasePoint& pt) const {
        return std::visit(
            [&](const auto& p) -> Matrix3 {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, CanonicalParams>)
                    return gellmann_compose(QVector{pt.x, pt.y, pt.z, pt.w});
                else if constexpr (std::is_same_v<T, CircuitParams>)
                    return circuit_low_energy_h(p, pt);
                else
                    return tripledot_h(p, pt);
            },
            v_);
    }

    /// (f_left, f_right) whose simultaneous zeros are the triple degeneracies.
    std::pair<Complex, Complex> couplings(const PhasePoint& pt) const {
        return std::visit(
            [&](const auto& p) -> std::pair<Complex, Complex> {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, CanonicalParams>)
                    return {Complex(pt.x, -pt.y), Complex(pt.z, pt.w)};
                else if constexpr (std::is_same_v<T, CircuitParams>)
                    return circuit_couplings(p, pt);
                else
                    return tripledot_couplings(p, pt);
            },
            v_);
    }

    /// Scale of the couplings, used to make residual tolerances relative.
    double coupling_scale() const {
        return std::visit(
            [&](const auto& p) -> double {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, CanonicalParams>)
                    return 1.0;
                else if constexpr (std::is_same_v<T, CircuitParams>) {
                    double s = 0;
                    for (double e : p.ej_l) s = std::max(s, e);
                    for (double e : p.ej_r) s = std::max(s, e);
                    return s;
                } else {
                    double s = std::max(std::abs(p.v_l), std::abs(p.v_r));
                    for (double g : {p.gamma_x, p.gamma_y, p.gamma_z, p.gamma_w})
                        s = std::max(s, g);
                    return s;
                }
            },
            v_);
    }

    bool is_canonical() const { return std::holds_alternative<CanonicalParams>(v_); }
    bool is_circuit() const { return std::holds_alternative<CircuitParams>(v_); }
    bool is_tripledot() const { return std::holds_alternative<TripleDotParams>(v_); }

    const CircuitParams& circuit() const { return std::get<CircuitParams>(v_); }
    const TripleDotParams& tripledot() const { return std::get<TripleDotParams>(v_); }

private:
    Variant v_;
};

}  // namespace tmono
