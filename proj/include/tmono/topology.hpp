// topology.hpp — Degeneracy location, region classification, and the
// Dixmier-Douady charge by closed-surface integration of the tensor Berry
// curvature (face quadrature, face Monte-Carlo, hypersphere Monte-Carlo).

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "tmono/errors.hpp"
#include "tmono/geometry.hpp"
#include "tmono/models.hpp"
#include "tmono/rng.hpp"
#include "tmono/sweep.hpp"

namespace tmono {

struct DegeneratePoint {
    PhasePoint point;
    int s1{0}, s2{0};      // labels in {-1, +1}
    double residual{0};    // max(|f_left|, |f_right|), energy units
};

enum class ChargeMethod { CubeQuadrature, CubeMonteCarlo, SphereMonteCarlo };

struct ChargeResult {
    double q_value{0};
    long q_rounded{0};
    double error_estimate{0};
    ChargeMethod method{ChargeMethod::CubeQuadrature};
    std::int64_t evaluations{0};
    double surface_parameter{0};  // cube half-width a or sphere radius r
};

enum class RegionTag { Topological, Gapped, Critical };

struct RegionClass {
    RegionTag tag{RegionTag::Gapped};
    double margin{0};  // signed distance to the triangle-inequality boundary
};

inline double wrap_angle(double t) {
    t = std::remainder(t, 2.0 * M_PI);
    if (t <= -M_PI) t += 2.0 * M_PI;
    return t;
}

/// All (theta1, theta2) in (-pi, pi]^2 with a0 + a1 e^{i theta1} + a2 e^{i theta2} = 0.
/// Two solutions inside the triangle-inequality region, one on its boundary,
/// none outside (empty list signals a gapped side).
inline std::vector<std::array<double, 2>> solve_phasor_zero(double a0, double a1, double a2) {
    if (!(a0 > 0) || !(a1 > 0) || !(a2 > 0))
        throw Error("solve_phasor_zero: amplitudes must be positive");

    const double c1 = (a2 * a2 - a0 * a0 - a1 * a1) / (2.0 * a0 * a1);
    const double c2 = (a1 * a1 - a0 * a0 - a2 * a2) / (2.0 * a0 * a2);
    if (std::abs(c1) > 1.0 + 1e-12) return {};

    if (std::abs(c1) >= 1.0 - 1e-12) {
        // boundary: the three phasors are collinear
        const double t1 = c1 > 0 ? 0.0 : M_PI;
        const double t2 = std::clamp(c2, -1.0, 1.0) > 0 ? 0.0 : M_PI;
        return {{t1, t2}};
    }

    const double t1 = std::acos(c1);
    const double s2 = -(a1 / a2) * std::sin(t1);
    const double t2 = std::atan2(s2, c2);
    return {{t1, t2}, {-t1, -t2}};
}

namespace detail {

/// Triangle-inequality classification of one (a0; a1, a2) coupling triple:
/// topological iff a1 + a2 > a0 > |a1 - a2|.
inline RegionClass classify_triple(double a0, double a1, double a2) {
    const double margin = std::min(a1 + a2 - a0, a0 - std::abs(a1 - a2));
    RegionClass rc;
    rc.margin = margin;
    if (std::abs(margin) <= 1e-12)
        rc.tag = RegionTag::Critical;
    else
        rc.tag = margin > 0 ? RegionTag::Topological : RegionTag::Gapped;
    return rc;
}

struct CouplingTriples {
    std::array<double, 3> left{}, right{};
};

inline CouplingTriples coupling_triples(const Model& m) {
    if (m.is_circuit()) {
        const auto& p = m.circuit();
        return {{p.ej_l[0], p.ej_l[1], p.ej_l[2]}, {p.ej_r[0], p.ej_r[1], p.ej_r[2]}};
    }
    if (m.is_tripledot()) {
        const auto& p = m.tripledot();
        return {{p.v_l, p.gamma_x, p.gamma_y}, {p.v_r, p.gamma_z, p.gamma_w}};
    }
    throw NotChiralRegime("coupling triples are defined for the circuit and triple-dot models");
}

}  // namespace detail

/// (left, right) phase-diagram classification of the model's two coupling
/// triples against the triangle inequality.
inline std::pair<RegionClass, RegionClass> classify_region(const Model& m) {
    const auto t = detail::coupling_triples(m);
    return {detail::classify_triple(t.left[0], t.left[1], t.left[2]),
            detail::classify_triple(t.right[0], t.right[1], t.right[2])};
}

/// All triply degenerate points of a chiral circuit or triple-dot model:
/// simultaneous zeros of (f_left, f_right), 0 or 4 of them, each labeled by
/// (s1, s2) = (sign sin phi_x, sign sin phi_z).
inline std::vector<DegeneratePoint> locate_monopoles(const Model& m) {
    if (m.is_circuit() && !m.circuit().chiral())
        throw NotChiralRegime("locate_monopoles: circuit requires ng_l = ng_r = 1/2");
    if (m.is_tripledot() && !m.tripledot().chiral())
        throw NotChiralRegime("locate_monopoles: triple dot requires equal dot energies");
    const auto t = detail::coupling_triples(m);  // rejects the canonical model

    const auto left = solve_phasor_zero(t.left[0], t.left[1], t.left[2]);
    const auto right = solve_phasor_zero(t.right[0], t.right[1], t.right[2]);
    if (left.size() != 2 || right.size() != 2) return {};  // gapped or critical side

    // map phasor angles into the model's phase chart
    const bool mts = m.is_tripledot() && m.tripledot().main_text_signs;
    auto chart_left = [&](double t1, double t2) -> std::pair<double, double> {
        if (m.is_circuit()) return {t1, t2 - t1};  // theta1 = phi_x, theta2 = phi_x + phi_y
        if (mts) return {wrap_angle(M_PI - t1), wrap_angle(-t2)};
        return {wrap_angle(M_PI - t1), wrap_angle(M_PI - t2)};
    };
    auto chart_right = [&](double t1, double t2) -> std::pair<double, double> {
        if (m.is_circuit()) return {t1, t2 - t1};
        if (mts) return {wrap_angle(t1 - M_PI), wrap_angle(t2)};
        return {wrap_angle(t1 - M_PI), wrap_angle(t2 - M_PI)};
    };

    std::vector<DegeneratePoint> out;
    for (const auto& l : left) {
        for (const auto& r : right) {
            const auto [px, py] = chart_left(l[0], l[1]);
            const auto [pz, pw] = chart_right(r[0], r[1]);
            DegeneratePoint d;
            d.point = PhasePoint{px, py, pz, pw};
            d.s1 = std::sin(px) >= 0 ? +1 : -1;
            d.s2 = std::sin(pz) >= 0 ? +1 : -1;
            const auto [fl, fr] = m.couplings(d.point);
            d.residual = std::max(std::abs(fl), std::abs(fr));
            out.push_back(d);
        }
    }
    return out;
}

struct ChargeOptions {
    double h_outer{1e-3};
    double h_inner{1e-3};
    GeometryOptions geom{};
    int jobs{1};
};

namespace detail {

/// The four face-pair terms of the hypercube surface integral: the curvature
/// component H_{c0 c1 c2} integrated over the pair of faces normal to `face`,
/// with the orientation sign of the 3-form restriction.
struct FaceTerm {
    double sign;
    Axis c0, c1, c2, face;
};

inline constexpr std::array<FaceTerm, 4> kFaceTerms{{
    {+1.0, Axis::X, Axis::Y, Axis::Z, Axis::W},
    {-1.0, Axis::X, Axis::Y, Axis::W, Axis::Z},
    {+1.0, Axis::X, Axis::Z, Axis::W, Axis::Y},
    {-1.0, Axis::Y, Axis::Z, Axis::W, Axis::X},
}};

/// Signed face-pair difference sign_t * [H_t(+face) - H_t(-face)] at offsets
/// (u0, u1, u2) along the in-face axes.
inline double face_pair_sample(const Model& m, const PhasePoint& center, double a,
                               const FaceTerm& t, double u0, double u1, double u2,
                               const ChargeOptions& opt) {
    auto value = [&](double face_offset) {
        const PhasePoint pt = center.shifted(t.face, face_offset)
                                  .shifted(t.c0, u0)
                                  .shifted(t.c1, u1)
                                  .shifted(t.c2, u2);
        return tensor_curvature(m, pt, t.c0, t.c1, t.c2, opt.h_outer, opt.h_inner, opt.geom);
    };
    return t.sign * (value(+a) - value(-a));
}

// Allowance for the fixed finite-difference stencil bias, which Richardson
// extrapolation over the quadrature resolution cannot see.
inline constexpr double kStencilBias = 1e-4;

inline ChargeResult finalize_charge(ChargeResult r) {
    r.q_rounded = std::lround(r.q_value);
    if (std::abs(r.q_value - static_cast<double>(r.q_rounded)) > 3.0 * r.error_estimate)
        throw NotConverged("charge integral did not converge to an integer within 3 sigma");
    return r;
}

}  // namespace detail

/// Dixmier-Douady charge from the hypercube of half-width `a` around `center`:
/// the four face-pair difference integrals with prefactor 1/(2 pi^2).
/// Quadrature: midpoint product rule at resolutions n and 2n, reporting the
/// finer value with Richardson error |Q_2n - Q_n| / 3. Monte-Carlo: n samples
/// distributed round-robin over the four face pairs, counter-based RNG.
inline ChargeResult dd_charge_cube(const Model& m, const PhasePoint& center, double a, int n,
                                   ChargeMethod method = ChargeMethod::CubeQuadrature,
                                   std::uint64_t seed = 0, const ChargeOptions& opt = {}) {
    if (!(a > 0)) throw Error("dd_charge_cube: half-width must be positive");
    const double norm = 1.0 / (2.0 * M_PI * M_PI);

    ChargeResult res;
    res.method = method;
    res.surface_parameter = a;

    try {
        if (method == ChargeMethod::CubeQuadrature) {
            if (n < 4) throw Error("dd_charge_cube: need at least 4 quadrature nodes per axis");
            auto pass = [&](int nn) {
                const std::int64_t per_term = static_cast<std::int64_t>(nn) * nn * nn;
                const std::int64_t total = 4 * per_term;
                std::vector<double> vals(static_cast<std::size_t>(total));
                const double cell = 2.0 * a / nn;
                parallel_for(total, opt.jobs, [&](std::int64_t idx) {
                    const auto& t = detail::kFaceTerms[static_cast<std::size_t>(idx / per_term)];
                    std::int64_t r = idx % per_term;
                    const int i = static_cast<int>(r / (nn * nn));
                    const int j = static_cast<int>((r / nn) % nn);
                    const int k = static_cast<int>(r % nn);
                    const double u0 = -a + cell * (i + 0.5);
                    const double u1 = -a + cell * (j + 0.5);
                    const double u2 = -a + cell * (k + 0.5);
                    vals[static_cast<std::size_t>(idx)] =
                        detail::face_pair_sample(m, center, a, t, u0, u1, u2, opt);
                });
                double s = 0;
                for (double v : vals) s += v;
                return s * cell * cell * cell * norm;
            };
            const double qn = pass(n);
            const double q2n = pass(2 * n);
            res.q_value = q2n;
            res.error_estimate = std::abs(q2n - qn) / 3.0 + detail::kStencilBias;
            res.evaluations = 2 * 4 *
                              (static_cast<std::int64_t>(n) * n * n +
                               static_cast<std::int64_t>(2 * n) * (2 * n) * (2 * n));
        } else if (method == ChargeMethod::CubeMonteCarlo) {
            if (n < 4) throw Error("dd_charge_cube: need at least 4 samples");
            const double vol = (2.0 * a) * (2.0 * a) * (2.0 * a);
            std::vector<double> vals(static_cast<std::size_t>(n));
            parallel_for(n, opt.jobs, [&](std::int64_t i) {
                const auto& t = detail::kFaceTerms[static_cast<std::size_t>(i % 4)];
                const double u0 = (2.0 * counter_uniform(seed, static_cast<std::uint64_t>(i), 0) - 1.0) * a;
                const double u1 = (2.0 * counter_uniform(seed, static_cast<std::uint64_t>(i), 1) - 1.0) * a;
                const double u2 = (2.0 * counter_uniform(seed, static_cast<std::uint64_t>(i), 2) - 1.0) * a;
                // factor 4: each sample represents one of the four face-pair terms
                vals[static_cast<std::size_t>(i)] =
                    4.0 * vol * norm * detail::face_pair_sample(m, center, a, t, u0, u1, u2, opt);
            });
            double mean = 0;
            for (double v : vals) mean += v;
            mean /= n;
            double var = 0;
            for (double v : vals) var += (v - mean) * (v - mean);
            var /= (n > 1 ? n - 1 : 1);
            res.q_value = mean;
            res.error_estimate = std::sqrt(var / n) + detail::kStencilBias;
            res.evaluations = 2 * static_cast<std::int64_t>(n);
        } else {
            throw Error("dd_charge_cube: sphere method belongs to dd_charge_sphere");
        }
    } catch (const DegeneracyTooClose& e) {
        throw DegeneracyOnSurface(std::string("dd_charge_cube: ") + e.what());
    }
    return detail::finalize_charge(res);
}

/// Dixmier-Douady charge from the 3-sphere of radius r around `center`:
/// Monte-Carlo average of the pulled-back 3-form over uniform directions,
/// Q = r^3 <H_xyz n_w - H_xyw n_z + H_xzw n_y - H_yzw n_x>.
inline ChargeResult dd_charge_sphere(const Model& m, const PhasePoint& center, double r,
                                     int samples, std::uint64_t seed = 0,
                                     const ChargeOptions& opt = {}) {
    if (!(r > 0)) throw Error("dd_charge_sphere: radius must be positive");
    if (samples < 4) throw Error("dd_charge_sphere: need at least 4 samples");

    ChargeResult res;
    res.method = ChargeMethod::SphereMonteCarlo;
    res.surface_parameter = r;

    std::vector<double> vals(static_cast<std::size_t>(samples));
    try {
        parallel_for(samples, opt.jobs, [&](std::int64_t i) {
            std::array<double, 4> nv{};
            double nn = 0;
            for (int k = 0; k < 4; ++k) {
                nv[k] = counter_gaussian(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(k));
                nn += nv[k] * nv[k];
            }
            nn = std::sqrt(nn);
            for (double& v : nv) v /= nn;

            PhasePoint pt = center;
            for (int k = 0; k < 4; ++k) pt = pt.shifted(static_cast<Axis>(k), r * nv[k]);

            auto curv = [&](Axis a1, Axis a2, Axis a3) {
                return tensor_curvature(m, pt, a1, a2, a3, opt.h_outer, opt.h_inner, opt.geom);
            };
            using enum Axis;
            vals[static_cast<std::size_t>(i)] = curv(X, Y, Z) * nv[3] - curv(X, Y, W) * nv[2] +
                                                curv(X, Z, W) * nv[1] - curv(Y, Z, W) * nv[0];
        });
    } catch (const DegeneracyTooClose& e) {
        throw DegeneracyOnSurface(std::string("dd_charge_sphere: ") + e.what());
    }

    double mean = 0;
    for (double v : vals) mean += v;
    mean /= samples;
    double var = 0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= (samples > 1 ? samples - 1 : 1);

    const double r3 = r * r * r;
    res.q_value = r3 * mean;
    res.error_estimate = r3 * std::sqrt(var / samples) + detail::kStencilBias;
    res.evaluations = 4 * static_cast<std::int64_t>(samples);
    return detail::finalize_charge(res);
}

}  // namespace tmono
