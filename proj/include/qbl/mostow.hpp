#pragma once

// Mostow decomposition g = u exp(ihH) diag(zeta^{-1}, zeta) of SL(2,C) and the
// two-step quotient onto invariant coordinates:
//
//   gram_slice   g -> sigma_U(g)^{-1} g = g^dagger g = [[s, b], [conj b, t]],
//                one point per left SU(2)-orbit, st - |b|^2 = 1;
//   slice_coords forgets b: one point per right K-orbit (K rotates b);
//   coords       (s, t) = (|z1|^2 + |z2|^2, |z3|^2 + |z4|^2) directly.
//
// On the coordinates the decomposition data push down to
//
//   |zeta| = (t/s)^{1/4},     h = 1/2 arccosh sqrt(st),   h >= 0,
//
// with the Weyl ambiguity resolved by h >= 0 and the K-phase by
// arg(zeta) in (-pi/2, pi/2].

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qbl/algebra.hpp"

namespace qbl {

// Image of the first quotient map: positive Hermitian with determinant 1.
struct SliceElement {
    double s, t;
    Complex b;

    static constexpr double invariant_tol = 1e-9;

    SliceElement(double s_, double t_, Complex b_) : s(s_), t(t_), b(b_) {
        if (!(s > 0.0) || !(t > 0.0) || !(std::abs(s * t - std::norm(b) - 1.0) <= invariant_tol))
            throw std::invalid_argument("SliceElement: requires s,t > 0 and st - |b|^2 = 1");
    }
};

struct InvariantCoords {
    double s, t;

    InvariantCoords(double s_, double t_) : s(s_), t(t_) {
        if (!(s > 0.0) || !(t > 0.0) || !(s * t >= 1.0 - 1e-9))
            throw std::invalid_argument("InvariantCoords: requires s,t > 0 and st >= 1");
    }
};

struct MostowFactors {
    GroupElement u;  // special-unitary
    double h;        // >= 0
    Complex zeta;    // arg in (-pi/2, pi/2]
};

// g -> g^dagger g, read off as (s, b; conj b, t). A broken slice invariant
// signals a non-unimodular input.
inline SliceElement gram_slice(const GroupElement& g) {
    const Matrix2& m = g.m;
    const double s = std::norm(m.z1) + std::norm(m.z2);
    const double t = std::norm(m.z3) + std::norm(m.z4);
    const Complex b = std::conj(m.z1) * m.z3 + std::conj(m.z2) * m.z4;
    return {s, t, b};
}

inline InvariantCoords slice_coords(const SliceElement& q) { return {q.s, q.t}; }

inline InvariantCoords coords(const GroupElement& g) {
    const Matrix2& m = g.m;
    return {std::norm(m.z1) + std::norm(m.z2), std::norm(m.z3) + std::norm(m.z4)};
}

inline double zeta_modulus(const InvariantCoords& c) { return std::pow(c.t / c.s, 0.25); }

// h = 1/2 arccosh sqrt(st), evaluated as 1/2 log(sqrt(st) + sqrt(st - 1)) with
// st clamped to 1 from below for stability near the identity orbit.
inline double radial(const InvariantCoords& c) {
    const double st = c.s * c.t;
    if (st < 1.0 - 1e-9)
        throw std::domain_error("radial: coordinates must satisfy st >= 1");
    const double stc = std::max(st, 1.0);
    return 0.5 * std::log(std::sqrt(stc) + std::sqrt(stc - 1.0));
}

inline GroupElement reconstruct(const MostowFactors& f) {
    return GroupElement::unchecked(f.u.m * radial_factor(f.h) * torus_factor(f.zeta));
}

// Factor g as u exp(ihH) diag(zeta^{-1}, zeta).
//
// From M = g^dagger g: h through sqrt(st - 1) = |b| (exact by det M = 1),
// x = log|zeta| = (1/4) log(t/s), and the phase y = arg(zeta) from
// b = -i e^{2iy} sinh 2h when sinh 2h is resolvable, else y = 0. Factor
// equality is always judged by reconstruction, never factor-wise.
inline MostowFactors decompose(const GroupElement& g) {
    static constexpr double tol_h = 1e-8;

    const SliceElement q = gram_slice(g);
    const double st = q.s * q.t;
    const double root = std::max(std::sqrt(std::max(st, 1.0)) + std::abs(q.b), 1.0);
    const double h = 0.5 * std::log(root);
    const double x = 0.25 * std::log(q.t / q.s);
    const double sh = std::sinh(2.0 * h);
    double y = 0.0;
    if (sh > tol_h) y = 0.5 * std::arg(Complex(0, 1) * q.b / sh);

    const Complex zeta = std::polar(std::exp(x), y);
    const Complex zeta_inv = std::polar(std::exp(-x), -y);
    const GroupElement u = GroupElement::unchecked(
        g.m * Matrix2::diagonal(zeta, zeta_inv) * radial_factor(-h));

    if (!is_special_unitary(u, 1e-9))
        throw std::runtime_error("decompose: unitary factor out of tolerance");
    const MostowFactors f{u, h, zeta};
    if (frobenius_distance(reconstruct(f).m, g.m) > 1e-7)
        throw std::runtime_error("decompose: reconstruction residual too large");
    return f;
}

}  // namespace qbl
