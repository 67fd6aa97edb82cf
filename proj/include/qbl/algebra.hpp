#pragma once

// 2x2 complex matrix algebra for SL(2,C) and SU(2): the su(2) basis {C, H, W},
// the closed-form exponential of a traceless matrix, the unitarity involution
// sigma_U(g) = (g^dagger)^{-1}, and deterministic seeded sampling of group
// elements in the factored form u exp(ihH) diag(zeta^{-1}, zeta).
//
// Conventions:
//   - matrices are stored by columns, (z1, z2) then (z3, z4):
//
//         [ z1  z3 ]
//         [ z2  z4 ]
//
//   - su(2) basis:
//
//         C = [ i  0 ]     H = [ 0 -1 ]     W = [ 0  i ]
//             [ 0 -i ]         [ 1  0 ]         [ i  0 ]
//
//   - exponential of traceless A: with lambda^2 = -det A,
//
//         exp(A) = cosh(lambda) I + sinhc(lambda) A,   sinhc(l) = sinh(l)/l.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace qbl {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Matrix2

struct Matrix2 {
    Complex z1{}, z2{}, z3{}, z4{};  // columns (z1,z2) and (z3,z4)

    static Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Matrix2 diagonal(Complex d1, Complex d2) { return {d1, 0.0, 0.0, d2}; }
};

inline Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
    return {a.z1 + b.z1, a.z2 + b.z2, a.z3 + b.z3, a.z4 + b.z4};
}

inline Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
    return {a.z1 - b.z1, a.z2 - b.z2, a.z3 - b.z3, a.z4 - b.z4};
}

inline Matrix2 operator*(Complex s, const Matrix2& m) {
    return {s * m.z1, s * m.z2, s * m.z3, s * m.z4};
}

inline Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
    return {a.z1 * b.z1 + a.z3 * b.z2,
            a.z2 * b.z1 + a.z4 * b.z2,
            a.z1 * b.z3 + a.z3 * b.z4,
            a.z2 * b.z3 + a.z4 * b.z4};
}

inline Complex det(const Matrix2& m) { return m.z1 * m.z4 - m.z3 * m.z2; }
inline Complex trace(const Matrix2& m) { return m.z1 + m.z4; }

// Conjugate transpose.
inline Matrix2 dagger(const Matrix2& m) {
    return {std::conj(m.z1), std::conj(m.z3), std::conj(m.z2), std::conj(m.z4)};
}

// adj(m) * m = det(m) * I; equals the inverse when det = 1.
inline Matrix2 adjugate(const Matrix2& m) { return {m.z4, -m.z2, -m.z3, m.z1}; }

inline double frobenius_norm(const Matrix2& m) {
    return std::sqrt(std::norm(m.z1) + std::norm(m.z2) + std::norm(m.z3) + std::norm(m.z4));
}

inline double frobenius_distance(const Matrix2& a, const Matrix2& b) {
    return frobenius_norm(a - b);
}

// ---------------------------------------------------------------------------
// GroupElement: element of SL(2,C), unit determinant enforced on entry.

struct GroupElement {
    Matrix2 m;

    static constexpr double det_tol = 1e-10;

    explicit GroupElement(const Matrix2& mat) : m(mat) {
        if (!(std::abs(det(mat) - 1.0) <= det_tol))
            throw std::invalid_argument("GroupElement: determinant must equal 1");
    }

    // For products of factors that are unimodular by construction.
    static GroupElement unchecked(const Matrix2& mat) {
        GroupElement g;
        g.m = mat;
        return g;
    }

    static GroupElement identity() { return unchecked(Matrix2::identity()); }

    // Divide by the principal square root of the determinant. Never applied
    // implicitly.
    GroupElement renormalized() const {
        const Complex r = std::sqrt(det(m));
        return GroupElement((1.0 / r) * m);
    }

  private:
    GroupElement() = default;
};

inline GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    return GroupElement::unchecked(a.m * b.m);
}

inline GroupElement inverse(const GroupElement& g) {
    return GroupElement::unchecked(adjugate(g.m));
}

// The antiholomorphic involution g -> (g^dagger)^{-1} whose fixed points are
// SU(2). The inverse is taken as the adjugate, exact for unit determinant;
// applying sigma_u twice restores the argument bitwise.
inline GroupElement sigma_u(const GroupElement& g) {
    return GroupElement::unchecked(adjugate(dagger(g.m)));
}

inline bool is_special_unitary(const GroupElement& g, double tol) {
    return frobenius_distance(dagger(g.m) * g.m, Matrix2::identity()) <= tol &&
           std::abs(det(g.m) - 1.0) <= tol;
}

// ---------------------------------------------------------------------------
// su(2) basis and the complexified algebra sl(2,C).

inline Matrix2 basis_c() { return {Complex(0, 1), 0.0, 0.0, Complex(0, -1)}; }
inline Matrix2 basis_h() { return {0.0, 1.0, -1.0, 0.0}; }
inline Matrix2 basis_w() { return {0.0, Complex(0, 1), Complex(0, 1), 0.0}; }

// Coefficients over the basis {C, H, W}. Complex coefficients span all of
// sl(2,C); the realized matrix is traceless by construction.
struct AlgebraVector {
    Complex a{}, b{}, c{};

    Matrix2 realize() const {
        const Complex i(0, 1);
        return {i * a, b + i * c, -b + i * c, -i * a};
    }

    AlgebraVector unit_frobenius() const {
        const double n = frobenius_norm(realize());
        if (n < 1e-150) return {0.0, 1.0, 0.0};
        return {a / n, b / n, c / n};
    }

    static AlgebraVector from_matrix(const Matrix2& m) {
        const Complex i(0, 1);
        return {-i * m.z1, 0.5 * (m.z2 - m.z3), -0.5 * i * (m.z2 + m.z3)};
    }
};

// ---------------------------------------------------------------------------
// Closed-form exponential of a traceless matrix.

inline GroupElement exp_traceless(const Matrix2& a) {
    if (std::abs(trace(a)) > 1e-10)
        throw std::invalid_argument("exp_traceless: input must be traceless");
    const Complex lambda2 = -det(a);
    const Complex lambda = std::sqrt(lambda2);
    Complex ch, shc;
    if (std::abs(lambda) < 1e-4) {
        // even series in lambda^2; removes the 0/0 of sinh(l)/l
        ch = 1.0 + lambda2 * (0.5 + lambda2 * (1.0 / 24.0 + lambda2 * (1.0 / 720.0)));
        shc = 1.0 + lambda2 * (1.0 / 6.0 + lambda2 * (1.0 / 120.0 + lambda2 * (1.0 / 5040.0)));
    } else {
        ch = std::cosh(lambda);
        shc = std::sinh(lambda) / lambda;
    }
    const Matrix2 r{ch + shc * a.z1, shc * a.z2, shc * a.z3, ch + shc * a.z4};
    return GroupElement::unchecked(r);
}

// exp(i h H) = [[cosh h, -i sinh h], [i sinh h, cosh h]]: the one-parameter
// radial flow transverse to SU(2).
inline Matrix2 radial_factor(double h) {
    const double ch = std::cosh(h), sh = std::sinh(h);
    return {ch, Complex(0, sh), Complex(0, -sh), ch};
}

// The K^C factor identified with zeta: diag(zeta^{-1}, zeta).
inline Matrix2 torus_factor(Complex zeta) {
    return Matrix2::diagonal(1.0 / zeta, zeta);
}

// ---------------------------------------------------------------------------
// Deterministic sampling.
//
// Counter-based stream: draw k of substream i mixes (seed, 16*i + k) through
// the splitmix64 finalizer. Substreams never overlap, so sample i is the same
// in any evaluation order and sampling loops parallelize without coordination.

class SampleStream {
  public:
    explicit SampleStream(std::uint64_t seed) : key_(mix(seed + kGamma)) {}

    std::uint64_t word(std::uint64_t ctr) const { return mix(key_ + ctr * kGamma); }

    double uniform(std::uint64_t ctr) const {  // [0, 1)
        return static_cast<double>(word(ctr) >> 11) * 0x1.0p-53;
    }

    double uniform_open(std::uint64_t ctr) const {  // (0, 1]
        return static_cast<double>((word(ctr) >> 11) + 1) * 0x1.0p-53;
    }

    // Box-Muller from draws ctr and ctr+1.
    std::pair<double, double> gaussian_pair(std::uint64_t ctr) const {
        const double r = std::sqrt(-2.0 * std::log(uniform_open(ctr)));
        const double t = 2.0 * kPi * uniform(ctr + 1);
        return {r * std::cos(t), r * std::sin(t)};
    }

  private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
};

// Seeded sampler of group elements g = u exp(ihH) diag(zeta^{-1}, zeta) with
// u Haar-uniform on SU(2) (normalized 4-Gaussian quaternion), h uniform on
// [0, h_max], zeta = e^{x+iy}, x uniform on [-x_max, x_max], y uniform on
// (-pi/2, pi/2].
//
// Draw layout per index (stride 16):
//   0: h   1: x   2: y   3-6: quaternion   7-12: probe direction
class Sampler {
  public:
    Sampler(std::uint64_t seed, double h_max, double x_max)
        : stream_(seed), h_max_(h_max), x_max_(x_max) {
        if (!(h_max > 0.0) || !(x_max > 0.0))
            throw std::invalid_argument("Sampler: bounds must be positive");
    }

    double sampled_h(std::uint64_t i) const { return h_max_ * stream_.uniform(base(i)); }

    double sampled_x(std::uint64_t i) const {
        return x_max_ * (2.0 * stream_.uniform(base(i) + 1) - 1.0);
    }

    double sampled_y(std::uint64_t i) const {
        return 0.5 * kPi - kPi * stream_.uniform(base(i) + 2);
    }

    GroupElement haar_su2(std::uint64_t i) const {
        const auto [q0, q1] = stream_.gaussian_pair(base(i) + 3);
        const auto [q2, q3] = stream_.gaussian_pair(base(i) + 5);
        const double n2 = q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3;
        if (n2 < 1e-280) return GroupElement::identity();
        const double inv = 1.0 / std::sqrt(n2);
        const Complex a(q0 * inv, q1 * inv), b(q2 * inv, q3 * inv);
        return GroupElement::unchecked({a, b, -std::conj(b), std::conj(a)});
    }

    GroupElement group(std::uint64_t i) const {
        const Complex zeta = std::polar(std::exp(sampled_x(i)), sampled_y(i));
        return GroupElement::unchecked(haar_su2(i).m * radial_factor(sampled_h(i)) *
                                       torus_factor(zeta));
    }

    // Unit-Frobenius direction in sl(2,C) (draws 7-12 of the same index).
    AlgebraVector direction(std::uint64_t i) const {
        const auto [a0, a1] = stream_.gaussian_pair(base(i) + 7);
        const auto [b0, b1] = stream_.gaussian_pair(base(i) + 9);
        const auto [c0, c1] = stream_.gaussian_pair(base(i) + 11);
        return AlgebraVector{Complex(a0, a1), Complex(b0, b1), Complex(c0, c1)}.unit_frobenius();
    }

  private:
    static std::uint64_t base(std::uint64_t i) { return i * 16; }

    SampleStream stream_;
    double h_max_, x_max_;
};

inline GroupElement sample_group(std::uint64_t seed, double h_max, double x_max) {
    return Sampler(seed, h_max, x_max).group(0);
}

}  // namespace qbl
