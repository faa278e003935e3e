// kernels.hpp — polarization vectors, ultraviolet cutoff, coupling form
// factors h^A/h^B, the hydrogen charge form factor, and the frozen-core
// interaction vertex.

#pragma once

#include "hydrofine/model.hpp"

namespace hydrofine {

constexpr double two_pi = 6.283185307179586476925286766559;

struct Polarization {
    Vec3 eps1;
    Vec3 eps2;
};

// eps1 = (k2, -k1, 0) / sqrt(k1^2 + k2^2)
// eps2 = (-k1 k3, -k2 k3, k1^2 + k2^2) / (sqrt(k1^2 + k2^2) |k|)
// The explicit component formula for eps2 is normative here; both vectors are
// unit, mutually orthogonal, and orthogonal to k. Singular on the third axis.
inline Polarization polarization(const Vec3& k) {
    const double perp2 = k(0) * k(0) + k(1) * k(1);
    if (!(perp2 > 0.0)) {
        throw std::domain_error("polarization: k lies on the third axis (k1^2 + k2^2 = 0)");
    }
    const double perp = std::sqrt(perp2);
    const double knorm = k.norm();
    Polarization p;
    p.eps1 = Vec3(k(1), -k(0), 0.0) / perp;
    p.eps2 = Vec3(-k(0) * k(2), -k(1) * k(2), perp2) / (perp * knorm);
    return p;
}

inline Vec3 polarization_vector(const Vec3& k, int lam) {
    const Polarization p = polarization(k);
    if (lam == 1) return p.eps1;
    if (lam == 2) return p.eps2;
    throw std::invalid_argument("polarization_vector: lam must be 1 or 2");
}

// Sharp cutoff 1_{|k| <= Lambda}; the boundary is included.
inline double cutoff(const Vec3& k, double lambda_uv) {
    return k.norm() <= lambda_uv ? 1.0 : 0.0;
}

// h^A_j(x,k,lam) = (1/2pi) chi_L(k) / |k|^{1/2} eps^lam_j(k) e^{-i k.x}
inline CVec3 h_A(const Vec3& x, const Vec3& k, int lam, double lambda_uv) {
    const double chi = cutoff(k, lambda_uv);
    const Vec3 eps = polarization_vector(k, lam);
    const complexd phase = std::exp(complexd(0.0, -k.dot(x)));
    return (chi / (two_pi * std::sqrt(k.norm())) * phase) * eps.cast<complexd>();
}

// h^B_j(x,k,lam) = -(i/2pi) |k|^{1/2} chi_L(k) (khat ^ eps^lam(k))_j e^{-i k.x}
inline CVec3 h_B(const Vec3& x, const Vec3& k, int lam, double lambda_uv) {
    const double chi = cutoff(k, lambda_uv);
    const Vec3 eps = polarization_vector(k, lam);
    const Vec3 khat_cross_eps = k.normalized().cross(eps);
    const complexd phase = std::exp(complexd(0.0, -k.dot(x)));
    return (complexd(0.0, -1.0) * std::sqrt(k.norm()) * chi / two_pi * phase) *
           khat_cross_eps.cast<complexd>();
}

// Frozen-core charge form factor F(q) = <phi_0| e^{-i q.r} |phi_0> for the
// hydrogen ground state phi_0(r) = (mu^3/pi)^{1/2} e^{-mu r}:
//   F(q) = (1 + q^2 / (4 mu^2))^{-2}.
inline double hydrogen_form_factor(double q, double mu) {
    if (q < 0.0) throw std::invalid_argument("hydrogen_form_factor: q must be >= 0");
    if (!(mu > 0.0)) throw std::invalid_argument("hydrogen_form_factor: mu must be > 0");
    const double t = q / (2.0 * mu);
    const double d = 1.0 + t * t;
    return 1.0 / (d * d);
}

// Creation vertex of the frozen-core interaction at mode (k, lam). The
// annihilation vertex is the entrywise adjoint/conjugate. The p_r . h^A
// contribution drops out: contracted against the transverse polarization the
// phi_0 expectation vanishes identically (checked numerically in the tests).
struct VertexData {
    SpinMatrix spin_coeff;  // multiplies a^dag directly
    CVec3 current_coeff;    // dotted with (P - P_ph), multiplies a^dag
    Vec3 k;
    int lam{1};
};

struct VertexScales {
    double a_el;  // (m_el / M) g^{2/3}
    double a_n;   // (m_n / M) g^{2/3}
};

inline VertexScales vertex_scales(const PhysicalParams& p, const DerivedConstants& d) {
    const double g23 = std::pow(p.g, 2.0 / 3.0);
    return {p.m_el / d.m_total * g23, p.m_n / d.m_total * g23};
}

// Per-axis spin pieces; their sum is the full spin_coeff. Shared by the
// operator assembly and by the term-isolated Gamma integrands so both routes
// evaluate bit-identical vertex data.
inline std::array<SpinMatrix, 3> frozen_vertex_spin_axes(const Vec3& k, int lam,
                                                         const PhysicalParams& p,
                                                         const DerivedConstants& d,
                                                         bool form_factors = true) {
    const VertexScales a = vertex_scales(p, d);
    const double knorm = k.norm();
    const double f_el = form_factors ? hydrogen_form_factor(a.a_el * knorm, d.mu) : 1.0;
    const double f_n = form_factors ? hydrogen_form_factor(a.a_n * knorm, d.mu) : 1.0;
    const CVec3 b = h_B(Vec3::Zero(), k, lam, p.lambda_uv);
    std::array<SpinMatrix, 3> parts;
    for (int j = 0; j < 3; ++j) {
        parts[j] = (-p.g / (2.0 * p.m_el) * f_el * b(j)) * pauli(Particle::el, j + 1) +
                   (p.g / (2.0 * p.m_n) * f_n * b(j)) * pauli(Particle::n, j + 1);
    }
    return parts;
}

inline CVec3 frozen_vertex_current(const Vec3& k, int lam, const PhysicalParams& p,
                                   const DerivedConstants& d, bool form_factors = true) {
    const VertexScales a = vertex_scales(p, d);
    const double knorm = k.norm();
    const double f_el = form_factors ? hydrogen_form_factor(a.a_el * knorm, d.mu) : 1.0;
    const double f_n = form_factors ? hydrogen_form_factor(a.a_n * knorm, d.mu) : 1.0;
    const double chi = cutoff(k, p.lambda_uv);
    const Vec3 eps = polarization_vector(k, lam);
    const double scale = -p.g / d.m_total * chi / (two_pi * std::sqrt(knorm)) * (f_el - f_n);
    return (scale * eps).cast<complexd>();
}

inline VertexData frozen_vertex(const Vec3& k, int lam, const PhysicalParams& p,
                                const DerivedConstants& d, bool form_factors = true) {
    VertexData v;
    v.k = k;
    v.lam = lam;
    if (cutoff(k, p.lambda_uv) == 0.0) {
        v.spin_coeff = SpinMatrix::Zero();
        v.current_coeff = CVec3::Zero();
        return v;
    }
    const auto parts = frozen_vertex_spin_axes(k, lam, p, d, form_factors);
    v.spin_coeff = parts[0] + parts[1] + parts[2];
    v.current_coeff = frozen_vertex_current(k, lam, p, d, form_factors);
    return v;
}

}  // namespace hydrofine
