// model.hpp — physical parameters, derived hydrogen constants, and the
// two-spin (4x4) Pauli algebra with decomposition utilities.

#pragma once

#include "hydrofine/common.hpp"

#include <array>
#include <sstream>

namespace hydrofine {

// Units: hbar = c = 1 and m_el = 1 fixes the scale; everything else follows.
struct PhysicalParams {
    double m_el{1.0};
    double m_n{1836.152};   // physical proton/electron mass ratio
    double g{0.02};         // dimensionless coupling, g = alpha^{3/2} in origin
    double lambda_uv{1.0};  // sharp UV cutoff on photon momenta
    Vec3 p_total{0.0, 0.0, 0.0};
    double p_ceiling_factor{0.1};  // operations reject |P| > factor * M

    double total_mass() const { return m_el + m_n; }

    void validate() const {
        if (!(m_el > 0.0)) throw ConfigError("PhysicalParams: m_el must be > 0");
        if (!(m_n > 0.0)) throw ConfigError("PhysicalParams: m_n must be > 0");
        if (!(lambda_uv > 0.0)) throw ConfigError("PhysicalParams: lambda_uv must be > 0");
        if (!(g >= 0.0)) throw ConfigError("PhysicalParams: g must be >= 0");
        if (!(p_ceiling_factor > 0.0)) {
            throw ConfigError("PhysicalParams: p_ceiling_factor must be > 0");
        }
        const double p_c = p_ceiling_factor * total_mass();
        if (p_total.norm() > p_c) {
            std::ostringstream msg;
            msg << "PhysicalParams: |p_total| = " << p_total.norm()
                << " exceeds the smallness ceiling p_c = " << p_c;
            throw ConfigError(msg.str());
        }
    }
};

struct DerivedConstants {
    double m_total;   // M = m_el + m_n
    double mu;        // reduced mass
    double e0;        // hydrogen ground energy, -mu/2
    double e1;        // first excited hydrogen energy, -mu/8
    double e0_fiber;  // E_0(P) = e0 + P^2 / 2M
};

inline DerivedConstants derive_constants(const PhysicalParams& p) {
    p.validate();
    DerivedConstants d;
    d.m_total = p.m_el + p.m_n;
    d.mu = p.m_el * p.m_n / d.m_total;
    d.e0 = -0.5 * d.mu;
    d.e1 = -d.mu / 8.0;
    d.e0_fiber = d.e0 + p.p_total.squaredNorm() / (2.0 * d.m_total);
    return d;
}

// ------------------------------ Pauli algebra -------------------------------
//
// Basis ordering is fixed globally as (e-up n-up, e-up n-down, e-down n-up,
// e-down n-down): the electron spin is the major index, so sigma^el_i acts as
// sigma_i (x) 1 and sigma^n_j as 1 (x) sigma_j.

enum class Particle { el, n };

namespace detail {

inline SpinMatrix kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    SpinMatrix out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

inline const std::array<SpinMatrix, 6>& pauli_table() {
    static const std::array<SpinMatrix, 6> table = [] {
        const complexd i(0.0, 1.0);
        Eigen::Matrix2cd sx, sy, sz, id;
        sx << 0, 1, 1, 0;
        sy << 0, -i, i, 0;
        sz << 1, 0, 0, -1;
        id.setIdentity();
        std::array<SpinMatrix, 6> t;
        t[0] = kron2(sx, id);  // sigma^el_1
        t[1] = kron2(sy, id);
        t[2] = kron2(sz, id);
        t[3] = kron2(id, sx);  // sigma^n_1
        t[4] = kron2(id, sy);
        t[5] = kron2(id, sz);
        return t;
    }();
    return table;
}

}  // namespace detail

inline const SpinMatrix& pauli(Particle which, int axis) {
    if (axis < 1 || axis > 3) throw std::invalid_argument("pauli: axis must be 1, 2, or 3");
    const int base = (which == Particle::el) ? 0 : 3;
    return detail::pauli_table()[base + axis - 1];
}

// sigma^el . sigma^n, the exchange operator driving the hyperfine splitting.
inline SpinMatrix spin_exchange() {
    SpinMatrix m = SpinMatrix::Zero();
    for (int axis = 1; axis <= 3; ++axis) m += pauli(Particle::el, axis) * pauli(Particle::n, axis);
    return m;
}

// Coefficients of m = c0 I + sum_i c_el[i] sigma^el_i + sum_j c_n[j] sigma^n_j
//                    + sum_ij c_ex(i,j) sigma^el_i sigma^n_j
// under the trace inner product <A,B> = tr(A^dag B) / 4.
struct TwoSpinDecomposition {
    complexd c0;
    Eigen::Vector3cd c_el;
    Eigen::Vector3cd c_n;
    Eigen::Matrix3cd c_ex;
};

inline TwoSpinDecomposition decompose_two_spin(const SpinMatrix& m) {
    TwoSpinDecomposition d;
    d.c0 = m.trace() / 4.0;
    for (int i = 0; i < 3; ++i) {
        d.c_el(i) = (pauli(Particle::el, i + 1) * m).trace() / 4.0;
        d.c_n(i) = (pauli(Particle::n, i + 1) * m).trace() / 4.0;
        for (int j = 0; j < 3; ++j) {
            d.c_ex(i, j) =
                (pauli(Particle::n, j + 1) * pauli(Particle::el, i + 1) * m).trace() / 4.0;
        }
    }
    return d;
}

inline SpinMatrix compose_two_spin(const TwoSpinDecomposition& d) {
    SpinMatrix m = d.c0 * SpinMatrix::Identity();
    for (int i = 0; i < 3; ++i) {
        m += d.c_el(i) * pauli(Particle::el, i + 1);
        m += d.c_n(i) * pauli(Particle::n, i + 1);
        for (int j = 0; j < 3; ++j) {
            m += d.c_ex(i, j) * pauli(Particle::el, i + 1) * pauli(Particle::n, j + 1);
        }
    }
    return m;
}

// Unit vector spanning the eigenvalue -3 eigenspace of sigma^el . sigma^n.
inline Eigen::Vector4cd singlet_vector() {
    Eigen::Vector4cd v;
    const double s = 1.0 / std::sqrt(2.0);
    v << 0.0, s, -s, 0.0;
    return v;
}

}  // namespace hydrofine
