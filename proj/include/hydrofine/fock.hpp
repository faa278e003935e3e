// fock.hpp — truncated Fock space over a mode grid, ladder-operator matrix
// assembly, and construction of H0(P), W_g(P), H_g(P) in the frozen-core
// approximation.

#pragma once

#include "hydrofine/grid.hpp"

#include <Eigen/Sparse>

#include <string>

namespace hydrofine {

using SparseOp = Eigen::SparseMatrix<complexd>;
using Triplet = Eigen::Triplet<complexd>;

// Occupation state with at most two photons: a <= b are occupied mode
// indices, -1 marks an empty slot. Vacuum is (-1, -1); (m, -1) is one photon
// in mode m; (m, m') with m <= m' is the two-photon state (m = m' doubly
// occupied). Symmetrization is implicit in this bookkeeping.
struct OccState {
    int a{-1};
    int b{-1};

    int total() const { return (a >= 0 ? 1 : 0) + (b >= 0 ? 1 : 0); }
    int count(int m) const { return (a == m ? 1 : 0) + (b == m ? 1 : 0); }
    bool operator==(const OccState&) const = default;
};

struct FockBasis {
    std::vector<Mode> modes;
    int n_max{1};
    std::vector<OccState> states;  // vacuum first, then 1-photon, then 2-photon
    std::vector<double> eph;       // photon energy sum_m n_m |k_m| per state
    std::vector<Vec3> kph;         // photon momentum sum_m n_m k_m per state

    int num_modes() const { return static_cast<int>(modes.size()); }
    std::size_t num_states() const { return states.size(); }
    std::size_t dim() const { return 4 * states.size(); }

    // Deterministic enumeration index; the layout is arithmetic, no lookup
    // tables needed.
    std::size_t index_of(const OccState& s) const {
        const std::size_t m_count = modes.size();
        if (s.total() == 0) return 0;
        if (s.total() == 1) return 1 + static_cast<std::size_t>(s.a);
        const std::size_t a = static_cast<std::size_t>(s.a);
        const std::size_t b = static_cast<std::size_t>(s.b);
        const std::size_t pair_offset = a * m_count - a * (a - 1) / 2 + (b - a);
        return 1 + m_count + pair_offset;
    }

    // Global index of spin component s within occupation block t.
    std::size_t global(std::size_t t, int spin) const { return 4 * t + spin; }
};

inline FockBasis enumerate_basis(std::vector<Mode> modes, int n_max,
                                 std::size_t max_dim = 2'000'000) {
    if (n_max < 0 || n_max > 2) {
        throw ConfigError("enumerate_basis: n_max must be in {0, 1, 2}");
    }
    const std::size_t m_count = modes.size();
    std::size_t n_states = 1;
    if (n_max >= 1) n_states += m_count;
    if (n_max >= 2) n_states += m_count * (m_count + 1) / 2;
    if (4 * n_states > max_dim) {
        throw BudgetError("enumerate_basis: dimension exceeds the configured budget",
                          static_cast<double>(4 * n_states));
    }
    FockBasis basis;
    basis.modes = std::move(modes);
    basis.n_max = n_max;
    basis.states.reserve(n_states);
    basis.states.push_back(OccState{});
    if (n_max >= 1) {
        for (int m = 0; m < static_cast<int>(m_count); ++m) basis.states.push_back({m, -1});
    }
    if (n_max >= 2) {
        for (int a = 0; a < static_cast<int>(m_count); ++a)
            for (int b = a; b < static_cast<int>(m_count); ++b) basis.states.push_back({a, b});
    }
    basis.eph.resize(basis.states.size());
    basis.kph.resize(basis.states.size());
    for (std::size_t t = 0; t < basis.states.size(); ++t) {
        double e = 0.0;
        Vec3 k = Vec3::Zero();
        const OccState& s = basis.states[t];
        if (s.a >= 0) {
            e += basis.modes[s.a].k.norm();
            k += basis.modes[s.a].k;
        }
        if (s.b >= 0) {
            e += basis.modes[s.b].k.norm();
            k += basis.modes[s.b].k;
        }
        basis.eph[t] = e;
        basis.kph[t] = k;
    }
    return basis;
}

struct AssembledOperator {
    SparseOp matrix;
    std::string label;

    Eigen::VectorXd real_diagonal() const {
        Eigen::VectorXd d(matrix.rows());
        for (Eigen::Index i = 0; i < matrix.rows(); ++i) d(i) = matrix.coeff(i, i).real();
        return d;
    }
};

namespace detail {

inline AssembledOperator diagonal_operator(const FockBasis& basis,
                                           const std::function<double(std::size_t)>& value,
                                           std::string label) {
    const Eigen::Index n = static_cast<Eigen::Index>(basis.dim());
    std::vector<Triplet> trips;
    trips.reserve(n);
    for (std::size_t t = 0; t < basis.num_states(); ++t) {
        const double v = value(t);
        for (int s = 0; s < 4; ++s) {
            const Eigen::Index i = static_cast<Eigen::Index>(basis.global(t, s));
            trips.emplace_back(i, i, complexd(v, 0.0));
        }
    }
    AssembledOperator op;
    op.matrix.resize(n, n);
    op.matrix.setFromTriplets(trips.begin(), trips.end());
    op.label = std::move(label);
    return op;
}

}  // namespace detail

// H0(P): diagonal with entry e0 + (P - K_ph)^2 / 2M + E_ph on each occupation
// state, identical across the four spin components.
inline AssembledOperator build_h0(const FockBasis& basis, const PhysicalParams& p,
                                  const DerivedConstants& d) {
    return detail::diagonal_operator(
        basis,
        [&](std::size_t t) {
            const Vec3 q = p.p_total - basis.kph[t];
            return d.e0 + q.squaredNorm() / (2.0 * d.m_total) + basis.eph[t];
        },
        "H0");
}

inline AssembledOperator build_hph(const FockBasis& basis) {
    return detail::diagonal_operator(
        basis, [&](std::size_t t) { return basis.eph[t]; }, "Hph");
}

inline AssembledOperator build_nph(const FockBasis& basis) {
    return detail::diagonal_operator(
        basis, [&](std::size_t t) { return static_cast<double>(basis.states[t].total()); },
        "Nph");
}

inline AssembledOperator build_pph(const FockBasis& basis, int axis) {
    if (axis < 0 || axis > 2) throw std::invalid_argument("build_pph: axis must be 0, 1, or 2");
    const std::string labels[3] = {"Pph_x", "Pph_y", "Pph_z"};
    return detail::diagonal_operator(
        basis, [&](std::size_t t) { return basis.kph[t](axis); }, labels[axis]);
}

struct WOptions {
    bool include_quadratic{false};  // normal-ordered A^2 terms, Wick constant omitted
    bool include_spin{true};        // sigma.B vertices (off = control experiment)
    bool include_current{true};     // (P - P_ph).A vertices
    bool form_factors{true};
};

namespace detail {

inline void add_block(std::vector<Triplet>& trips, const FockBasis& basis, std::size_t row_t,
                      std::size_t col_t, const SpinMatrix& block) {
    for (int sr = 0; sr < 4; ++sr) {
        for (int sc = 0; sc < 4; ++sc) {
            const complexd v = block(sr, sc);
            if (v == complexd(0.0, 0.0)) continue;
            trips.emplace_back(static_cast<Eigen::Index>(basis.global(row_t, sr)),
                               static_cast<Eigen::Index>(basis.global(col_t, sc)), v);
        }
    }
}

inline void add_scalar_block(std::vector<Triplet>& trips, const FockBasis& basis,
                             std::size_t row_t, std::size_t col_t, complexd v) {
    if (v == complexd(0.0, 0.0)) return;
    for (int s = 0; s < 4; ++s) {
        trips.emplace_back(static_cast<Eigen::Index>(basis.global(row_t, s)),
                           static_cast<Eigen::Index>(basis.global(col_t, s)), v);
    }
}

inline OccState with_photon(const OccState& s, int m) {
    if (s.total() == 0) return {m, -1};
    if (s.total() == 1) return {std::min(s.a, m), std::max(s.a, m)};
    throw std::logic_error("with_photon: state already full");
}

}  // namespace detail

// W_g(P): linear part sum_m sqrt(w_m) [ (S_m + j_m.(P - P_ph)) a^dag_m + adjoint ],
// with (S_m, j_m) from frozen_vertex. The current factors commute with P_ph
// (j_m . k_m = 0), so the operator ordering is unambiguous. When
// include_quadratic is set, the normal-ordered A^2 terms are added as
// two-photon creation/annihilation plus number-conserving pieces built from
// the h^A kernels at frozen-core form-factor level; the Wick constant g^2 C_L
// is never added.
inline AssembledOperator build_w(const FockBasis& basis, const PhysicalParams& p,
                                 const DerivedConstants& d, const WOptions& opts = {}) {
    p.validate();
    const int m_count = basis.num_modes();
    std::vector<VertexData> vertices;
    vertices.reserve(m_count);
    for (const Mode& mode : basis.modes) {
        VertexData v = frozen_vertex(mode.k, mode.lam, p, d, opts.form_factors);
        if (!opts.include_spin) v.spin_coeff = SpinMatrix::Zero();
        if (!opts.include_current) v.current_coeff = CVec3::Zero();
        vertices.push_back(std::move(v));
    }

    std::vector<Triplet> trips;
    // Linear creation blocks plus their adjoints.
    for (std::size_t t = 0; t < basis.num_states(); ++t) {
        const OccState& s = basis.states[t];
        if (s.total() >= basis.n_max) continue;
        const Vec3 p_minus_k = p.p_total - basis.kph[t];
        for (int m = 0; m < m_count; ++m) {
            const OccState target = detail::with_photon(s, m);
            const std::size_t t2 = basis.index_of(target);
            const double amp =
                std::sqrt(basis.modes[m].weight) * std::sqrt(1.0 + s.count(m));
            SpinMatrix block = vertices[m].spin_coeff;
            complexd jdotp(0.0, 0.0);
            for (int ax = 0; ax < 3; ++ax) jdotp += vertices[m].current_coeff(ax) * p_minus_k(ax);
            block += jdotp * SpinMatrix::Identity();
            block *= amp;
            detail::add_block(trips, basis, t2, t, block);
            detail::add_block(trips, basis, t, t2, block.adjoint());
        }
    }

    if (opts.include_quadratic) {
        const VertexScales scales = vertex_scales(p, d);
        std::vector<CVec3> ha0(m_count);
        for (int m = 0; m < m_count; ++m) {
            ha0[m] = h_A(Vec3::Zero(), basis.modes[m].k, basis.modes[m].lam, p.lambda_uv);
        }
        const double q_el = p.g * p.g / (2.0 * p.m_el);
        const double q_n = p.g * p.g / (2.0 * p.m_n);
        auto pair_form = [&](const Vec3& ka, const Vec3& kb, double sign) {
            const double q = (ka + sign * kb).norm();
            const double f_el = opts.form_factors ? hydrogen_form_factor(scales.a_el * q, d.mu) : 1.0;
            const double f_n = opts.form_factors ? hydrogen_form_factor(scales.a_n * q, d.mu) : 1.0;
            return std::pair<double, double>(f_el, f_n);
        };
        auto dot_plain = [](const CVec3& u, const CVec3& v) {
            return u(0) * v(0) + u(1) * v(1) + u(2) * v(2);
        };

        // Two-photon creation (and adjoint annihilation) pieces.
        for (std::size_t t = 0; t < basis.num_states(); ++t) {
            const OccState& s = basis.states[t];
            if (s.total() + 2 > basis.n_max) continue;
            for (int m = 0; m < m_count; ++m) {
                for (int m2 = m; m2 < m_count; ++m2) {
                    const auto [f_el, f_n] = pair_form(basis.modes[m].k, basis.modes[m2].k, +1.0);
                    const complexd kernel = dot_plain(ha0[m], ha0[m2]);
                    complexd coeff = (q_el * f_el + q_n * f_n) * kernel;
                    if (m != m2) coeff *= 2.0;  // (m, m2) and (m2, m) orderings
                    coeff *= std::sqrt(basis.modes[m].weight * basis.modes[m2].weight);
                    const OccState mid = detail::with_photon(s, m);
                    const OccState target = detail::with_photon(mid, m2);
                    const double amp = std::sqrt(1.0 + s.count(m)) *
                                       std::sqrt(1.0 + mid.count(m2));
                    const std::size_t t2 = basis.index_of(target);
                    detail::add_scalar_block(trips, basis, t2, t, coeff * amp);
                    detail::add_scalar_block(trips, basis, t, t2, std::conj(coeff * amp));
                }
            }
        }

        // Number-conserving a^dag_m a_{m'} pieces; the ordered double sum is
        // self-adjoint, so no mirroring here.
        for (std::size_t t = 0; t < basis.num_states(); ++t) {
            const OccState& s = basis.states[t];
            if (s.total() == 0) continue;
            int occupied[2] = {s.a, s.b};
            int prev = -1;
            for (int slot = 0; slot < 2; ++slot) {
                const int m2 = occupied[slot];
                if (m2 < 0 || m2 == prev) continue;  // skip duplicate of a doubly occupied mode
                prev = m2;
                for (int m = 0; m < m_count; ++m) {
                    const auto [f_el, f_n] = pair_form(basis.modes[m].k, basis.modes[m2].k, -1.0);
                    const complexd kernel = 2.0 * dot_plain(ha0[m], ha0[m2].conjugate());
                    complexd coeff = (q_el * f_el + q_n * f_n) * kernel *
                                     std::sqrt(basis.modes[m].weight * basis.modes[m2].weight);
                    // amplitude sqrt(n_{m'}) sqrt(n_m + 1 - delta_{m m'})
                    const OccState removed{s.a == m2 ? s.b : s.a, -1};
                    const double amp = std::sqrt(static_cast<double>(s.count(m2))) *
                                       std::sqrt(1.0 + removed.count(m));
                    const OccState target = detail::with_photon(removed, m);
                    const std::size_t t2 = basis.index_of(target);
                    detail::add_scalar_block(trips, basis, t2, t, coeff * amp);
                }
            }
        }
    }

    AssembledOperator op;
    op.matrix.resize(static_cast<Eigen::Index>(basis.dim()),
                     static_cast<Eigen::Index>(basis.dim()));
    op.matrix.setFromTriplets(trips.begin(), trips.end());
    op.label = "Wg";
    return op;
}

inline AssembledOperator build_hg(const FockBasis& basis, const PhysicalParams& p,
                                  const DerivedConstants& d, const WOptions& opts = {}) {
    AssembledOperator h0 = build_h0(basis, p, d);
    const AssembledOperator w = build_w(basis, p, d, opts);
    AssembledOperator hg;
    hg.matrix = h0.matrix + w.matrix;
    hg.label = "Hg";
    return hg;
}

// Discretized annihilation operator a(f) = sum_m sqrt(w_m) conj(f_m) a_m for a
// mode-sampled function f; used by the ladder-bound checks.
inline SparseOp annihilation_operator(const FockBasis& basis, const Eigen::VectorXcd& f) {
    if (f.size() != basis.num_modes()) {
        throw std::invalid_argument("annihilation_operator: f must have one entry per mode");
    }
    std::vector<Triplet> trips;
    for (std::size_t t = 0; t < basis.num_states(); ++t) {
        const OccState& s = basis.states[t];
        if (s.total() == 0) continue;
        int occupied[2] = {s.a, s.b};
        int prev = -1;
        for (int slot = 0; slot < 2; ++slot) {
            const int m = occupied[slot];
            if (m < 0 || m == prev) continue;
            prev = m;
            const OccState removed{s.a == m ? s.b : s.a, -1};
            const std::size_t t2 = basis.index_of(removed);
            const complexd v = std::sqrt(basis.modes[m].weight) * std::conj(f(m)) *
                               std::sqrt(static_cast<double>(s.count(m)));
            detail::add_scalar_block(trips, basis, t2, t, v);
        }
    }
    SparseOp a(static_cast<Eigen::Index>(basis.dim()), static_cast<Eigen::Index>(basis.dim()));
    a.setFromTriplets(trips.begin(), trips.end());
    return a;
}

// Weighted 2-norm ||f||^2 = sum_m w_m |f_m|^2 matching the discretization.
inline double mode_norm(const FockBasis& basis, const Eigen::VectorXcd& f) {
    double s = 0.0;
    for (int m = 0; m < basis.num_modes(); ++m) s += basis.modes[m].weight * std::norm(f(m));
    return std::sqrt(s);
}

}  // namespace hydrofine
