// gamma.hpp — the second-order hyperfine matrix Gamma: continuum quadrature,
// grid-matched discrete sum, the closed-form constant C0, and eigenstructure
// analysis of the splitting.

#pragma once

#include "hydrofine/spectrum.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <optional>

namespace hydrofine {

struct GammaOptions {
    bool form_factors{true};
    bool include_current{true};
    bool include_spin{true};
    std::array<bool, 3> spin_axes{true, true, true};
    double rel_tol{1e-9};
    int max_panels{4000};
    int n_costheta{24};  // starting fixed angular orders; doubled until stable
    int n_phi{16};
};

// Term selections for the structural checks on Gamma_32. Each selection is
// evaluated pointwise inside one quadrature pass, so exact cancellations
// survive at machine precision instead of being differences of two runs.
enum class GammaTerms {
    full,          // (S + j.P)^dag (S + j.P) with the option masks applied
    current_part,  // terms containing at least one h^A (current) factor
    axis3_part,    // terms containing at least one axis-3 spin factor
    cross_12,      // S_1^dag S_2 + S_2^dag S_1 only
};

struct GammaMatrix {
    SpinMatrix matrix;
    std::string provenance;  // "continuum" or "discrete(nr,nc,nphi)"
    PhysicalParams params;
    double denominator_energy;
};

namespace detail {

inline double gamma_denominator(const Vec3& k, const PhysicalParams& p,
                                const DerivedConstants& d, double e_ref) {
    const double denom =
        d.e0 + (p.p_total - k).squaredNorm() / (2.0 * d.m_total) + k.norm() - e_ref;
    if (!(denom > 0.0)) {
        throw std::domain_error("gamma: resolvent denominator is not positive; "
                                "check e_ref <= E0 and |P| <= p_c");
    }
    return denom;
}

// Pointwise integrand M(k, lam) such that Gamma = sum_lam int M d^3k.
inline SpinMatrix gamma_integrand(const Vec3& k, int lam, const PhysicalParams& p,
                                  const DerivedConstants& d, double e_ref,
                                  const GammaOptions& opts, GammaTerms terms) {
    const double denom = gamma_denominator(k, p, d, e_ref);
    const auto axes = frozen_vertex_spin_axes(k, lam, p, d, opts.form_factors);
    complexd jp(0.0, 0.0);
    {
        const CVec3 j = frozen_vertex_current(k, lam, p, d, opts.form_factors);
        for (int ax = 0; ax < 3; ++ax) jp += j(ax) * p.p_total(ax);
    }

    SpinMatrix out;
    switch (terms) {
        case GammaTerms::full: {
            SpinMatrix v = SpinMatrix::Zero();
            if (opts.include_spin) {
                for (int j = 0; j < 3; ++j)
                    if (opts.spin_axes[j]) v += axes[j];
            }
            if (opts.include_current) v += jp * SpinMatrix::Identity();
            out = v.adjoint() * v;
            break;
        }
        case GammaTerms::current_part: {
            const SpinMatrix s = axes[0] + axes[1] + axes[2];
            const SpinMatrix v = s + jp * SpinMatrix::Identity();
            out = v.adjoint() * v - s.adjoint() * s;
            break;
        }
        case GammaTerms::axis3_part: {
            const SpinMatrix s = axes[0] + axes[1] + axes[2];
            const SpinMatrix s12 = axes[0] + axes[1];
            out = s.adjoint() * s - s12.adjoint() * s12;
            break;
        }
        case GammaTerms::cross_12: {
            out = axes[0].adjoint() * axes[1] + axes[1].adjoint() * axes[0];
            break;
        }
    }
    return out / denom;
}

}  // namespace detail

// Mode-sum replica of Gamma over a grid: uses exactly the frozen_vertex data
// and weights, matching second-order perturbation theory of the Fock model
// with the same modes (n_max = 1, quadratic terms off).
inline GammaMatrix gamma_discrete(const std::vector<Mode>& modes, const PhysicalParams& p,
                                  const DerivedConstants& d, double e_ref,
                                  const GammaOptions& opts = {},
                                  GammaTerms terms = GammaTerms::full,
                                  std::optional<GridSpec> spec = std::nullopt) {
    p.validate();
    SpinMatrix sum = SpinMatrix::Zero();
    for (const Mode& m : modes) {
        sum += m.weight * detail::gamma_integrand(m.k, m.lam, p, d, e_ref, opts, terms);
    }
    GammaMatrix g;
    g.matrix = sum;
    if (spec) {
        g.provenance = "discrete(" + std::to_string(spec->n_radial) + "," +
                       std::to_string(spec->n_costheta) + "," + std::to_string(spec->n_phi) + ")";
    } else {
        g.provenance = "discrete";
    }
    g.params = p;
    g.denominator_energy = e_ref;
    return g;
}

// Continuum Gamma: adaptive Gauss panels in the radial variable nested over a
// fixed product rule in the angles (Gauss-Legendre in cos(theta), uniform
// trapezoid in phi, which is exact for the trigonometric-polynomial azimuthal
// dependence at P = 0 and spectrally accurate otherwise). Angular orders are
// doubled until the result is stable to a fraction of the requested tolerance.
inline GammaMatrix gamma_continuum(const PhysicalParams& p, const DerivedConstants& d,
                                   double e_ref, const GammaOptions& opts = {},
                                   GammaTerms terms = GammaTerms::full) {
    p.validate();
    auto evaluate = [&](int n_cos, int n_phi) {
        const QuadratureRule polar = gauss_legendre(n_cos);
        const double w_phi = two_pi / n_phi;
        auto shell = [&](double r) {
            SpinMatrix acc = SpinMatrix::Zero();
            for (int ic = 0; ic < n_cos; ++ic) {
                const double c = polar.nodes[ic];
                const double s = std::sqrt(1.0 - c * c);
                for (int ip = 0; ip < n_phi; ++ip) {
                    const double phi = two_pi * ip / n_phi;
                    const Vec3 k(r * s * std::cos(phi), r * s * std::sin(phi), r * c);
                    SpinMatrix point = SpinMatrix::Zero();
                    for (int lam = 1; lam <= 2; ++lam) {
                        point += detail::gamma_integrand(k, lam, p, d, e_ref, opts, terms);
                    }
                    acc += (polar.weights[ic] * w_phi) * point;
                }
            }
            return SpinMatrix(r * r * acc);
        };
        return adaptive_integrate<SpinMatrix>(shell, 0.0, p.lambda_uv, opts.rel_tol,
                                              &matrix4_norm, opts.max_panels);
    };

    int n_cos = opts.n_costheta;
    int n_phi = opts.n_phi;
    SpinMatrix coarse = evaluate(n_cos, n_phi);
    for (int doubling = 0; doubling < 4; ++doubling) {
        const SpinMatrix fine = evaluate(2 * n_cos, 2 * n_phi);
        const double diff = matrix4_norm(SpinMatrix(fine - coarse));
        const double scale = matrix4_norm(fine);
        if (diff <= 0.25 * opts.rel_tol * scale || scale == 0.0) {
            GammaMatrix g;
            g.matrix = fine;
            g.provenance = "continuum";
            g.params = p;
            g.denominator_energy = e_ref;
            return g;
        }
        coarse = fine;
        n_cos *= 2;
        n_phi *= 2;
    }
    throw BudgetError("gamma_continuum: angular refinement did not stabilize", 0.0);
}

// --------------------------- The constant C0 ---------------------------
//
// At P = 0 the explicit integral for -Gamma_32 / g^2 evaluates to
//   C0 = (4M / (3 pi m_el m_n)) [ L^2/2 - 2 M L + 4 M^2 ln(1 + L/(2M)) ].
// The bracket suffers catastrophic cancellation for L << M, so it is
// evaluated as 4 M^2 f(x) with f(x) = ln(1+x) - x + x^2/2 and x = L/(2M),
// where f is summed as a series for small x. Algebraically identical.

namespace detail {

inline double log1p_minus_x_plus_half_x2(double x) {
    if (x > 0.25) return std::log1p(x) - x + 0.5 * x * x;
    double sum = 0.0;
    double power = x * x * x;  // x^n starting at n = 3
    for (int n = 3; n < 60; ++n) {
        const double term = ((n % 2) ? power : -power) / n;
        sum += term;
        if (std::abs(term) < 1e-30 * std::abs(sum)) break;
        power *= x;
    }
    return sum;
}

}  // namespace detail

inline double c0_closed_form(const PhysicalParams& p, const DerivedConstants& d) {
    if (p.p_total.norm() != 0.0) {
        throw std::invalid_argument("c0_closed_form: closed form requires P = 0; "
                                    "use c0_quadrature for general P");
    }
    const double m_big = d.m_total;
    const double x = p.lambda_uv / (2.0 * m_big);
    const double bracket = 4.0 * m_big * m_big * detail::log1p_minus_x_plus_half_x2(x);
    return 4.0 * m_big / (3.0 * two_pi / 2.0 * p.m_el * p.m_n) * bracket;
}

// Independent quadrature of the explicit integral
//   C0(P) = (1 / 8 pi^2 m_el m_n) int |k| chi^2 / (k^2/2M - k.P/M + |k|)
//           (k3^2/|k|^2 + 1) d^3k,
// radial by adaptive Gauss-Kronrod, polar by a fixed Gauss rule, azimuthal
// analytic (the phi integral of 1/(a - b cos phi - c sin phi) is
// 2 pi / sqrt(a^2 - b^2 - c^2)).
inline double c0_quadrature(const PhysicalParams& p, const DerivedConstants& d,
                            double rel_tol = 1e-13) {
    p.validate();
    const double m_big = d.m_total;
    const QuadratureRule polar = gauss_legendre(48);
    const Vec3 pt = p.p_total;
    auto radial = [&](double k) {
        double inner = 0.0;
        for (std::size_t ic = 0; ic < polar.nodes.size(); ++ic) {
            const double c = polar.nodes[ic];
            const double s = std::sqrt(1.0 - c * c);
            const double a = k * k / (2.0 * m_big) + k - k * c * pt(2) / m_big;
            const double b1 = k * s * pt(0) / m_big;
            const double b2 = k * s * pt(1) / m_big;
            const double disc = a * a - b1 * b1 - b2 * b2;
            if (!(disc > 0.0)) {
                throw std::domain_error("c0_quadrature: denominator loses positivity");
            }
            inner += polar.weights[ic] * (c * c + 1.0) * two_pi / std::sqrt(disc);
        }
        return k * k * k * inner;  // |k| * k^2 Jacobian
    };
    const double integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        radial, 0.0, p.lambda_uv, 15, rel_tol);
    const double pi = two_pi / 2.0;
    return integral / (8.0 * pi * pi * p.m_el * p.m_n);
}

// ------------------------- Splitting analysis -------------------------

struct SplittingReport {
    Eigen::Vector4d gamma_eigenvalues;     // descending
    std::vector<int> multiplicity_pattern; // cluster sizes, relative tol 1e-6
    double predicted_gap;                  // top eigenvalue - mean of the rest
    double singlet_alignment;              // |<top eigenvector, singlet>|^2
};

// Second-order energies are E0 - eig(Gamma), so the largest Gamma eigenvalue
// labels the predicted unique ground state.
inline SplittingReport splitting_prediction(const GammaMatrix& gamma,
                                            double cluster_rel_tol = 1e-6) {
    const double scale = gamma.matrix.cwiseAbs().maxCoeff();
    if ((gamma.matrix - gamma.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1e-300)) {
        throw std::invalid_argument("splitting_prediction: gamma is not Hermitian");
    }
    const SpinMatrix herm = 0.5 * (gamma.matrix + gamma.matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<SpinMatrix> es(herm);
    SplittingReport rep;
    for (int i = 0; i < 4; ++i) rep.gamma_eigenvalues(i) = es.eigenvalues()(3 - i);
    const Eigen::Vector4cd top = es.eigenvectors().col(3);
    rep.singlet_alignment = std::norm(singlet_vector().dot(top));
    rep.predicted_gap = rep.gamma_eigenvalues(0) -
                        (rep.gamma_eigenvalues(1) + rep.gamma_eigenvalues(2) +
                         rep.gamma_eigenvalues(3)) / 3.0;
    const double tol = cluster_rel_tol * std::max(std::abs(rep.gamma_eigenvalues(0)), 1e-300);
    int run = 1;
    for (int i = 1; i < 4; ++i) {
        if (rep.gamma_eigenvalues(i - 1) - rep.gamma_eigenvalues(i) <= tol) {
            ++run;
        } else {
            rep.multiplicity_pattern.push_back(run);
            run = 1;
        }
    }
    rep.multiplicity_pattern.push_back(run);
    return rep;
}

// 4x4 effective matrix from Rayleigh-Schrodinger second order, extracted from
// the assembled operators: sum over one-photon states of B^dag B / (E_t - e_ref)
// where B is the W block coupling the vacuum-spin block to that state. With
// n_max = 1 and quadratic terms off this equals gamma_discrete entrywise.
inline SpinMatrix rs2_effective_matrix(const AssembledOperator& w, const AssembledOperator& h0,
                                       const FockBasis& basis, double e_ref) {
    SpinMatrix eff = SpinMatrix::Zero();
    const Eigen::VectorXd h0diag = h0.real_diagonal();
    for (std::size_t t = 0; t < basis.num_states(); ++t) {
        if (basis.states[t].total() != 1) continue;
        SpinMatrix block;
        for (int sr = 0; sr < 4; ++sr)
            for (int sc = 0; sc < 4; ++sc)
                block(sr, sc) = w.matrix.coeff(static_cast<Eigen::Index>(basis.global(t, sr)),
                                               static_cast<Eigen::Index>(basis.global(0, sc)));
        const double denom = h0diag(static_cast<Eigen::Index>(basis.global(t, 0))) - e_ref;
        eff += block.adjoint() * block / denom;
    }
    return eff;
}

}  // namespace hydrofine
