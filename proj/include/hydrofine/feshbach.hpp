// feshbach.hpp — projections P_rho / Pbar_rho, the Feshbach-Schur operator
// F_rho(eps), its Neumann-series form, and numerical verification of the
// block-reduction identities on the truncated model.

#pragma once

#include "hydrofine/spectrum.hpp"

#include <limits>

namespace hydrofine {

struct FeshbachConfig {
    double rho{0.0};            // explicit infrared scale; <= 0 selects g^{2-2tau}
    double tau{0.1};            // exponent in the default rho rule
    double epsilon{0.0};
    int series_cap{9};          // Neumann terms T_0 .. T_{cap-1}
    double regime_factor{10.0}; // require rho >= factor * g^2
    double rho_max_fraction{0.5};  // require rho <= fraction * |e0|
    int dense_threshold{3000};
    double cluster_tol_factor{1e-11};
};

inline double feshbach_rho(const PhysicalParams& p, const DerivedConstants& d,
                           const FeshbachConfig& cfg) {
    const double rho = cfg.rho > 0.0 ? cfg.rho : std::pow(std::abs(p.g), 2.0 - 2.0 * cfg.tau);
    if (rho < cfg.regime_factor * p.g * p.g) {
        throw ConfigError("feshbach: regime condition rho >= " +
                          std::to_string(cfg.regime_factor) + " g^2 violated");
    }
    if (rho > cfg.rho_max_fraction * std::abs(d.e0)) {
        throw ConfigError("feshbach: rho exceeds the configured fraction of |e0|");
    }
    return rho;
}

// P_rho selects occupation states with photon energy <= rho; all four spin
// components are kept. The internal hydrogen factor is the identity in the
// frozen-core truncation.
struct ProjectorSplit {
    std::vector<Eigen::Index> inside;   // global indices in range(P_rho)
    std::vector<Eigen::Index> outside;  // complement
    double rho{0.0};
};

inline ProjectorSplit project_p_rho(const FockBasis& basis, double rho) {
    ProjectorSplit split;
    split.rho = rho;
    for (std::size_t t = 0; t < basis.num_states(); ++t) {
        auto& side = (basis.eph[t] <= rho) ? split.inside : split.outside;
        for (int s = 0; s < 4; ++s) side.push_back(static_cast<Eigen::Index>(basis.global(t, s)));
    }
    return split;
}

inline SparseOp projector_matrix(const FockBasis& basis, const ProjectorSplit& split) {
    std::vector<Triplet> trips;
    trips.reserve(split.inside.size());
    for (Eigen::Index i : split.inside) trips.emplace_back(i, i, complexd(1.0, 0.0));
    SparseOp pr(static_cast<Eigen::Index>(basis.dim()), static_cast<Eigen::Index>(basis.dim()));
    pr.setFromTriplets(trips.begin(), trips.end());
    return pr;
}

struct FeshbachResult {
    Eigen::MatrixXcd f_matrix;  // F_rho(eps) on range(P_rho)
    double rho{0.0};
    double epsilon{0.0};
    // series route
    std::vector<Eigen::MatrixXcd> terms;
    std::vector<double> term_norms;
    std::vector<double> series_ratios;  // per-step ratios between consecutive nonzero terms
    double observed_ratio{std::numeric_limits<double>::quiet_NaN()};
    bool series_divergent{false};
    // residuals
    double residual_identity{std::numeric_limits<double>::quiet_NaN()};
    double residual_identity_left{std::numeric_limits<double>::quiet_NaN()};
    double residual_kernel{std::numeric_limits<double>::quiet_NaN()};
    double pbar_gap{std::numeric_limits<double>::quiet_NaN()};
};

namespace detail {

inline Eigen::MatrixXcd dense_submatrix(const Eigen::MatrixXcd& m,
                                        const std::vector<Eigen::Index>& rows,
                                        const std::vector<Eigen::Index>& cols) {
    Eigen::MatrixXcd out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
    return out;
}

inline SparseOp sparse_submatrix(const SparseOp& m, const std::vector<Eigen::Index>& rows,
                                 const std::vector<Eigen::Index>& cols) {
    std::vector<Eigen::Index> row_map(m.rows(), -1), col_map(m.cols(), -1);
    for (std::size_t i = 0; i < rows.size(); ++i) row_map[rows[i]] = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < cols.size(); ++j) col_map[cols[j]] = static_cast<Eigen::Index>(j);
    std::vector<Triplet> trips;
    for (int outer = 0; outer < m.outerSize(); ++outer) {
        for (SparseOp::InnerIterator it(m, outer); it; ++it) {
            const Eigen::Index r = row_map[it.row()];
            const Eigen::Index c = col_map[it.col()];
            if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
        }
    }
    SparseOp out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

// Solve (A) X = B for Hermitian positive definite A, dense or CG depending on size.
inline Eigen::MatrixXcd hermitian_solve(const SparseOp& a, const Eigen::MatrixXcd& b,
                                        int dense_threshold) {
    if (a.rows() <= dense_threshold) {
        Eigen::MatrixXcd adense(a);
        Eigen::LDLT<Eigen::MatrixXcd> ldlt(adense);
        if (ldlt.info() != Eigen::Success) {
            throw std::runtime_error("feshbach: LDLT factorization failed");
        }
        return ldlt.solve(b);
    }
    Eigen::ConjugateGradient<SparseOp, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-14);
    cg.setMaxIterations(50000);
    cg.compute(a);
    Eigen::MatrixXcd x(b.rows(), b.cols());
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
        x.col(c) = cg.solve(b.col(c));
        if (cg.info() != Eigen::Success) {
            throw BudgetError("feshbach: conjugate gradient did not converge", cg.error());
        }
    }
    return x;
}

inline double min_eigenvalue(const SparseOp& a, int dense_threshold) {
    if (a.rows() == 0) return std::numeric_limits<double>::infinity();
    AssembledOperator op;
    op.matrix = a;
    op.label = "block";
    SpectrumOptions sopts;
    sopts.num_eigenvalues = 1;
    sopts.dense_threshold = dense_threshold;
    return ground_spectrum(op, sopts).eigenvalues(0);
}

}  // namespace detail

// F_rho(eps) assembled by direct inversion of the Pbar block:
//   F = (H0 - E_g + eps) P_rho + P_rho W P_rho
//       - P_rho W [ Pbar H_g Pbar - E_g + eps ]^{-1} Pbar W P_rho.
// Since H0 is diagonal, H_g restricted to the (inside, inside) block already
// equals the first two pieces. With eps = 0 the Pbar block must have a
// verified spectral gap above E_g; it is computed and reported either way.
inline FeshbachResult feshbach_direct(const AssembledOperator& hg, const FockBasis& basis,
                                      double e_g, double rho, double epsilon,
                                      const FeshbachConfig& cfg = {},
                                      const SpectrumResult* ground = nullptr) {
    if (epsilon < 0.0) throw std::invalid_argument("feshbach_direct: epsilon must be >= 0");
    const ProjectorSplit split = project_p_rho(basis, rho);
    const auto& in = split.inside;
    const auto& out = split.outside;
    const complexd shift(e_g - epsilon, 0.0);

    FeshbachResult result;
    result.rho = rho;
    result.epsilon = epsilon;

    SparseOp jj = detail::sparse_submatrix(hg.matrix, out, out);
    for (Eigen::Index i = 0; i < jj.rows(); ++i) jj.coeffRef(i, i) -= shift;
    jj.makeCompressed();

    if (epsilon == 0.0 && out.size() > 0) {
        result.pbar_gap = detail::min_eigenvalue(
                              detail::sparse_submatrix(hg.matrix, out, out), cfg.dense_threshold) -
                          e_g;
        if (!(result.pbar_gap > 0.0)) {
            throw std::runtime_error(
                "feshbach_direct: Pbar block is not invertible at eps = 0; "
                "minimum eigenvalue lies " +
                std::to_string(result.pbar_gap) + " below/at E_g");
        }
    }

    Eigen::MatrixXcd f(in.size(), in.size());
    {
        const SparseOp hg_ii = detail::sparse_submatrix(hg.matrix, in, in);
        f = Eigen::MatrixXcd(hg_ii);
        for (std::size_t i = 0; i < in.size(); ++i) f(i, i) -= shift;
    }
    if (!out.empty()) {
        const SparseOp w_oi = detail::sparse_submatrix(hg.matrix, out, in);
        const SparseOp w_io = detail::sparse_submatrix(hg.matrix, in, out);
        const Eigen::MatrixXcd x =
            detail::hermitian_solve(jj, Eigen::MatrixXcd(w_oi), cfg.dense_threshold);
        f -= Eigen::MatrixXcd(w_io) * x;
    }
    result.f_matrix = f;

    if (epsilon > 0.0) {
        // Residual of P_rho [H_g - E_g + eps]^{-1} P_rho F = P_rho (and mirrored).
        SparseOp full = hg.matrix;
        for (Eigen::Index i = 0; i < full.rows(); ++i) full.coeffRef(i, i) -= shift;
        full.makeCompressed();
        Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(full.rows(), in.size());
        for (std::size_t i = 0; i < in.size(); ++i) rhs(in[i], i) = 1.0;
        const Eigen::MatrixXcd y = detail::hermitian_solve(full, rhs, cfg.dense_threshold);
        Eigen::MatrixXcd g(in.size(), in.size());
        for (std::size_t i = 0; i < in.size(); ++i) g.row(i) = y.row(in[i]);
        const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(in.size(), in.size());
        result.residual_identity = operator_norm(g * f - eye);
        result.residual_identity_left = operator_norm(f * g - eye);
    } else if (ground != nullptr) {
        // Kernel identity F_rho(0) P_rho 1_{E_g}(H_g) P_rho = 0 against the
        // eigensolver's ground cluster.
        const double tol = cfg.cluster_tol_factor * std::max(ground->norm_estimate, 1e-300);
        int cluster = 1;
        while (cluster < ground->eigenvalues.size() &&
               ground->eigenvalues(cluster) - ground->eigenvalues(0) <= tol) {
            ++cluster;
        }
        Eigen::MatrixXcd v_in(in.size(), cluster);
        for (std::size_t i = 0; i < in.size(); ++i)
            for (int c = 0; c < cluster; ++c) v_in(i, c) = ground->eigenvectors(in[i], c);
        result.residual_kernel = operator_norm(f * (v_in * v_in.adjoint()));
    }
    return result;
}

// Same F via the Neumann series through cfg.series_cap terms:
//   F = (H_g - E_g + eps)|_II
//       - sum_n W_IO R0 (-W_OO R0)^n W_OI,   R0 = [H0 - E_g + eps]^{-1}|_OO.
// Reports per-term norms; a per-step ratio >= 1 flags divergence (reported,
// not fatal).
inline FeshbachResult feshbach_series(const AssembledOperator& hg, const AssembledOperator& h0,
                                      const FockBasis& basis, double e_g, double rho,
                                      double epsilon, const FeshbachConfig& cfg = {}) {
    const ProjectorSplit split = project_p_rho(basis, rho);
    const auto& in = split.inside;
    const auto& out = split.outside;
    const complexd shift(e_g - epsilon, 0.0);

    FeshbachResult result;
    result.rho = rho;
    result.epsilon = epsilon;

    const SparseOp w = SparseOp(hg.matrix - h0.matrix);
    Eigen::MatrixXcd f(in.size(), in.size());
    {
        const SparseOp hg_ii = detail::sparse_submatrix(hg.matrix, in, in);
        f = Eigen::MatrixXcd(hg_ii);
        for (std::size_t i = 0; i < in.size(); ++i) f(i, i) -= shift;
    }

    if (!out.empty() && cfg.series_cap > 0) {
        const Eigen::VectorXd h0diag = h0.real_diagonal();
        Eigen::VectorXd r0(out.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double denom = h0diag(out[i]) - e_g + epsilon;
            if (!(denom > 0.0)) {
                throw std::domain_error("feshbach_series: H0 - E_g is not positive on Pbar");
            }
            r0(i) = 1.0 / denom;
        }
        const SparseOp w_oi = detail::sparse_submatrix(w, out, in);
        const SparseOp w_io = detail::sparse_submatrix(w, in, out);
        const SparseOp w_oo = detail::sparse_submatrix(w, out, out);

        Eigen::MatrixXcd x = Eigen::MatrixXcd(w_oi);
        for (Eigen::Index i = 0; i < x.rows(); ++i) x.row(i) *= r0(i);
        for (int n = 0; n < cfg.series_cap; ++n) {
            const Eigen::MatrixXcd term = Eigen::MatrixXcd(w_io) * x;
            result.terms.push_back(term);
            result.term_norms.push_back(operator_norm(term));
            f -= term;
            if (n + 1 < cfg.series_cap) {
                Eigen::MatrixXcd next = w_oo * x;
                for (Eigen::Index i = 0; i < next.rows(); ++i) next.row(i) *= -r0(i);
                x = std::move(next);
            }
        }
        // Per-step geometric ratios between consecutive nonzero terms, and a
        // least-squares fit of log ||T_n|| over all nonzero terms.
        std::vector<double> idx, lognorm;
        for (std::size_t n = 0; n < result.term_norms.size(); ++n) {
            if (result.term_norms[n] > 0.0) {
                idx.push_back(static_cast<double>(n));
                lognorm.push_back(std::log(result.term_norms[n]));
            }
        }
        for (std::size_t i = 1; i < idx.size(); ++i) {
            const double step = idx[i] - idx[i - 1];
            result.series_ratios.push_back(
                std::exp((lognorm[i] - lognorm[i - 1]) / step));
        }
        if (idx.size() >= 2) {
            result.observed_ratio = std::exp(fit_slope(idx, lognorm));
        }
        for (double r : result.series_ratios) {
            if (r >= 1.0) result.series_divergent = true;
        }
    }
    result.f_matrix = f;
    return result;
}

// ||F_rho(0)|| across a rho sweep (with the fitted constant ||F||/rho), and
// the eps -> 0 limit gap ||F_rho(eps) - F_rho(0)|| on an eps grid.
struct F0NormReport {
    std::vector<double> rhos;
    std::vector<double> f0_norms;
    std::vector<double> constants;  // f0_norms / rho
    std::vector<double> eps_values;
    std::vector<double> eps_gaps;
    double rho_for_eps{0.0};
};

inline F0NormReport f0_norm_check(const AssembledOperator& hg, const FockBasis& basis,
                                  double e_g, const std::vector<double>& rhos,
                                  const std::vector<double>& eps_values, double rho_for_eps,
                                  const FeshbachConfig& cfg = {}) {
    F0NormReport report;
    for (double rho : rhos) {
        const FeshbachResult r = feshbach_direct(hg, basis, e_g, rho, 0.0, cfg);
        report.rhos.push_back(rho);
        report.f0_norms.push_back(operator_norm(r.f_matrix));
        report.constants.push_back(report.f0_norms.back() / rho);
    }
    report.rho_for_eps = rho_for_eps;
    const FeshbachResult f0 = feshbach_direct(hg, basis, e_g, rho_for_eps, 0.0, cfg);
    for (double eps : eps_values) {
        const FeshbachResult fe = feshbach_direct(hg, basis, e_g, rho_for_eps, eps, cfg);
        report.eps_values.push_back(eps);
        report.eps_gaps.push_back(operator_norm(fe.f_matrix - f0.f_matrix));
    }
    return report;
}

}  // namespace hydrofine
