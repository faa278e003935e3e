// spectrum.hpp — low-lying spectrum computation: dense decomposition below a
// dimension threshold, block Davidson with diagonal preconditioning above it.

#pragma once

#include "hydrofine/fock.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace hydrofine {

struct SpectrumOptions {
    int num_eigenvalues{8};
    int dense_threshold{3000};      // dense decomposition at or below this dimension
    double tol_factor{1e-11};       // residual target, relative to ||H||
    int max_iterations{500};
    double cluster_tol_factor{1e-11};  // eigenvalues within this * ||H|| form one cluster
};

struct SpectrumResult {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXcd eigenvectors; // matching unit columns
    Eigen::VectorXd residuals;     // ||H v - lambda v|| per pair
    double norm_estimate{0.0};     // Gershgorin bound on ||H||
    std::vector<int> cluster_sizes;
    bool dense_path{false};
};

// Gershgorin row-sum bound; for Hermitian H this bounds the spectral norm.
inline double gershgorin_norm(const SparseOp& h) {
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(h.rows());
    for (int col = 0; col < h.outerSize(); ++col) {
        for (SparseOp::InnerIterator it(h, col); it; ++it) {
            row_sums(it.row()) += std::abs(it.value());
        }
    }
    return row_sums.size() ? row_sums.maxCoeff() : 0.0;
}

namespace detail {

inline std::vector<int> cluster_sizes_of(const Eigen::VectorXd& vals, double tol) {
    std::vector<int> sizes;
    int run = 1;
    for (Eigen::Index i = 1; i < vals.size(); ++i) {
        if (vals(i) - vals(i - 1) <= tol) {
            ++run;
        } else {
            sizes.push_back(run);
            run = 1;
        }
    }
    if (vals.size() > 0) sizes.push_back(run);
    return sizes;
}

// Twice-through modified Gram-Schmidt of v against the columns of basis.
inline bool orthonormalize_against(Eigen::VectorXcd& v, const Eigen::MatrixXcd& basis,
                                   Eigen::Index used_cols) {
    for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < used_cols; ++j) {
            v -= basis.col(j).dot(v) * basis.col(j);
        }
    }
    const double n = v.norm();
    if (n < 1e-13) return false;
    v /= n;
    return true;
}

}  // namespace detail

inline SpectrumResult ground_spectrum(const AssembledOperator& op,
                                      const SpectrumOptions& opts = {}) {
    const SparseOp& h = op.matrix;
    const Eigen::Index n = h.rows();
    if (h.cols() != n) throw std::invalid_argument("ground_spectrum: operator must be square");
    const int want = std::min<int>(opts.num_eigenvalues, static_cast<int>(n));
    if (want < 1) throw std::invalid_argument("ground_spectrum: need at least one eigenvalue");

    SpectrumResult result;
    result.norm_estimate = gershgorin_norm(h);
    const double scale = std::max(result.norm_estimate, 1e-300);

    if (n <= opts.dense_threshold) {
        Eigen::MatrixXcd dense(h);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
        if (es.info() != Eigen::Success) {
            throw std::runtime_error("ground_spectrum: dense eigendecomposition failed");
        }
        result.eigenvalues = es.eigenvalues().head(want);
        result.eigenvectors = es.eigenvectors().leftCols(want);
        result.dense_path = true;
    } else {
        // Block Davidson with diagonal preconditioning. The assembled
        // operators are diagonally dominant at small coupling. HV is cached
        // and extended column by column.
        Eigen::VectorXd diag(n);
        for (Eigen::Index i = 0; i < n; ++i) diag(i) = h.coeff(i, i).real();

        const int block = static_cast<int>(std::min<Eigen::Index>(n, std::max(want + 4, 2 * want)));
        const int max_sub = static_cast<int>(std::min<Eigen::Index>(n, std::max(8 * block, 64)));

        // Deterministic start: unit vectors on the smallest diagonal entries.
        std::vector<Eigen::Index> order(n);
        for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return diag(a) < diag(b); });

        Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(n, max_sub);
        Eigen::MatrixXcd hv = Eigen::MatrixXcd::Zero(n, max_sub);
        Eigen::Index used = 0;
        for (int i = 0; i < block; ++i) {
            v(order[i], used) = 1.0;
            hv.col(used) = h * v.col(used);
            ++used;
        }

        Eigen::MatrixXcd ritz_vecs, h_ritz;
        Eigen::VectorXd ritz_vals;
        double worst_residual = std::numeric_limits<double>::infinity();
        const double tol = opts.tol_factor * scale;
        bool converged = false;

        for (int iter = 0; iter < opts.max_iterations && !converged; ++iter) {
            Eigen::MatrixXcd g = v.leftCols(used).adjoint() * hv.leftCols(used);
            g = 0.5 * (g + g.adjoint()).eval();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
            const int keep = static_cast<int>(std::min<Eigen::Index>(block, used));
            ritz_vals = es.eigenvalues().head(keep);
            ritz_vecs = v.leftCols(used) * es.eigenvectors().leftCols(keep);
            h_ritz = hv.leftCols(used) * es.eigenvectors().leftCols(keep);

            worst_residual = 0.0;
            std::vector<Eigen::VectorXcd> directions;
            for (int i = 0; i < keep && i < want + 1; ++i) {
                Eigen::VectorXcd r = h_ritz.col(i) - ritz_vals(i) * ritz_vecs.col(i);
                const double rn = r.norm();
                if (i < want) worst_residual = std::max(worst_residual, rn);
                if (rn > tol) {
                    for (Eigen::Index row = 0; row < n; ++row) {
                        double denom = diag(row) - ritz_vals(i);
                        if (std::abs(denom) < 1e-6 * scale) {
                            denom = (denom < 0 ? -1.0 : 1.0) * 1e-6 * scale;
                        }
                        r(row) /= denom;
                    }
                    directions.push_back(std::move(r));
                }
            }
            if (worst_residual <= tol) {
                converged = true;
                break;
            }

            // Restart from the Ritz vectors when the subspace is full.
            if (used + static_cast<Eigen::Index>(directions.size()) > max_sub) {
                v.setZero();
                hv.setZero();
                v.leftCols(keep) = ritz_vecs;
                hv.leftCols(keep) = h_ritz;
                used = keep;
            }
            Eigen::Index added = 0;
            for (auto& dir : directions) {
                if (used >= max_sub) break;
                if (detail::orthonormalize_against(dir, v, used)) {
                    v.col(used) = dir;
                    hv.col(used) = h * dir;
                    ++used;
                    ++added;
                }
            }
            if (added == 0) {
                // Stagnation fallback: the preconditioned residuals collapsed
                // onto the current subspace; expand along the raw residual of
                // the worst pair instead.
                Eigen::VectorXcd r = h_ritz.col(0) - ritz_vals(0) * ritz_vecs.col(0);
                for (int i = 1; i < keep && i < want; ++i) {
                    Eigen::VectorXcd ri = h_ritz.col(i) - ritz_vals(i) * ritz_vecs.col(i);
                    if (ri.norm() > r.norm()) r = ri;
                }
                if (detail::orthonormalize_against(r, v, used) && used < max_sub) {
                    v.col(used) = r;
                    hv.col(used) = h * r;
                    ++used;
                } else {
                    break;  // converged as far as the arithmetic allows
                }
            }
        }
        if (!converged && worst_residual > 10.0 * tol) {
            std::ostringstream msg;
            msg << "ground_spectrum: Davidson did not converge within the iteration cap; "
                << "achieved residual " << worst_residual << " (target " << tol << ")";
            throw BudgetError(msg.str(), worst_residual);
        }
        result.eigenvalues = ritz_vals.head(want);
        result.eigenvectors = ritz_vecs.leftCols(want);
        result.dense_path = false;
    }

    result.residuals.resize(want);
    for (int i = 0; i < want; ++i) {
        result.residuals(i) = (h * result.eigenvectors.col(i) -
                              result.eigenvalues(i) * result.eigenvectors.col(i))
                                 .norm();
    }
    result.cluster_sizes =
        detail::cluster_sizes_of(result.eigenvalues, opts.cluster_tol_factor * scale);
    return result;
}

// Largest singular value of diag(dl) * A * diag(dr) by Golub-Kahan Lanczos
// bidiagonalization with full reorthogonalization. Robust for clustered
// singular values, where plain power iteration stalls.
inline double weighted_operator_norm(const SparseOp& a, const Eigen::VectorXd& dl,
                                     const Eigen::VectorXd& dr, int max_iter = 160,
                                     double rel_tol = 1e-10) {
    const Eigen::Index rows = a.rows();
    const Eigen::Index cols = a.cols();
    if (rows == 0 || cols == 0) return 0.0;
    if (dl.size() != rows || dr.size() != cols) {
        throw std::invalid_argument("weighted_operator_norm: weight size mismatch");
    }
    auto apply = [&](const Eigen::VectorXcd& v) {
        Eigen::VectorXcd t = v;
        for (Eigen::Index i = 0; i < cols; ++i) t(i) *= dr(i);
        Eigen::VectorXcd u = a * t;
        for (Eigen::Index i = 0; i < rows; ++i) u(i) *= dl(i);
        return u;
    };
    auto apply_adjoint = [&](const Eigen::VectorXcd& u) {
        Eigen::VectorXcd t = u;
        for (Eigen::Index i = 0; i < rows; ++i) t(i) *= dl(i);
        Eigen::VectorXcd v = a.adjoint() * t;
        for (Eigen::Index i = 0; i < cols; ++i) v(i) *= dr(i);
        return v;
    };

    const int k_max = static_cast<int>(std::min<Eigen::Index>(max_iter, std::min(rows, cols)));
    Eigen::MatrixXcd us(rows, k_max), vs(cols, k_max);
    Eigen::VectorXd alpha(k_max), beta(k_max);
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(cols).normalized();
    vs.col(0) = v;
    double sigma_prev = -1.0;
    int k = 0;
    for (; k < k_max; ++k) {
        Eigen::VectorXcd u = apply(vs.col(k));
        if (k > 0) u -= beta(k - 1) * us.col(k - 1);
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < k; ++j) u -= us.col(j).dot(u) * us.col(j);
        alpha(k) = u.norm();
        if (alpha(k) < 1e-300) {
            ++k;
            break;
        }
        us.col(k) = u / alpha(k);
        Eigen::VectorXcd w = apply_adjoint(us.col(k)) - alpha(k) * vs.col(k);
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j <= k; ++j) w -= vs.col(j).dot(w) * vs.col(j);
        beta(k) = w.norm();
        // Converged estimate: largest singular value of the bidiagonal block.
        if ((k + 1) % 8 == 0 || beta(k) < 1e-300 || k + 1 == k_max) {
            Eigen::MatrixXd b = Eigen::MatrixXd::Zero(k + 1, k + 1);
            for (int j = 0; j <= k; ++j) {
                b(j, j) = alpha(j);
                if (j + 1 <= k) b(j, j + 1) = beta(j);
            }
            const double sigma = b.jacobiSvd().singularValues()(0);
            if (sigma_prev >= 0.0 && std::abs(sigma - sigma_prev) <= rel_tol * sigma) {
                return sigma;
            }
            sigma_prev = sigma;
        }
        if (beta(k) < 1e-300) {
            ++k;
            break;
        }
        if (k + 1 < k_max) vs.col(k + 1) = w / beta(k);
    }
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(k, k);
    for (int j = 0; j < k; ++j) {
        b(j, j) = alpha(j);
        if (j + 1 < k) b(j, j + 1) = beta(j);
    }
    return b.jacobiSvd().singularValues()(0);
}

// ------------------------------- Diagnostics --------------------------------

struct StateDiagnostics {
    double nph;                       // photon-number expectation
    Eigen::Matrix4cd spin_rdm;        // reduced density matrix over the spin factor
    double singlet_vacuum_overlap2;   // |<singlet (x) vacuum, v>|^2
};

inline std::vector<StateDiagnostics> observables(const SpectrumResult& result,
                                                 const FockBasis& basis) {
    std::vector<StateDiagnostics> out;
    const Eigen::Vector4cd singlet = singlet_vector();
    for (Eigen::Index col = 0; col < result.eigenvectors.cols(); ++col) {
        StateDiagnostics diag;
        diag.nph = 0.0;
        diag.spin_rdm.setZero();
        const auto& v = result.eigenvectors.col(col);
        for (std::size_t t = 0; t < basis.num_states(); ++t) {
            const int nt = basis.states[t].total();
            Eigen::Vector4cd blockv;
            for (int s = 0; s < 4; ++s) blockv(s) = v(static_cast<Eigen::Index>(basis.global(t, s)));
            diag.nph += nt * blockv.squaredNorm();
            diag.spin_rdm += blockv * blockv.adjoint();
        }
        Eigen::Vector4cd vac_block;
        for (int s = 0; s < 4; ++s) vac_block(s) = v(s);
        diag.singlet_vacuum_overlap2 = std::norm(singlet.dot(vac_block));
        out.push_back(std::move(diag));
    }
    return out;
}

}  // namespace hydrofine
