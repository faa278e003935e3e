// checks.hpp — the acceptance and invariant suite. Each criterion runs a
// pinned configuration and reports one result per item; the CLI `check`
// command and the acceptance test binary share this engine.

#pragma once

#include "hydrofine/feshbach.hpp"
#include "hydrofine/gamma.hpp"

#include <chrono>
#include <numeric>

namespace hydrofine {

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

struct CriterionReport {
    std::string name;
    std::vector<CheckResult> items;
    double seconds{0.0};
    double budget_seconds{0.0};

    bool pass() const {
        for (const auto& item : items) {
            if (!item.pass) return false;
        }
        return true;
    }
};

namespace checks {

inline PhysicalParams standard_params(double g = 0.02) {
    PhysicalParams p;  // defaults: m_el = 1, m_n = 1836.152, Lambda = 1, P = 0
    p.g = g;
    return p;
}

inline std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

inline CheckResult make(const std::string& name, bool pass, const std::string& detail) {
    return {name, pass, detail};
}

// Criterion 1: closed-form C0 against the independent adaptive quadrature of
// the explicit integral; both positive; <= 1e-10 relative at defaults.
inline CriterionReport criterion_c0() {
    CriterionReport rep;
    rep.name = "C0 cross-validation";
    rep.budget_seconds = 1.0;
    const auto t0 = std::chrono::steady_clock::now();
    const PhysicalParams p = standard_params();
    const DerivedConstants d = derive_constants(p);
    const double closed = c0_closed_form(p, d);
    const double quad = c0_quadrature(p, d);
    const double rel = std::abs(closed - quad) / std::abs(quad);
    rep.items.push_back(make("closed form vs adaptive quadrature <= 1e-10", rel <= 1e-10,
                             "closed=" + num(closed) + " quad=" + num(quad) +
                                 " rel=" + num(rel)));
    rep.items.push_back(make("C0 > 0", closed > 0.0 && quad > 0.0, "C0=" + num(closed)));
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.items.push_back(make("runtime < 1 s", rep.seconds < 1.0, num(rep.seconds) + " s"));
    return rep;
}

// Criterion 2: Gamma_32 = -C0 g^2 with F = 1 and denominator E0, and the
// structural vanishing of the h^A, h^B_3, and h^B_1 h^B_2 cross contributions.
inline CriterionReport criterion_gamma32() {
    CriterionReport rep;
    rep.name = "Gamma_32 reproduction";
    rep.budget_seconds = 10.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (double g : {0.01, 0.02}) {
        const PhysicalParams p = standard_params(g);
        const DerivedConstants d = derive_constants(p);
        const double c0 = c0_closed_form(p, d);
        GammaOptions opts;
        opts.form_factors = false;
        const GammaMatrix gamma = gamma_continuum(p, d, d.e0_fiber, opts);
        const complexd g32 = gamma.matrix(2, 1);
        const double target = -c0 * g * g;
        const double rel = std::abs(g32.real() - target) / std::abs(target);
        rep.items.push_back(make("Gamma_32 = -C0 g^2 (g=" + num(g) + ", F=1) rel <= 1e-6",
                                 rel <= 1e-6 && std::abs(g32.imag()) <= 1e-6 * std::abs(target),
                                 "Gamma_32=" + num(g32.real()) + " target=" + num(target) +
                                     " rel=" + num(rel)));
    }
    // Term isolation at small nonzero P with form factors on; each isolated
    // (3,2) entry must vanish to 1e-12 relative to the C0 g^2 scale.
    {
        PhysicalParams p = standard_params(0.02);
        p.p_total = Vec3(0.4, 0.3, 0.2);
        const DerivedConstants d = derive_constants(p);
        const double scale = c0_closed_form(standard_params(0.02),
                                            derive_constants(standard_params(0.02))) *
                             p.g * p.g;
        const struct {
            GammaTerms terms;
            const char* label;
        } kinds[] = {{GammaTerms::current_part, "h^A terms"},
                     {GammaTerms::axis3_part, "h^B_3 terms"},
                     {GammaTerms::cross_12, "h^B_1 h^B_2 cross terms"}};
        for (const auto& kind : kinds) {
            const GammaMatrix iso = gamma_continuum(p, d, d.e0_fiber, {}, kind.terms);
            const double entry = std::abs(iso.matrix(2, 1));
            rep.items.push_back(make(std::string(kind.label) + " contribute 0 to (3,2)",
                                     entry <= 1e-12 * scale,
                                     "|entry|=" + num(entry) + " vs 1e-12*scale=" +
                                         num(1e-12 * scale)));
        }
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.items.push_back(make("runtime < 10 s", rep.seconds < 10.0, num(rep.seconds) + " s"));
    return rep;
}

// Criterion 3: eigenvalue pattern {1, 3} of the continuum Gamma at P = 0 with
// singlet alignment >= 0.999; the predicted ground state is simple.
inline CriterionReport criterion_splitting() {
    CriterionReport rep;
    rep.name = "Splitting structure";
    rep.budget_seconds = 10.0;
    const auto t0 = std::chrono::steady_clock::now();
    const PhysicalParams p = standard_params();
    const DerivedConstants d = derive_constants(p);
    const SplittingReport sp = splitting_prediction(gamma_continuum(p, d, d.e0_fiber));
    const bool pattern_13 =
        sp.multiplicity_pattern.size() == 2 && sp.multiplicity_pattern[0] == 1 &&
        sp.multiplicity_pattern[1] == 3;
    std::string pattern = "{";
    for (std::size_t i = 0; i < sp.multiplicity_pattern.size(); ++i) {
        pattern += (i ? "," : "") + std::to_string(sp.multiplicity_pattern[i]);
    }
    pattern += "}";
    rep.items.push_back(make("eigenvalue pattern {1,3}", pattern_13, "pattern=" + pattern));
    rep.items.push_back(make("singlet alignment >= 0.999", sp.singlet_alignment >= 0.999,
                             "alignment=" + num(sp.singlet_alignment)));
    rep.items.push_back(make("predicted ground state simple (gap > 0)", sp.predicted_gap > 0.0,
                             "gap=" + num(sp.predicted_gap)));
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.items.push_back(make("runtime < 10 s", rep.seconds < 10.0, num(rep.seconds) + " s"));
    return rep;
}

struct SweepPoint {
    double g;
    double e0;
    double eg;
    double gap_h;
    double gap_gamma;
    double nph;
    double overlap2;
};

// Shared sweep used by criteria 4 and 6(c,d): grid (6,8,8), n_max = 1,
// quadratic off, P = 0, g in {0.02, 0.04, 0.08}.
inline std::vector<SweepPoint> equivalence_sweep() {
    std::vector<SweepPoint> points;
    const GridSpec spec{6, 8, 8};
    const auto modes = build_grid(spec, standard_params().lambda_uv);
    const FockBasis basis = enumerate_basis(modes, 1);
    SpectrumOptions sopt;
    sopt.num_eigenvalues = 8;
    sopt.tol_factor = 1e-13;
    for (double g : {0.02, 0.04, 0.08}) {
        const PhysicalParams p = standard_params(g);
        const DerivedConstants d = derive_constants(p);
        const AssembledOperator hg = build_hg(basis, p, d);
        const SpectrumResult res = ground_spectrum(hg, sopt);
        const auto diag = observables(res, basis);
        const SplittingReport sp =
            splitting_prediction(gamma_discrete(modes, p, d, d.e0_fiber, {}, GammaTerms::full, spec));
        SweepPoint pt;
        pt.g = g;
        pt.e0 = d.e0_fiber;
        pt.eg = res.eigenvalues(0);
        pt.gap_h = (res.eigenvalues(1) + res.eigenvalues(2) + res.eigenvalues(3)) / 3.0 -
                   res.eigenvalues(0);
        pt.gap_gamma = sp.predicted_gap;
        pt.nph = diag[0].nph;
        pt.overlap2 = diag[0].singlet_vacuum_overlap2;
        points.push_back(pt);
    }
    return points;
}

// Criterion 4: lowest-cluster gap of H_g matches the eigen-gap of the
// grid-matched discrete Gamma; the residual scales at least like g^2.9; the
// ground state stays aligned with singlet (x) vacuum.
inline CriterionReport criterion_equivalence(const std::vector<SweepPoint>& sweep,
                                             double sweep_seconds) {
    CriterionReport rep;
    rep.name = "Perturbation/diagonalization equivalence";
    rep.budget_seconds = 120.0;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> gs, residuals;
    for (const SweepPoint& pt : sweep) {
        gs.push_back(pt.g);
        residuals.push_back(std::abs(pt.gap_h - pt.gap_gamma));
        rep.items.push_back(make("singlet (x) vacuum overlap^2 >= 0.99 at g=" + num(pt.g),
                                 pt.overlap2 >= 0.99, "overlap^2=" + num(pt.overlap2)));
    }
    const double rel_dev = std::abs(sweep[0].gap_h - sweep[0].gap_gamma) / sweep[0].gap_gamma;
    rep.items.push_back(make("gap deviation <= 10% at g=0.02", rel_dev <= 0.10,
                             "gap_H=" + num(sweep[0].gap_h) + " gap_Gamma=" +
                                 num(sweep[0].gap_gamma) + " rel=" + num(rel_dev)));
    const double slope = fit_loglog_slope(gs, residuals);
    rep.items.push_back(make("residual scaling exponent >= 2.9", slope >= 2.9,
                             "fitted exponent=" + num(slope)));
    rep.seconds = sweep_seconds +
                  std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.items.push_back(make("runtime < 2 min", rep.seconds < 120.0, num(rep.seconds) + " s"));
    return rep;
}

// Criterion 5: Feshbach identity suite at rho = g^{2-2 tau}, tau = 0.1. The
// rho rule and the regime guard rho >= 10 g^2 are jointly satisfiable only
// for g <= 1e-5, so the suite runs at g = 5e-6 (the identities are exact at
// the truncated level for any g, and the series terms are homogeneous in g).
inline CriterionReport criterion_feshbach() {
    CriterionReport rep;
    rep.name = "Feshbach identity suite";
    rep.budget_seconds = 120.0;
    const auto t0 = std::chrono::steady_clock::now();

    const GridSpec spec{2, 2, 2};
    const auto modes = build_grid(spec, standard_params().lambda_uv);
    const FockBasis basis = enumerate_basis(modes, 2);
    FeshbachConfig fcfg;

    auto solve_at = [&](double g) {
        const PhysicalParams p = standard_params(g);
        const DerivedConstants d = derive_constants(p);
        SpectrumOptions sopt;
        sopt.num_eigenvalues = 6;
        const AssembledOperator h0 = build_h0(basis, p, d);
        const AssembledOperator hg = build_hg(basis, p, d);
        const SpectrumResult res = ground_spectrum(hg, sopt);
        return std::tuple<PhysicalParams, DerivedConstants, AssembledOperator, AssembledOperator,
                          SpectrumResult>(p, d, h0, hg, res);
    };

    const double g = 5e-6;
    auto [p, d, h0, hg, res] = solve_at(g);
    const double e_g = res.eigenvalues(0);
    const double rho = feshbach_rho(p, d, fcfg);

    for (double eps : {1e-2, 1e-3}) {
        const FeshbachResult fr = feshbach_direct(hg, basis, e_g, rho, eps, fcfg);
        const double worst = std::max(fr.residual_identity, fr.residual_identity_left);
        rep.items.push_back(make("residual_identity <= 1e-8 at eps=" + num(eps), worst <= 1e-8,
                                 "right=" + num(fr.residual_identity) + " left=" +
                                     num(fr.residual_identity_left)));
    }
    const FeshbachResult f0 = feshbach_direct(hg, basis, e_g, rho, 0.0, fcfg, &res);
    rep.items.push_back(make("residual_kernel <= 1e-8 at eps=0", f0.residual_kernel <= 1e-8,
                             "residual=" + num(f0.residual_kernel) + " pbar_gap=" +
                                 num(f0.pbar_gap)));

    const FeshbachResult fs = feshbach_series(hg, h0, basis, e_g, rho, 0.0, fcfg);
    bool ratios_below_one = !fs.series_ratios.empty() && !fs.series_divergent;
    rep.items.push_back(make("Neumann per-step ratios < 1 (geometric)", ratios_below_one,
                             "observed_ratio=" + num(fs.observed_ratio)));
    // Partial sums approach the direct inversion monotonically down to the
    // arithmetic floor.
    {
        const double fnorm = operator_norm(f0.f_matrix);
        Eigen::MatrixXcd partial = fs.f_matrix;
        for (const auto& term : fs.terms) partial += term;  // back to the n = -1 baseline
        std::vector<double> dist;
        for (const auto& term : fs.terms) {
            partial -= term;
            dist.push_back(operator_norm(partial - f0.f_matrix));
        }
        const double floor = 1e-10 * fnorm;
        bool decreasing = true;
        for (std::size_t i = 1; i < dist.size(); ++i) {
            if (dist[i] > dist[i - 1] && dist[i - 1] > floor) decreasing = false;
        }
        rep.items.push_back(make("series matches direct inversion",
                                 decreasing && dist.back() <= floor,
                                 "final ||series-direct||=" + num(dist.back()) + " floor=" +
                                     num(floor)));
    }
    // Halving g at fixed rho halves the observed per-term ratio.
    {
        auto [p2, d2, h02, hg2, res2] = solve_at(g / 2.0);
        const FeshbachResult fs2 =
            feshbach_series(hg2, h02, basis, res2.eigenvalues(0), rho, 0.0, fcfg);
        const double halving = fs.observed_ratio / fs2.observed_ratio;
        rep.items.push_back(make("observed ratio halves when g halves", 1.8 <= halving && halving <= 2.2,
                                 "ratio(g)/ratio(g/2)=" + num(halving)));
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.items.push_back(make("runtime < 2 min", rep.seconds < 120.0, num(rep.seconds) + " s"));
    return rep;
}

// Criterion 6: quantitative checks of the operator estimates behind the
// reduction: photon-energy domination, ladder bounds, energy and photon-number
// stability in g, and the W_g relative-bound scalings.
inline CriterionReport criterion_bounds(const std::vector<SweepPoint>& sweep) {
    CriterionReport rep;
    rep.name = "Appendix bound suite";
    rep.budget_seconds = 300.0;
    const auto t0 = std::chrono::steady_clock::now();
    const PhysicalParams base = standard_params();

    // (a) H_ph <= 2 (H0 - E0) for |P| <= 0.1 M.
    {
        bool ok = true;
        double worst = 0.0;
        const double pc = 0.1 * base.total_mass();
        const std::array<Vec3, 3> ps = {Vec3(0, 0, 0), Vec3(0, 0, pc),
                                        Vec3(pc / std::sqrt(3.0), pc / std::sqrt(3.0),
                                             pc / std::sqrt(3.0))};
        for (const GridSpec spec : {GridSpec{6, 8, 8}, GridSpec{2, 2, 2}}) {
            const auto modes = build_grid(spec, base.lambda_uv);
            const FockBasis basis = enumerate_basis(modes, spec.n_radial == 2 ? 2 : 1);
            for (const Vec3& pvec : ps) {
                PhysicalParams p = base;
                p.p_total = pvec;
                const DerivedConstants d = derive_constants(p);
                const Eigen::VectorXd h0d = build_h0(basis, p, d).real_diagonal();
                const Eigen::VectorXd hphd = build_hph(basis).real_diagonal();
                const double m =
                    (2.0 * (h0d.array() - d.e0_fiber) - hphd.array()).minCoeff();
                worst = std::min(worst, m);
                ok = ok && m >= -1e-10;
            }
        }
        rep.items.push_back(
            make("min eig(2(H0-E0) - Hph) >= -1e-10 for |P| <= 0.1M", ok, "worst=" + num(worst)));
    }

    // (b) discretized a(f) norm bounds within the stated constants + 1e-10.
    {
        const GridSpec spec{2, 2, 2};
        const auto modes = build_grid(spec, base.lambda_uv);
        const FockBasis basis = enumerate_basis(modes, 2);
        const Eigen::Index n = static_cast<Eigen::Index>(basis.dim());
        Eigen::VectorXd ninv = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd eph(n);
        for (std::size_t t = 0; t < basis.num_states(); ++t) {
            const int nt = basis.states[t].total();
            for (int s = 0; s < 4; ++s) {
                const Eigen::Index i = static_cast<Eigen::Index>(basis.global(t, s));
                ninv(i) = nt > 0 ? 1.0 / std::sqrt(static_cast<double>(nt)) : 0.0;
                eph(i) = basis.eph[t];
            }
        }
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);

        std::vector<std::pair<std::string, Eigen::VectorXcd>> fs;
        const int m_count = basis.num_modes();
        Eigen::VectorXcd f1(m_count), f2(m_count), f3(m_count), f4(m_count);
        for (int m = 0; m < m_count; ++m) {
            const Mode& mode = basis.modes[m];
            f1(m) = h_B(Vec3::Zero(), mode.k, mode.lam, base.lambda_uv).norm();
            f2(m) = 1.0;
            f3(m) = 1.0 / std::sqrt(mode.k.norm());
            f4(m) = h_A(Vec3::Zero(), mode.k, mode.lam, base.lambda_uv)(0);
        }
        fs.emplace_back("|h^B|", f1);
        fs.emplace_back("1", f2);
        fs.emplace_back("|k|^-1/2", f3);
        fs.emplace_back("h^A_1", f4);

        bool all_ok = true;
        std::string detail;
        for (const auto& [label, f] : fs) {
            const SparseOp af = annihilation_operator(basis, f);
            const double fn = mode_norm(basis, f);
            Eigen::VectorXcd fk = f;
            for (int m = 0; m < m_count; ++m) fk(m) /= std::sqrt(basis.modes[m].k.norm());
            const double fkn = mode_norm(basis, fk);

            const double n1 = weighted_operator_norm(af, ones, ninv);
            const double n2 = weighted_operator_norm(af, ninv, ones);
            bool ok = n1 <= fn + 1e-10 && n2 <= std::sqrt(2.0) * fn + 1e-10;
            for (double rho : {0.1, 0.01}) {
                Eigen::VectorXd hinv(n);
                for (Eigen::Index i = 0; i < n; ++i) hinv(i) = 1.0 / std::sqrt(eph(i) + rho);
                const double n3 = weighted_operator_norm(af, ones, hinv);
                const double n4 = weighted_operator_norm(af, hinv, ones);
                ok = ok && n3 <= fkn + 1e-10 &&
                     n4 <= fkn + fn / std::sqrt(rho) + 1e-10;
            }
            all_ok = all_ok && ok;
            if (!ok) detail += label + " violated; ";
        }
        rep.items.push_back(make("a(f) ladder bounds within stated constants + 1e-10", all_ok,
                                 all_ok ? "4 kernels x 6 bounds" : detail));
    }

    // (c) E_g <= E0 <= E_g + C g^2 with a stable constant.
    {
        std::vector<double> ratios;
        bool order_ok = true;
        for (const SweepPoint& pt : sweep) {
            order_ok = order_ok && pt.eg <= pt.e0 + 1e-12;
            ratios.push_back((pt.e0 - pt.eg) / (pt.g * pt.g));
        }
        const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size();
        double dev = 0.0;
        for (double r : ratios) dev = std::max(dev, std::abs(r - mean) / mean);
        rep.items.push_back(make("E_g <= E0 and (E0-E_g)/g^2 stable to 20%",
                                 order_ok && dev <= 0.20,
                                 "(E0-Eg)/g^2 mean=" + num(mean) + " max dev=" + num(dev)));
    }

    // (d) <N_ph>/g^2 stable to 20% across the sweep.
    {
        std::vector<double> ratios;
        for (const SweepPoint& pt : sweep) ratios.push_back(pt.nph / (pt.g * pt.g));
        const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size();
        double dev = 0.0;
        for (double r : ratios) dev = std::max(dev, std::abs(r - mean) / mean);
        rep.items.push_back(make("<N_ph>/g^2 stable to 20%", dev <= 0.20,
                                 "mean=" + num(mean) + " max dev=" + num(dev)));
    }

    // (e) W_g relative-bound scaling exponents on a (8,2,2) n_max=2 basis with
    // quadratic terms on; rho sweep pinned just below the distinct one-photon
    // radial energies so the infrared edge tracks rho.
    {
        const GridSpec spec{8, 2, 2};
        const auto modes = build_grid(spec, base.lambda_uv);
        const FockBasis basis = enumerate_basis(modes, 2);
        std::vector<double> krad;
        for (const Mode& m : modes) krad.push_back(m.k.norm());
        std::sort(krad.begin(), krad.end());
        krad.erase(std::unique(krad.begin(), krad.end(),
                               [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                   krad.end());
        WOptions wopt;
        wopt.include_quadratic = true;

        struct Norms {
            double t1, t2, t3;
        };
        auto norms_at = [&](double g, double rho) {
            const PhysicalParams p = standard_params(g);
            const DerivedConstants d = derive_constants(p);
            const AssembledOperator h0 = build_h0(basis, p, d);
            const AssembledOperator w = build_w(basis, p, d, wopt);
            AssembledOperator hg;
            hg.matrix = h0.matrix + w.matrix;
            hg.label = "Hg";
            SpectrumOptions sopt;
            sopt.num_eigenvalues = 2;
            const double e_g = ground_spectrum(hg, sopt).eigenvalues(0);
            const ProjectorSplit split = project_p_rho(basis, rho);
            const Eigen::VectorXd h0d = h0.real_diagonal();
            auto take = [&](const std::vector<Eigen::Index>& idx, bool weighted) {
                Eigen::VectorXd out(idx.size());
                for (std::size_t i = 0; i < idx.size(); ++i) {
                    out(i) = weighted ? 1.0 / std::sqrt(h0d(idx[i]) - e_g) : 1.0;
                }
                return out;
            };
            Norms norms;
            norms.t1 = weighted_operator_norm(
                detail::sparse_submatrix(w.matrix, split.outside, split.outside),
                take(split.outside, true), take(split.outside, true));
            norms.t2 = weighted_operator_norm(
                detail::sparse_submatrix(w.matrix, split.inside, split.outside),
                take(split.inside, false), take(split.outside, true));
            norms.t3 = weighted_operator_norm(
                detail::sparse_submatrix(w.matrix, split.inside, split.inside),
                take(split.inside, false), take(split.inside, false));
            return norms;
        };

        std::vector<double> rhos, t1r, t2r, t3r;
        for (int j = 1; j <= 5; ++j) {
            const double rho = 0.97 * krad[j];
            const Norms norms = norms_at(0.02, rho);
            rhos.push_back(rho);
            t1r.push_back(norms.t1);
            t2r.push_back(norms.t2);
            t3r.push_back(norms.t3);
        }
        std::vector<double> gs, t1g, t2g, t3g;
        for (double g : {0.02, 0.04, 0.08}) {
            const Norms norms = norms_at(g, 0.35);
            gs.push_back(g);
            t1g.push_back(norms.t1);
            t2g.push_back(norms.t2);
            t3g.push_back(norms.t3);
        }
        const double s_t1_rho = fit_loglog_slope(rhos, t1r);
        const double s_t1_g = fit_loglog_slope(gs, t1g);
        const double s_t2_g = fit_loglog_slope(gs, t2g);
        const double s_t3_rho = fit_loglog_slope(rhos, t3r);
        const double s_t3_g = fit_loglog_slope(gs, t3g);
        rep.items.push_back(make("||[..]^-1/2 Pbar W Pbar [..]^-1/2|| ~ g rho^-1/2",
                                 std::abs(s_t1_rho + 0.5) <= 0.15 && std::abs(s_t1_g - 1.0) <= 0.15,
                                 "rho exponent=" + num(s_t1_rho) + " g exponent=" + num(s_t1_g)));
        rep.items.push_back(make("||P W Pbar [..]^-1/2|| ~ g", std::abs(s_t2_g - 1.0) <= 0.15,
                                 "g exponent=" + num(s_t2_g)));
        double c_bound = 0.0;
        for (std::size_t i = 0; i < rhos.size(); ++i) {
            c_bound = std::max(c_bound, t3r[i] / (0.02 * std::sqrt(rhos[i])));
        }
        rep.items.push_back(make("||P W P|| ~ g rho^+1/2",
                                 std::abs(s_t3_rho - 0.5) <= 0.15 && std::abs(s_t3_g - 1.0) <= 0.15,
                                 "rho exponent=" + num(s_t3_rho) + " g exponent=" + num(s_t3_g) +
                                     "; upper bound holds with C=" + num(c_bound)));
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.items.push_back(make("runtime < 5 min", rep.seconds < 300.0, num(rep.seconds) + " s"));
    return rep;
}

// Criterion 7: control experiments — g = 0 and spin-couplings-disabled runs
// each leave the lowest cluster exactly 4-fold degenerate.
inline CriterionReport criterion_controls() {
    CriterionReport rep;
    rep.name = "Control experiments";
    rep.budget_seconds = 60.0;
    const auto t0 = std::chrono::steady_clock::now();
    const GridSpec spec{2, 2, 4};
    const auto modes = build_grid(spec, standard_params().lambda_uv);
    const FockBasis basis = enumerate_basis(modes, 1);
    SpectrumOptions sopt;
    sopt.num_eigenvalues = 6;

    {
        PhysicalParams p = standard_params(0.0);
        p.p_total = Vec3(0.3, 0.2, 0.1);
        const DerivedConstants d = derive_constants(p);
        const SpectrumResult res = ground_spectrum(build_hg(basis, p, d), sopt);
        const double spread = res.eigenvalues(3) - res.eigenvalues(0);
        const double vs_e0 = std::abs(res.eigenvalues(0) - d.e0_fiber);
        rep.items.push_back(make("g=0: lowest cluster exactly 4-fold, E = E0(P)",
                                 spread <= 1e-10 && vs_e0 <= 1e-10,
                                 "spread=" + num(spread) + " |E-E0|=" + num(vs_e0)));
    }
    {
        PhysicalParams p = standard_params(0.05);
        p.p_total = Vec3(0.3, 0.2, 0.1);
        const DerivedConstants d = derive_constants(p);
        WOptions wopt;
        wopt.include_spin = false;
        const AssembledOperator hg = build_hg(basis, p, d, wopt);
        const SpectrumResult res = ground_spectrum(hg, sopt);
        const double spread = res.eigenvalues(3) - res.eigenvalues(0);
        const double wnorm = gershgorin_norm(SparseOp(hg.matrix - build_h0(basis, p, d).matrix));
        rep.items.push_back(make("spin couplings disabled: lowest cluster exactly 4-fold",
                                 spread <= 1e-10 && wnorm > 0.0,
                                 "spread=" + num(spread) + " (current coupling active, ||W||~" +
                                     num(wnorm) + ")"));
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.items.push_back(make("runtime < 1 min", rep.seconds < 60.0, num(rep.seconds) + " s"));
    return rep;
}

inline std::vector<CriterionReport> run_acceptance_suite() {
    std::vector<CriterionReport> reports;
    reports.push_back(criterion_c0());
    reports.push_back(criterion_gamma32());
    reports.push_back(criterion_splitting());
    const auto sweep_t0 = std::chrono::steady_clock::now();
    const std::vector<SweepPoint> sweep = equivalence_sweep();
    const double sweep_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - sweep_t0).count();
    reports.push_back(criterion_equivalence(sweep, sweep_seconds));
    reports.push_back(criterion_feshbach());
    reports.push_back(criterion_bounds(sweep));
    reports.push_back(criterion_controls());
    return reports;
}

}  // namespace checks
}  // namespace hydrofine
