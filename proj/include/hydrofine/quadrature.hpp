// quadrature.hpp — Gauss-Legendre rules and adaptive interval integration
// for scalar- and matrix-valued integrands.

#pragma once

#include "hydrofine/common.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace hydrofine {

struct QuadratureRule {
    std::vector<double> nodes;  // on [-1, 1], ascending
    std::vector<double> weights;
};

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix, weights are
// 2 * (first eigenvector component)^2. Deterministic for a fixed order.
inline QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
        return rule;
    }
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int j = 1; j < n; ++j) {
        const double b = j / std::sqrt(4.0 * j * j - 1.0);
        jacobi(j, j - 1) = b;
        jacobi(j - 1, j) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        rule.weights[i] = 2.0 * v0 * v0;
    }
    return rule;
}

// Rule mapped onto [a, b].
inline QuadratureRule mapped_rule(const QuadratureRule& rule, double a, double b) {
    QuadratureRule out = rule;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t i = 0; i < out.nodes.size(); ++i) {
        out.nodes[i] = mid + half * rule.nodes[i];
        out.weights[i] = half * rule.weights[i];
    }
    return out;
}

namespace detail {

inline const QuadratureRule& gl10() {
    static const QuadratureRule r = gauss_legendre(10);
    return r;
}
inline const QuadratureRule& gl20() {
    static const QuadratureRule r = gauss_legendre(20);
    return r;
}

template <class F, class Value>
void eval_panel(F&& f, double a, double b, Value& value, double& error,
                double (*norm)(const Value&)) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Value coarse{}, fine{};
    bool first = true;
    for (std::size_t i = 0; i < gl10().nodes.size(); ++i) {
        Value term = f(mid + half * gl10().nodes[i]);
        term *= half * gl10().weights[i];
        if (first) {
            coarse = term;
            first = false;
        } else {
            coarse += term;
        }
    }
    first = true;
    for (std::size_t i = 0; i < gl20().nodes.size(); ++i) {
        Value term = f(mid + half * gl20().nodes[i]);
        term *= half * gl20().weights[i];
        if (first) {
            fine = term;
            first = false;
        } else {
            fine += term;
        }
    }
    Value diff = fine;
    diff -= coarse;
    value = fine;
    error = norm(diff);
}

}  // namespace detail

// Adaptive bisection with an embedded GL10/GL20 error estimate. Value must
// support copy, +=, -=, and scaling by double; `norm` supplies the error
// metric. Splits the worst panel until the summed error estimate drops below
// rel_tol * norm(total) (with abs_floor guarding an exactly-zero integral),
// or throws BudgetError once max_panels is exceeded.
template <class Value, class F>
Value adaptive_integrate(F&& f, double a, double b, double rel_tol,
                         double (*norm)(const Value&), int max_panels = 2000,
                         double abs_floor = 0.0) {
    struct Panel {
        double a, b, error;
        Value value;
    };
    std::vector<Panel> panels;
    Panel p0;
    p0.a = a;
    p0.b = b;
    detail::eval_panel(f, a, b, p0.value, p0.error, norm);
    panels.push_back(std::move(p0));

    auto total_of = [&]() {
        Value total = panels[0].value;
        for (std::size_t i = 1; i < panels.size(); ++i) total += panels[i].value;
        return total;
    };

    while (true) {
        double err_sum = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            err_sum += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        Value total = total_of();
        const double scale = std::max(norm(total), abs_floor);
        if (err_sum <= rel_tol * scale || scale == 0.0) return total;
        if (static_cast<int>(panels.size()) >= max_panels) {
            throw BudgetError("adaptive_integrate: panel budget exhausted", err_sum / scale);
        }
        Panel left, right;
        const double mid = 0.5 * (panels[worst].a + panels[worst].b);
        left.a = panels[worst].a;
        left.b = mid;
        right.a = mid;
        right.b = panels[worst].b;
        detail::eval_panel(f, left.a, left.b, left.value, left.error, norm);
        detail::eval_panel(f, right.a, right.b, right.value, right.error, norm);
        panels[worst] = std::move(left);
        panels.push_back(std::move(right));
    }
}

inline double scalar_norm(const double& x) { return std::abs(x); }

inline double matrix4_norm(const SpinMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline double adaptive_integrate_scalar(const std::function<double(double)>& f, double a,
                                        double b, double rel_tol, int max_panels = 2000,
                                        double abs_floor = 0.0) {
    return adaptive_integrate<double>(f, a, b, rel_tol, &scalar_norm, max_panels, abs_floor);
}

}  // namespace hydrofine
