// common.hpp — shared aliases, error types, and small numeric helpers

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hydrofine {

using complexd = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using SpinMatrix = Eigen::Matrix4cd;

// Configuration / precondition violations; the CLI maps these to exit code 1.
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical budget exhausted (quadrature interval cap, solver iteration cap,
// basis memory budget); the CLI maps these to exit code 2. `achieved` carries
// the best tolerance/residual reached before giving up.
struct BudgetError : std::runtime_error {
    double achieved;
    BudgetError(const std::string& what, double achieved_value)
        : std::runtime_error(what), achieved(achieved_value) {}
};

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("fit_slope: need at least two matching points");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

// Slope of log|y| vs log x; points with y == 0 are rejected.
inline double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    lx.reserve(x.size());
    ly.reserve(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0 || y[i] == 0.0) {
            throw std::invalid_argument("fit_loglog_slope: nonpositive abscissa or zero value");
        }
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(std::abs(y[i])));
    }
    return fit_slope(lx, ly);
}

// Spectral (2-)norm of a dense complex matrix.
inline double operator_norm(const Eigen::MatrixXcd& a) {
    if (a.size() == 0) return 0.0;
    if (a.rows() > 32 || a.cols() > 32) {
        return Eigen::BDCSVD<Eigen::MatrixXcd>(a).singularValues()(0);
    }
    return a.jacobiSvd().singularValues()(0);
}

}  // namespace hydrofine
