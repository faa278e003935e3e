// grid.hpp — deterministic quadrature discretization of the photon
// wave-vector ball {|k| <= Lambda} into weighted (k, lambda) modes.

#pragma once

#include "hydrofine/kernels.hpp"
#include "hydrofine/quadrature.hpp"

namespace hydrofine {

struct GridSpec {
    int n_radial{6};
    int n_costheta{8};
    int n_phi{8};

    void validate() const {
        if (n_radial < 1 || n_costheta < 1 || n_phi < 1) {
            throw ConfigError("GridSpec: all node counts must be >= 1");
        }
    }

    bool operator==(const GridSpec&) const = default;
};

// One quadrature mode. The weight carries the full measure k^2 sin(theta)
// dk dtheta dphi, so downstream code treats the grid as an abstract weighted
// sum: sum_m w_m f(k_m, lam_m) ~ sum_lam int f(k, lam) d^3k.
struct Mode {
    Vec3 k;
    int lam;
    double weight;
};

// Product rule: Gauss-Legendre in |k| on [0, Lambda] and in cos(theta) on
// [-1, 1], uniform in phi on [0, 2pi); each k-node is emitted twice, once per
// polarization. Gauss-Legendre nodes are interior, so no mode can land on the
// polarization singularity at cos(theta) = +-1; the guard is kept anyway.
inline std::vector<Mode> build_grid(const GridSpec& spec, double lambda_uv) {
    spec.validate();
    if (!(lambda_uv > 0.0)) throw ConfigError("build_grid: lambda_uv must be > 0");
    const QuadratureRule radial = mapped_rule(gauss_legendre(spec.n_radial), 0.0, lambda_uv);
    const QuadratureRule polar = gauss_legendre(spec.n_costheta);
    for (double c : polar.nodes) {
        if (!(std::abs(c) < 1.0)) {
            throw ConfigError("build_grid: polar rule places a node at cos(theta) = +-1");
        }
    }
    const double w_phi = two_pi / spec.n_phi;

    std::vector<Mode> modes;
    modes.reserve(static_cast<std::size_t>(spec.n_radial) * spec.n_costheta * spec.n_phi * 2);
    for (int ir = 0; ir < spec.n_radial; ++ir) {
        const double r = radial.nodes[ir];
        for (int ic = 0; ic < spec.n_costheta; ++ic) {
            const double c = polar.nodes[ic];
            const double s = std::sqrt(1.0 - c * c);
            for (int ip = 0; ip < spec.n_phi; ++ip) {
                const double phi = two_pi * ip / spec.n_phi;
                const Vec3 k(r * s * std::cos(phi), r * s * std::sin(phi), r * c);
                const double w = radial.weights[ir] * r * r * polar.weights[ic] * w_phi;
                for (int lam = 1; lam <= 2; ++lam) modes.push_back({k, lam, w});
            }
        }
    }
    return modes;
}

// Doubles each count; used by convergence sweeps.
inline GridSpec refine(const GridSpec& spec, int max_nodes_per_axis = 4096) {
    GridSpec out{2 * spec.n_radial, 2 * spec.n_costheta, 2 * spec.n_phi};
    if (out.n_radial > max_nodes_per_axis || out.n_costheta > max_nodes_per_axis ||
        out.n_phi > max_nodes_per_axis) {
        throw BudgetError("refine: grid size exceeds the configured maximum",
                          static_cast<double>(max_nodes_per_axis));
    }
    return out;
}

}  // namespace hydrofine
