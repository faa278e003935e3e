#include "hydrofine/grid.hpp"

#include <doctest.h>

#include <cstring>

using namespace hydrofine;

TEST_CASE("grid weights reproduce the ball volume") {
    const double lambda = 1.0;
    const auto modes = build_grid(GridSpec{4, 4, 4}, lambda);
    double total = 0.0;
    for (const Mode& m : modes) total += m.weight;
    const double pi = two_pi / 2.0;
    CHECK(total / 2.0 == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-13));
}

TEST_CASE("minimal spec emits one k-point with two polarizations") {
    const auto modes = build_grid(GridSpec{1, 1, 1}, 2.0);
    CHECK(modes.size() == 2);
    CHECK(modes[0].lam == 1);
    CHECK(modes[1].lam == 2);
    CHECK((modes[0].k - modes[1].k).norm() == 0.0);
}

TEST_CASE("radial polynomial exactness") {
    const double pi = two_pi / 2.0;
    for (double lambda : {1.0, 2.5}) {
        const auto modes = build_grid(GridSpec{3, 6, 6}, lambda);
        double first_moment = 0.0, third_moment = 0.0;
        for (const Mode& m : modes) {
            first_moment += m.weight * m.k.norm();
            third_moment += m.weight * std::pow(m.k.norm(), 3);
        }
        // int |k| d^3k = pi Lambda^4 and int |k|^3 d^3k = 2 pi Lambda^6 / 3
        CHECK(first_moment / 2.0 ==
              doctest::Approx(pi * std::pow(lambda, 4)).epsilon(1e-12));
        CHECK(third_moment / 2.0 ==
              doctest::Approx(2.0 * pi * std::pow(lambda, 6) / 3.0).epsilon(1e-12));
    }
}

TEST_CASE("every mode satisfies the invariants") {
    const double lambda = 1.7;
    const auto modes = build_grid(GridSpec{5, 7, 6}, lambda);
    CHECK(modes.size() == 5u * 7u * 6u * 2u);
    for (const Mode& m : modes) {
        CHECK(m.weight > 0.0);
        CHECK(m.k.norm() <= lambda);
        CHECK(m.k.head<2>().squaredNorm() > 0.0);
        CHECK((m.lam == 1 || m.lam == 2));
    }
}

TEST_CASE("grid construction is bitwise deterministic") {
    const auto a = build_grid(GridSpec{6, 8, 8}, 1.0);
    const auto b = build_grid(GridSpec{6, 8, 8}, 1.0);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::memcmp(a[i].k.data(), b[i].k.data(), 3 * sizeof(double)) == 0);
        CHECK(std::memcmp(&a[i].weight, &b[i].weight, sizeof(double)) == 0);
        CHECK(a[i].lam == b[i].lam);
    }
}

TEST_CASE("refine doubles each count and respects the cap") {
    const GridSpec r1 = refine(GridSpec{4, 4, 4});
    CHECK((r1.n_radial == 8 && r1.n_costheta == 8 && r1.n_phi == 8));
    const GridSpec r2 = refine(GridSpec{1, 1, 1});
    CHECK((r2.n_radial == 2 && r2.n_costheta == 2 && r2.n_phi == 2));
    CHECK_THROWS_AS(refine(GridSpec{4, 4, 4}, 6), BudgetError);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(build_grid(GridSpec{0, 4, 4}, 1.0), ConfigError);
    CHECK_THROWS_AS(build_grid(GridSpec{4, 4, 4}, 0.0), ConfigError);
}
