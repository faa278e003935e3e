#include "hydrofine/model.hpp"

#include <doctest.h>

#include <random>

using namespace hydrofine;

namespace {

double max_abs(const SpinMatrix& m) { return m.cwiseAbs().maxCoeff(); }

SpinMatrix random_hermitian(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SpinMatrix a;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) a(r, c) = complexd(u(rng), u(rng));
    return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST_CASE("derived constants: symmetric masses") {
    PhysicalParams p;
    p.m_el = 1.0;
    p.m_n = 1.0;
    p.p_total.setZero();
    const DerivedConstants d = derive_constants(p);
    CHECK(d.mu == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d.e0 == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(d.e0_fiber == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(d.e1 == doctest::Approx(-0.5 / 8.0).epsilon(1e-15));
}

TEST_CASE("derived constants: physical mass ratio and moving frame") {
    PhysicalParams p;  // defaults m_n = 1836.152
    const DerivedConstants d = derive_constants(p);
    const double mu = 1836.152 / 1837.152;
    CHECK(d.mu == doctest::Approx(mu).epsilon(1e-15));
    CHECK(d.e0 == doctest::Approx(-0.5 * mu).epsilon(1e-15));
    CHECK(d.e0 < d.e1);
    CHECK(d.e1 < 0.0);

    PhysicalParams pm;
    pm.m_n = 1.0;
    pm.p_total = Vec3(0.1, 0.0, 0.0);
    const DerivedConstants dm = derive_constants(pm);
    CHECK(dm.e0_fiber == doctest::Approx(-0.25 + 0.01 / 4.0).epsilon(1e-15));
    CHECK(dm.e0_fiber == doctest::Approx(dm.e0 + pm.p_total.squaredNorm() / (2.0 * dm.m_total))
                             .epsilon(1e-15));
}

TEST_CASE("parameter validation rejects bad inputs") {
    PhysicalParams p;
    p.m_el = 0.0;
    CHECK_THROWS_AS(derive_constants(p), ConfigError);
    p = PhysicalParams{};
    p.m_n = -1.0;
    CHECK_THROWS_AS(derive_constants(p), ConfigError);
    p = PhysicalParams{};
    p.lambda_uv = 0.0;
    CHECK_THROWS_AS(derive_constants(p), ConfigError);
    p = PhysicalParams{};
    p.g = -0.1;
    CHECK_THROWS_AS(derive_constants(p), ConfigError);
    p = PhysicalParams{};
    p.p_total = Vec3(0.2 * p.total_mass(), 0.0, 0.0);  // above the ceiling
    CHECK_THROWS_AS(derive_constants(p), ConfigError);
}

TEST_CASE("pauli matrices match the fixed basis ordering") {
    const SpinMatrix el3 = pauli(Particle::el, 3);
    for (int i = 0; i < 4; ++i) {
        const double expected = (i < 2) ? 1.0 : -1.0;
        CHECK(el3(i, i).real() == doctest::Approx(expected));
    }
    const SpinMatrix n3 = pauli(Particle::n, 3);
    const double n3diag[4] = {1.0, -1.0, 1.0, -1.0};
    for (int i = 0; i < 4; ++i) CHECK(n3(i, i).real() == doctest::Approx(n3diag[i]));

    // sigma^n_1 has ones exactly at (1,2),(2,1),(3,4),(4,3) in 1-based indexing
    SpinMatrix n1_expected = SpinMatrix::Zero();
    n1_expected(0, 1) = n1_expected(1, 0) = n1_expected(2, 3) = n1_expected(3, 2) = 1.0;
    CHECK(max_abs(pauli(Particle::n, 1) - n1_expected) == doctest::Approx(0.0));

    SpinMatrix el1_expected = SpinMatrix::Zero();
    el1_expected(0, 2) = el1_expected(2, 0) = el1_expected(1, 3) = el1_expected(3, 1) = 1.0;
    CHECK(max_abs(pauli(Particle::el, 1) - el1_expected) == doctest::Approx(0.0));

    const complexd i1(0.0, 1.0);
    SpinMatrix el2_expected = SpinMatrix::Zero();
    el2_expected(0, 2) = el2_expected(1, 3) = -i1;
    el2_expected(2, 0) = el2_expected(3, 1) = i1;
    CHECK(max_abs(pauli(Particle::el, 2) - el2_expected) == doctest::Approx(0.0));
}

TEST_CASE("pauli algebra: hermitian, involutive, traceless, commuting factors") {
    for (Particle which : {Particle::el, Particle::n}) {
        for (int axis = 1; axis <= 3; ++axis) {
            const SpinMatrix& s = pauli(which, axis);
            CHECK(max_abs(s - s.adjoint()) == doctest::Approx(0.0));
            CHECK(max_abs(s * s - SpinMatrix::Identity()) == doctest::Approx(0.0));
            CHECK(std::abs(s.trace()) == doctest::Approx(0.0));
        }
    }
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            const SpinMatrix comm = pauli(Particle::el, i) * pauli(Particle::n, j) -
                                    pauli(Particle::n, j) * pauli(Particle::el, i);
            CHECK(max_abs(comm) == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("pauli algebra: products, traces, anticommutators within each factor") {
    const complexd i1(0.0, 1.0);
    for (Particle which : {Particle::el, Particle::n}) {
        for (int i = 1; i <= 3; ++i) {
            for (int j = 1; j <= 3; ++j) {
                const SpinMatrix prod = pauli(which, i) * pauli(which, j);
                // trace inner product tr(s_i s_j) = 4 delta_ij
                CHECK(prod.trace().real() == doctest::Approx(i == j ? 4.0 : 0.0));
                CHECK(prod.trace().imag() == doctest::Approx(0.0));
                // anticommutator {s_i, s_j} = 2 delta_ij
                const SpinMatrix anti = prod + pauli(which, j) * pauli(which, i);
                const SpinMatrix expected =
                    (i == j) ? SpinMatrix(2.0 * SpinMatrix::Identity()) : SpinMatrix(SpinMatrix::Zero());
                CHECK(max_abs(anti - expected) == doctest::Approx(0.0));
                // s_i s_j = delta_ij I + i eps_ijk s_k
                SpinMatrix rhs = (i == j) ? SpinMatrix(SpinMatrix::Identity())
                                          : SpinMatrix(SpinMatrix::Zero());
                const int k = 6 - i - j;
                if (i != j) {
                    const double eps = ((i == 1 && j == 2) || (i == 2 && j == 3) ||
                                        (i == 3 && j == 1))
                                           ? 1.0
                                           : -1.0;
                    rhs += i1 * eps * pauli(which, k);
                }
                CHECK(max_abs(prod - rhs) == doctest::Approx(0.0));
            }
        }
    }
}

TEST_CASE("two-spin decomposition on the basis elements") {
    const auto d_id = decompose_two_spin(SpinMatrix::Identity());
    CHECK(std::abs(d_id.c0 - 1.0) == doctest::Approx(0.0));
    CHECK(d_id.c_el.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK(d_id.c_n.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK(d_id.c_ex.cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    const auto d_ex = decompose_two_spin(pauli(Particle::el, 1) * pauli(Particle::n, 1));
    CHECK(std::abs(d_ex.c_ex(0, 0) - 1.0) == doctest::Approx(0.0));
    CHECK(std::abs(d_ex.c0) == doctest::Approx(0.0));
    CHECK(std::abs(d_ex.c_ex(1, 1)) == doctest::Approx(0.0));

    const double alpha = 0.7, beta = -0.3;
    const auto d_mix = decompose_two_spin(alpha * SpinMatrix::Identity() + beta * spin_exchange());
    CHECK(std::abs(d_mix.c0 - alpha) < 1e-15);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(d_mix.c_ex(i, j) - (i == j ? beta : 0.0)) < 1e-15);
}

TEST_CASE("decomposition round-trips random hermitian matrices") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 25; ++trial) {
        const SpinMatrix m = random_hermitian(rng);
        const SpinMatrix back = compose_two_spin(decompose_two_spin(m));
        CHECK(max_abs(back - m) < 1e-14);
    }
}

TEST_CASE("singlet vector spans the -3 eigenspace of the exchange operator") {
    const Eigen::Vector4cd v = singlet_vector();
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK((spin_exchange() * v + 3.0 * v).cwiseAbs().maxCoeff() < 1e-14);

    Eigen::Vector4cd triplet0;
    triplet0 << 0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0;
    CHECK(std::abs(v.dot(triplet0)) < 1e-15);

    Eigen::SelfAdjointEigenSolver<SpinMatrix> es(spin_exchange());
    CHECK(es.eigenvalues()(0) == doctest::Approx(-3.0).epsilon(1e-14));
    for (int i = 1; i < 4; ++i) CHECK(es.eigenvalues()(i) == doctest::Approx(1.0).epsilon(1e-14));
}
