#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "fibising/errors.hpp"
#include "fibising/fermion_oracle.hpp"
#include "fibising/spectrum.hpp"

using namespace fibising;

TEST_CASE("uniform three-site matrices") {
    const FermionMatrices m = build_matrices(std::vector<double>{1, 1, 1});
    Eigen::Matrix3d a;
    a << -2, -1, -1, -1, -2, -1, -1, -1, -2;
    CHECK(m.a == a);
    CHECK(m.b == -m.b.transpose());
    CHECK((m.a + m.b) == (m.a - m.b).transpose());
    Eigen::Matrix3d prod;
    prod << 8, 4, 4, 4, 8, 4, 4, 4, 8;
    CHECK(((m.a + m.b) * (m.a - m.b) - prod).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ABA word matrices") {
    const FermionMatrices m = build_matrices(CouplingParams(1, 2), 3);
    REQUIRE(m.n == 3);
    CHECK(m.a(0, 1) == -1);
    CHECK(m.a(1, 2) == -2);
    CHECK(m.a(0, 2) == -1);
    CHECK(m.a(2, 0) == -1);
    CHECK(m.b(0, 1) == -1);
    CHECK(m.b(1, 0) == 1);
    CHECK(m.b(0, 2) == 1);
    CHECK(m.b(2, 0) == -1);
    for (int i = 0; i < 3; ++i) CHECK(m.a(i, i) == -2);
}

TEST_CASE("structure on a larger word") {
    const FermionMatrices m = build_matrices(CouplingParams(0.8, 1.3), 9);
    REQUIRE(m.n == 55);
    CHECK(m.a == m.a.transpose());
    CHECK(m.b == -m.b.transpose());
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = 0; j < m.n; ++j) {
            const std::size_t d = i > j ? i - j : j - i;
            if (d > 1 && d != m.n - 1) {
                CHECK(m.a(i, j) == 0.0);
                CHECK(m.b(i, j) == 0.0);
            }
        }
    }
}

TEST_CASE("size errors") {
    CHECK_THROWS_AS(build_matrices(std::vector<double>{1, 1}), DomainError);
    CHECK_THROWS_AS(build_matrices(CouplingParams(1, 1), 2), DomainError);
}

TEST_CASE("uniform oracle spectrum") {
    const OracleSpectrum s = oracle_spectrum(build_matrices(std::vector<double>{1, 1, 1}));
    REQUIRE(s.mu.size() == 3);
    CHECK(s.mu[0] == doctest::Approx(4));
    CHECK(s.mu[1] == doctest::Approx(4));
    CHECK(s.mu[2] == doctest::Approx(16));
    CHECK(std::abs(s.s_values[0] - 1) <= 1e-8);
    CHECK(std::abs(s.s_values[1] - 1) <= 1e-8);
    CHECK(std::abs(s.s_values[2] - 4) <= 1e-8);
}

TEST_CASE("uniform ring matches the dispersion") {
    // momenta q = (2m + n) pi / n: antiperiodic for odd n, periodic for even n
    for (double j : {0.7, 1.0, 1.8}) {
        for (std::size_t n : {3u, 5u, 8u, 13u, 34u}) {
            const OracleSpectrum s = oracle_spectrum(build_matrices(std::vector<double>(n, j)));
            std::vector<double> expected;
            for (std::size_t m = 0; m < n; ++m) {
                const double q = (2.0 * m + n) * std::numbers::pi / static_cast<double>(n);
                expected.push_back(1 + j * j - 2 * j * std::cos(q));
            }
            std::sort(expected.begin(), expected.end());
            for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(s.s_values[i] - expected[i]) <= 1e-8);
        }
    }
}

TEST_CASE("oracle spectrum agrees with a dense symmetric eigensolver") {
    const FermionMatrices m = build_matrices(CouplingParams(0.6, 1.4), 8);
    const OracleSpectrum s = oracle_spectrum(m);
    const Eigen::MatrixXd gram = (m.a - m.b).transpose() * (m.a - m.b);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    for (Eigen::Index i = 0; i < gram.rows(); ++i) {
        CHECK(s.mu[i] == doctest::Approx(solver.eigenvalues()(i)).epsilon(1e-10));
    }
    CHECK(std::is_sorted(s.mu.begin(), s.mu.end()));
    for (double v : s.s_values) CHECK(v >= 0.0);
    CHECK(eigen_residual(m, s) <= 1e-8);
}

TEST_CASE("uniform spectra sit inside [0, 4]") {
    for (int k = 3; k <= 10; ++k) {
        const OracleSpectrum s = oracle_spectrum(build_matrices(CouplingParams(1, 1), k));
        for (double v : s.s_values) {
            CHECK(v >= 0.0);
            CHECK(v <= 4.0 + 1e-12);
        }
    }
}

TEST_CASE("direct transfer product") {
    const CouplingParams p(0.7, 1.6);
    const SpectralVariable s(2.3);
    CHECK(direct_transfer_product(p, 1, s).half_trace() ==
          doctest::Approx((2.3 - (1 + 1.6 * 1.6)) / (2 * 1.6)));
    // outside the bands the entries grow, det cancels at the scale of max entry squared
    for (int k = 1; k <= 12; ++k) {
        const TransferMatrix m = direct_transfer_product(p, k, s);
        CHECK(std::abs(m.det() - 1) <= 1e-10 * std::max(1.0, m.max_abs() * m.max_abs()));
    }
    const SpectralVariable inside(1.0);
    for (int k = 1; k <= 12; ++k) CHECK(direct_transfer_product(CouplingParams(1, 1), k, inside).det() == doctest::Approx(1).epsilon(1e-10));
    for (int k = 2; k <= 11; ++k) {
        const TransferMatrix lhs = direct_transfer_product(p, k + 1, s);
        const TransferMatrix rhs = direct_transfer_product(p, k, s) * direct_transfer_product(p, k - 1, s);
        CHECK((lhs - rhs).max_abs() <= 1e-9 * std::max(1.0, rhs.max_abs()));
    }
}

TEST_CASE("containment") {
    const CouplingParams uniform(1, 1);
    const ContainmentReport rep = containment_check(uniform, 3, 1e-9);
    CHECK(rep.total == 3);
    CHECK(rep.fraction() == 1.0);

    const OracleSpectrum far = oracle_spectrum(build_matrices(std::vector<double>{3, 3, 3}));
    const BandSet tiny({{0.0, 0.1}});
    CHECK(containment_check(far, tiny, 0.0).fraction() < 1.0);
    CHECK(containment_check(far, tiny, 1e9).fraction() == 1.0);
    CHECK_THROWS_AS(containment_check(far, tiny, -1.0), DomainError);

    const ContainmentReport r08 = containment_check(CouplingParams::from_ratio(0.8, 1.0), 6, 1e-6);
    CHECK(r08.total == 13);
    CHECK(r08.fraction() >= 0.9);
}

TEST_CASE("ring eigenvalues are band edges of the transfer chain") {
    const CouplingParams p = CouplingParams::from_ratio(0.8, 1.0);
    for (int k = 3; k <= 8; ++k) {
        const OracleSpectrum s = oracle_spectrum(build_matrices(p.dual(), k));
        for (double v : s.s_values) {
            const TraceValue x = trace_value(p, SpectralVariable(std::max(v, 0.0)), k);
            CHECK(x.value == doctest::Approx(1.0).epsilon(1e-7));
        }
    }
}
