#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fibising/dynamics.hpp"
#include "fibising/errors.hpp"
#include "fibising/fermion_oracle.hpp"
#include "fibising/fibword.hpp"
#include "fibising/spectrum.hpp"

using namespace fibising;

namespace {

// x_n(s) by plain recursion, no guards
double x_plain(const CouplingParams& p, double s, int n) {
    const TracePoint g = gamma_line(p, SpectralVariable(s));
    double zm = g.z, z0 = g.y, z1 = g.x;
    if (n == -1) return zm;
    if (n == 0) return z0;
    for (int i = 1; i < n; ++i) {
        const double next = 2.0 * z1 * z0 - zm;
        zm = z0;
        z0 = z1;
        z1 = next;
    }
    return z1;
}

// fraction of a dense grid on [0, hi] where |x_{k-1}| <= 1, times hi
double sampled_length(const CouplingParams& p, int k, double hi, int n) {
    int inside = 0;
    for (int i = 0; i < n; ++i) {
        const double s = hi * (i + 0.5) / n;
        if (std::abs(x_plain(p, s, k - 1)) <= 1.0) ++inside;
    }
    return hi * inside / n;
}

BandSet single(double lo, double hi) { return BandSet({{lo, hi}}); }

}  // namespace

TEST_CASE("trace values at the seeds") {
    for (double r : {0.3, 0.8, 1.0, 2.5}) {
        const CouplingParams p = CouplingParams::from_ratio(r, 1.4);
        for (double s : {0.0, 0.7, 3.0}) {
            const SpectralVariable sv(s);
            CHECK(trace_value(p, sv, -1).value == doctest::Approx((r + 1 / r) / 2).epsilon(1e-12));
            CHECK(trace_value(p, sv, 0).value ==
                  doctest::Approx((s - (1 + r * r * 1.96)) / (2 * r * 1.4)).epsilon(1e-12));
            CHECK(trace_value(p, sv, 1).value == doctest::Approx((s - (1 + 1.96)) / 2.8).epsilon(1e-12));
        }
    }
    CHECK(trace_value(CouplingParams(2, 1), SpectralVariable(5), 1).value == doctest::Approx(1.5));
    CHECK_THROWS_AS(trace_value(CouplingParams(1, 1), SpectralVariable(1), -2), DomainError);
}

TEST_CASE("trace values match the direct transfer product") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> c(0.5, 2.0), u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const CouplingParams p = CouplingParams::from_ratio(c(rng), c(rng));
        const double top = 1 + std::max(p.j0(), p.j1());
        const SpectralVariable s(u(rng) * (top * top + 1));
        for (int k = 1; k <= 12; ++k) {
            const TransferMatrix m = direct_transfer_product(p, k, s);
            const TraceValue v = trace_value(p, s, k, 1e300);
            REQUIRE_FALSE(v.overflowed());
            CHECK(std::abs(m.half_trace() - v.value) <= 1e-9 * std::max(1.0, std::abs(v.value)));
        }
    }
}

TEST_CASE("trace derivative matches a finite difference") {
    const CouplingParams p = CouplingParams::from_ratio(0.8, 1.0);
    for (double s : {0.3, 1.1, 2.9}) {
        for (int k : {2, 5, 8}) {
            const double h = 1e-6;
            const double fd = (x_plain(p, s + h, k) - x_plain(p, s - h, k)) / (2 * h);
            CHECK(trace_sample(p, s, k).derivative == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("overflow after a witness is reported, not thrown") {
    const TraceValue v = trace_value(CouplingParams(1, 1), SpectralVariable(20.0), 40);
    CHECK(v.overflowed());
}

TEST_CASE("level-2 band is [0,4] for J1 = 1") {
    for (double r : {0.4, 0.8, 1.0, 1.9}) {
        const BandSet b = band_set(CouplingParams::from_ratio(r, 1.0), 2).bands;
        REQUIRE(b.size() == 1);
        CHECK(std::abs(b.intervals()[0].lo) <= 1e-10);
        CHECK(std::abs(b.intervals()[0].hi - 4.0) <= 1e-10);
    }
}

TEST_CASE("level-1 band edges are (1 -+ J0)^2") {
    const BandSet b = band_set(CouplingParams(0.8, 1.0), 1).bands;
    REQUIRE(b.size() == 1);
    CHECK(b.intervals()[0].lo == doctest::Approx(0.04).epsilon(1e-10));
    CHECK(b.intervals()[0].hi == doctest::Approx(3.24).epsilon(1e-10));
}

TEST_CASE("level-3 band edges solve a quadratic") {
    // x2 = 2 x1 x0 - c is quadratic in s; |x2| = 1 gives four roots
    const double r = 0.8, j = 1.0;
    const CouplingParams p = CouplingParams::from_ratio(r, j);
    const double c = (1 + r * r) / (2 * r);
    const double a1 = 1 / (2 * j), b1 = -(1 + j * j) / (2 * j);
    const double a0 = 1 / (2 * r * j), b0 = -(1 + r * r * j * j) / (2 * r * j);
    std::vector<double> roots;
    for (double level : {-1.0, 1.0}) {
        const double qa = 2 * a1 * a0, qb = 2 * (a1 * b0 + b1 * a0), qc = 2 * b1 * b0 - c - level;
        const double disc = qb * qb - 4 * qa * qc;
        REQUIRE(disc > 0);
        roots.push_back((-qb - std::sqrt(disc)) / (2 * qa));
        roots.push_back((-qb + std::sqrt(disc)) / (2 * qa));
    }
    std::sort(roots.begin(), roots.end());
    const BandSet b = band_set(p, 3).bands;
    REQUIRE(b.size() == 2);
    CHECK(b.intervals()[0].lo == doctest::Approx(roots[0]).epsilon(1e-11));
    CHECK(b.intervals()[0].hi == doctest::Approx(roots[1]).epsilon(1e-11));
    CHECK(b.intervals()[1].lo == doctest::Approx(roots[2]).epsilon(1e-11));
    CHECK(b.intervals()[1].hi == doctest::Approx(roots[3]).epsilon(1e-11));
}

TEST_CASE("band lengths agree with dense sampling") {
    const CouplingParams p = CouplingParams::from_ratio(0.8, 1.0);
    BandLadder ladder(p);
    for (int k = 1; k <= 9; ++k) {
        const BandSet& b = ladder.level(k).bands;
        CHECK(b.size() == fibonacci(k - 1));
        CHECK(b.total_length() == doctest::Approx(sampled_length(p, k, 5.0, 400000)).epsilon(1e-4));
    }
    // frozen from an independent 5e6-point sampler
    CHECK(ladder.level(3).bands.total_length() == doctest::Approx(3.07981).epsilon(1e-5));
    CHECK(ladder.level(10).bands.total_length() == doctest::Approx(1.980205).epsilon(1e-5));
    CHECK(ladder.level(12).bands.total_length() == doctest::Approx(1.734569).epsilon(1e-5));
}

TEST_CASE("band edges sit on |x| = 1") {
    const CouplingParams p = CouplingParams::from_ratio(1.3, 0.9);
    const BandSet b = band_set(p, 9).bands;
    for (const auto& iv : b.intervals()) {
        for (double e : {iv.lo, iv.hi}) {
            if (e == 0.0) continue;
            CHECK(std::abs(std::abs(x_plain(p, e, 8)) - 1.0) <= 1e-8);
        }
    }
}

TEST_CASE("uniform chain bands cover the dispersion band") {
    for (double j : {0.5, 1.0, 1.7}) {
        const double delta = 1e-6;
        const BandSet inner = single((1 - j) * (1 - j) + delta, (1 + j) * (1 + j) - delta);
        BandLadder ladder(CouplingParams(j, j));
        for (int k = 1; k <= 10; ++k) CHECK(ladder.level(k).bands.contains(inner));
    }
}

TEST_CASE("bands stay inside the scan window") {
    const CouplingParams p = CouplingParams::from_ratio(1.6, 1.2);
    ScanOptions o;
    const double top = o.window_for(p);
    CHECK(top == doctest::Approx((1 + 1.92) * (1 + 1.92) + 1));
    const BandSet b = band_set(p, 8, o).bands;
    CHECK(b.hull().lo >= 0.0);
    CHECK(b.hull().hi <= top);
}

TEST_CASE("band sets are deterministic across thread counts") {
    const CouplingParams p = CouplingParams::from_ratio(0.7, 1.0);
    ScanOptions one, many;
    one.threads = 1;
    many.threads = 4;
    CHECK(band_set(p, 10, one).bands == band_set(p, 10, many).bands);
}

TEST_CASE("nested covers") {
    SUBCASE("uniform chain is stationary") {
        BandLadder ladder(CouplingParams(1, 1));
        for (int k = 1; k <= 8; ++k) {
            const NestedCover c = nested_cover(ladder, k, 0);
            CHECK(c.nests_next);
            CHECK(hausdorff_distance(c.sigma, single(0, 4)).distance <= 1e-10);
        }
        const ConvergenceStudy st = convergence_study(ladder, 1, 6, 0);
        for (const auto& row : st.rows) {
            if (row.hausdorff) CHECK(*row.hausdorff < 2e-12);
            CHECK(row.length == doctest::Approx(4.0).epsilon(1e-9));
        }
    }
    SUBCASE("r = 0.8 nests and shrinks") {
        BandLadder ladder(CouplingParams::from_ratio(0.8, 1.0));
        double prev = 1e300;
        for (int k = 1; k <= 8; ++k) {
            const NestedCover c = nested_cover(ladder, k, 0);
            CHECK(c.nests_next);
            CHECK(c.nesting_excess <= 2e-12);
            CHECK(c.sigma.total_length() <= prev);
            CHECK(c.sigma.contains(cover_union(ladder, k + 1, 0), 2e-12));
            prev = c.sigma.total_length();
        }
        CHECK(probe_offset(ladder, 1, 8) == 0);
        const BandSet approx = b_infinity_approx(ladder, 8);
        CHECK(approx == cover_union(ladder, 8, 0));
    }
}

TEST_CASE("convergence study shape") {
    BandLadder ladder(CouplingParams::from_ratio(0.8, 1.0));
    const ConvergenceStudy one = convergence_study(ladder, 4, 4, 0);
    REQUIRE(one.rows.size() == 1);
    CHECK_FALSE(one.rows[0].hausdorff.has_value());
    const ConvergenceStudy st = convergence_study(ladder, 1, 6, 1);
    REQUIRE(st.rows.size() == 6);
    for (std::size_t i = 0; i + 1 < st.rows.size(); ++i) {
        CHECK(*st.rows[i].hausdorff ==
              doctest::Approx(hausdorff_distance(cover_union(ladder, st.rows[i].k, 1),
                                                 cover_union(ladder, st.rows[i].k + 1, 1))
                                  .distance));
        CHECK(st.rows[i + 1].length < st.rows[i].length);
    }
    CHECK_THROWS_AS(convergence_study(ladder, 3, 2, 0), DomainError);
}

TEST_CASE("band and orbit verdicts agree") {
    const CouplingParams p = CouplingParams::from_ratio(0.8, 1.0);
    BandLadder ladder(p);
    const int k_max = 8;
    const BandSet sigma = cover_union(ladder, k_max, 0);
    OrbitBudget budget;
    budget.max_steps = k_max + 10;
    const BandSet sigma1 = cover_union(ladder, 1, 0);
    for (int i = 0; i <= 4000; ++i) {
        const double s = 5.0 * i / 4000;
        const OrbitVerdict v = classify_orbit(gamma_line(p, SpectralVariable(s)), budget);
        // inside Sigma_kmax: no witness before the first level of the cover
        if (sigma.contains(s, -1e-6) && v.escaped()) CHECK(v.step >= k_max - 1);
        if (!sigma1.contains(s, 1e-6)) CHECK(v.escaped());
    }
}

TEST_CASE("energy symmetrization") {
    CHECK(symmetrize_to_energy(single(0, 4)) == single(-4, 4));
    CHECK(symmetrize_to_energy(single(1, 4)) == BandSet({{-4, -2}, {2, 4}}));
    CHECK(symmetrize_to_energy(BandSet()).empty());
    const BandSet e = symmetrize_to_energy(band_set(CouplingParams(0.8, 1.0), 7).bands);
    std::vector<Interval> mirrored;
    for (const auto& iv : e.intervals()) mirrored.push_back({-iv.hi, -iv.lo});
    CHECK(BandSet(mirrored) == e);
}

TEST_CASE("band_set rejects level 0") {
    CHECK_THROWS_AS(band_set(CouplingParams(1, 1), 0), DomainError);
}
