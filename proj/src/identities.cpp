#include "fibising/identities.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

namespace fibising {

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double matrix_residual(const TransferMatrix& a, const TransferMatrix& b) {
    const double scale = std::max(1.0, b.max_abs());
    return (a - b).max_abs() / scale;
}

TracePoint power(const std::function<TracePoint(const TracePoint&)>& g, TracePoint p, int n) {
    for (int i = 0; i < n; ++i) p = g(p);
    return p;
}

}  // namespace

double relative_residual(const TracePoint& a, const TracePoint& b) {
    return std::max({rel(a.x, b.x), rel(a.y, b.y), rel(a.z, b.z)});
}

std::vector<IdentityCheck> run_identity_suite(const IdentityOptions& opts, const TraceMapPair& map) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    const auto random_point = [&] { return TracePoint{box(rng), box(rng), box(rng)}; };
    std::vector<IdentityCheck> out;

    {
        double worst = 0.0;
        for (int i = 0; i < opts.samples; ++i) {
            const TracePoint p = random_point();
            const double before = fricke_vogt(p);
            worst = std::max(worst, std::abs(fricke_vogt(map.forward(p)) - before) /
                                        std::max(1.0, std::abs(before)));
        }
        out.push_back({"I(f(p)) vs I(p)", worst, 1e-9});
    }
    {
        double worst = 0.0;
        for (int i = 0; i < opts.samples; ++i) {
            const TracePoint p = random_point();
            worst = std::max(worst, relative_residual(map.inverse(map.forward(p)), p));
        }
        out.push_back({"f^-1(f(p)) vs p", worst, 1e-12});
    }
    {
        std::uniform_real_distribution<double> log_r(std::log(0.1), std::log(10.0));
        std::uniform_real_distribution<double> s_dist(0.0, 100.0);
        double product = 0.0;
        double half_traces = 0.0;
        for (int i = 0; i < opts.samples; ++i) {
            const CouplingParams params = CouplingParams::from_ratio(std::exp(log_r(rng)), 1.0);
            const SpectralVariable s(s_dist(rng));
            const SeedMatrices seeds = seed_matrices(params, s);
            product = std::max(product, matrix_residual(seeds.m0 * seeds.m_minus1, seeds.m1));
            const TracePoint g = gamma_line(params, s);
            half_traces = std::max({half_traces, rel(seeds.m1.half_trace(), g.x),
                                    rel(seeds.m0.half_trace(), g.y),
                                    rel(seeds.m_minus1.half_trace(), g.z)});
        }
        out.push_back({"M1 vs M0*M-1", product, 1e-12});
        out.push_back({"seed half-traces vs gamma", half_traces, 1e-12});
    }
    {
        const double cycle = std::max({relative_residual(map.forward(kP2), kP3),
                                       relative_residual(map.forward(kP3), kP4),
                                       relative_residual(map.forward(kP4), kP2),
                                       relative_residual(map.forward(kP1), kP1)});
        out.push_back({"P1 fixed, P2->P3->P4->P2", cycle, 0.0});
    }
    {
        double worst = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double x = -10.0 + 20.0 * i / 2000.0;
            if (std::abs(x - 0.5) < 0.01) continue;
            const TracePoint p = per2_curve(x);
            const TracePoint q = power(map.forward, p, 2);
            const double scale = std::max(1.0, p.max_abs());
            worst = std::max({worst, std::abs(q.x - p.x) / scale, std::abs(q.y - p.y) / scale,
                              std::abs(q.z - p.z) / scale});
        }
        out.push_back({"f^2(theta(x)) vs theta(x)", worst, 1e-9});
    }
    {
        const Matrix3 jac = jacobian(kP1);
        Eigen::Matrix3d m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = jac[i][j];
        Eigen::EigenSolver<Eigen::Matrix3d> solver(m);
        std::vector<double> ev;
        double imag = 0.0;
        for (int i = 0; i < 3; ++i) {
            ev.push_back(solver.eigenvalues()(i).real());
            imag = std::max(imag, std::abs(solver.eigenvalues()(i).imag()));
        }
        std::sort(ev.begin(), ev.end());
        const double root5 = std::sqrt(5.0);
        const double expected[3] = {-1.0, (3.0 - root5) / 2.0, (3.0 + root5) / 2.0};
        double worst = imag;
        for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(ev[i] - expected[i]));
        out.push_back({"eig Df(P1)", worst, 1e-9});
    }
    {
        double worst = 0.0;
        const int n = opts.torus_grid;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const TorusPoint t{static_cast<double>(i) / n, static_cast<double>(j) / n};
                const TorusPoint a = torus_map(t);
                const TracePoint lhs = map.forward(torus_factor(t.theta, t.phi));
                const TracePoint rhs = torus_factor(a.theta, a.phi);
                worst = std::max(worst, relative_residual(lhs, rhs));
            }
        }
        out.push_back({"f(F(t)) vs F(A(t))", worst, 1e-10});
    }
    {
        double reversing = 0.0;
        double conj[3] = {0.0, 0.0, 0.0};
        const Symmetry flips[3] = {Symmetry::S2, Symmetry::S3, Symmetry::S4};
        for (int i = 0; i < opts.samples; ++i) {
            const TracePoint p = random_point();
            const TracePoint back = power(map.inverse, p, 6);
            const TracePoint lhs =
                apply_symmetry(Symmetry::S, power(map.forward, apply_symmetry(Symmetry::S, p), 6));
            reversing = std::max(reversing, relative_residual(lhs, back));
            const TracePoint fwd = power(map.forward, p, 6);
            for (int j = 0; j < 3; ++j) {
                const TracePoint c =
                    apply_symmetry(flips[j], power(map.forward, apply_symmetry(flips[j], p), 6));
                conj[j] = std::max(conj[j], relative_residual(c, fwd));
            }
        }
        out.push_back({"s o f^6 o s vs f^-6", reversing, 1e-8});
        for (int j = 0; j < 3; ++j) {
            out.push_back({symmetry_name(flips[j]) + " o f^6 o " + symmetry_name(flips[j]) +
                               " vs f^6",
                           conj[j], 1e-8});
        }
    }
    return out;
}

}  // namespace fibising
