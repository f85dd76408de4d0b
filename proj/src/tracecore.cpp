#include "fibising/tracecore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fibising/errors.hpp"
#include "fibising/format.hpp"

namespace fibising {

double TransferMatrix::max_abs() const {
    return std::max({std::abs(m11), std::abs(m12), std::abs(m21), std::abs(m22)});
}

std::string format_matrix(const TransferMatrix& m) {
    return format_double(m.m11) + "," + format_double(m.m12) + ";" + format_double(m.m21) +
           "," + format_double(m.m22);
}

bool TracePoint::finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

double TracePoint::max_abs() const { return std::max({std::abs(x), std::abs(y), std::abs(z)}); }

TransferMatrix single_site_matrix(double coupling, SpectralVariable s) {
    // lambda^2 = 4s, so lambda/2J = sqrt(s)/J and (lambda^2 - 4J^2)/4J = (s - J^2)/J.
    const double root = std::sqrt(s.value());
    const double inv = 1.0 / coupling;
    return {-inv, root * inv, -root * inv, (s.value() - coupling * coupling) * inv};
}

SeedMatrices seed_matrices(const CouplingParams& params, SpectralVariable s) {
    const double j0 = params.j0();
    const double j1 = params.j1();
    const double lambda = 2.0 * std::sqrt(s.value());
    TransferMatrix m_minus1{j0 / j1, lambda * (j1 * j1 - j0 * j0) / (2.0 * j0 * j1), 0.0, j1 / j0};
    return {m_minus1, single_site_matrix(j0, s), single_site_matrix(j1, s)};
}

TracePoint iterate(const TracePoint& p, int n) {
    TracePoint q = p;
    if (n >= 0) {
        for (int i = 0; i < n; ++i) q = trace_map(q);
    } else {
        for (int i = 0; i < -n; ++i) q = trace_map_inverse(q);
    }
    return q;
}

TracePoint gamma_line(const CouplingParams& params, SpectralVariable s) {
    const double j1 = params.j1();
    const double r = params.ratio();
    const double sv = s.value();
    return {(sv - (1.0 + j1 * j1)) / (2.0 * j1), (sv - (1.0 + r * r * j1 * j1)) / (2.0 * r * j1),
            (1.0 + r * r) / (2.0 * r)};
}

double gamma_invariant(const CouplingParams& params, SpectralVariable s) {
    const double r = params.ratio();
    const double d = 1.0 / r - r;
    return 0.25 * s.value() * d * d;
}

TracePoint per2_curve(double x) {
    if (x == 0.5) throw DomainError("per2_curve is undefined at x = 1/2");
    return {x, x / (2.0 * x - 1.0), x};
}

Matrix3 jacobian(const TracePoint& p) {
    return {{{2.0 * p.y, 2.0 * p.x, -1.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}};
}

TracePoint apply_symmetry(Symmetry which, const TracePoint& p) {
    switch (which) {
        case Symmetry::S: return {p.z, p.y, p.x};
        case Symmetry::S2: return {-p.x, -p.y, p.z};
        case Symmetry::S3: return {p.x, -p.y, -p.z};
        case Symmetry::S4: return {-p.x, p.y, -p.z};
    }
    return p;
}

std::string symmetry_name(Symmetry which) {
    switch (which) {
        case Symmetry::S: return "s";
        case Symmetry::S2: return "s2";
        case Symmetry::S3: return "s3";
        case Symmetry::S4: return "s4";
    }
    return "?";
}

TracePoint torus_factor(double theta, double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return {std::cos(two_pi * (theta + phi)), std::cos(two_pi * theta), std::cos(two_pi * phi)};
}

TorusPoint torus_map(TorusPoint p) {
    const double theta = p.theta + p.phi;
    return {theta - std::floor(theta), p.theta - std::floor(p.theta)};
}

std::vector<MeshPoint> surface_mesh(SurfaceLevel level, std::size_t resolution,
                                    const MeshWindow& window) {
    if (!(level.value >= 0.0)) throw DomainError("surface level V must be >= 0");
    std::vector<MeshPoint> out;
    if (resolution == 0) return out;
    const auto coord = [resolution](double lo, double hi, std::size_t i) {
        return resolution == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) /
                                                static_cast<double>(resolution - 1);
    };
    for (std::size_t i = 0; i < resolution; ++i) {
        const double x = coord(window.x_min, window.x_max, i);
        for (std::size_t j = 0; j < resolution; ++j) {
            const double y = coord(window.y_min, window.y_max, j);
            // z^2 - 2xy z + (x^2 + y^2 - 1 - V) = 0
            const double disc = (x * x - 1.0) * (y * y - 1.0) + level.value;
            if (disc < 0.0) continue;
            const double centre = x * y;
            if (disc == 0.0) {
                out.push_back({x, y, centre, level.value});
                continue;
            }
            const double root = std::sqrt(disc);
            out.push_back({x, y, centre - root, level.value});
            out.push_back({x, y, centre + root, level.value});
        }
    }
    return out;
}

}  // namespace fibising
