#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "fibising/params.hpp"

namespace fibising {

/// 2x2 real matrix, row-major.
struct TransferMatrix {
    double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;

    double det() const { return m11 * m22 - m12 * m21; }
    double half_trace() const { return 0.5 * (m11 + m22); }
    double max_abs() const;

    friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
                a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
    }
    friend TransferMatrix operator-(const TransferMatrix& a, const TransferMatrix& b) {
        return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
    }
};

/// Row-major rendering with 17 significant digits: "m11,m12;m21,m22".
std::string format_matrix(const TransferMatrix& m);

/// A point of R^3 read as the trace triple (x_{k+1}, x_k, x_{k-1}).
struct TracePoint {
    double x = 0.0, y = 0.0, z = 0.0;

    bool finite() const;
    double max_abs() const;
    bool operator==(const TracePoint&) const = default;
};

inline constexpr TracePoint kP1{1.0, 1.0, 1.0};
inline constexpr TracePoint kP2{-1.0, -1.0, 1.0};
inline constexpr TracePoint kP3{1.0, -1.0, -1.0};
inline constexpr TracePoint kP4{-1.0, 1.0, -1.0};

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Single-site transfer matrix at coupling J, evaluated at lambda = 2 sqrt(s).
TransferMatrix single_site_matrix(double coupling, SpectralVariable s);

struct SeedMatrices {
    TransferMatrix m_minus1;
    TransferMatrix m0;
    TransferMatrix m1;
};

/// The three seed matrices M_{-1}, M_0 (coupling J0), M_1 (coupling J1).
/// M_1 = M_0 * M_{-1} holds identically.
SeedMatrices seed_matrices(const CouplingParams& params, SpectralVariable s);

/// f(x, y, z) = (2xy - z, x, y).
inline TracePoint trace_map(const TracePoint& p) { return {2.0 * p.x * p.y - p.z, p.x, p.y}; }

/// f^{-1}(x, y, z) = (y, z, 2yz - x).
inline TracePoint trace_map_inverse(const TracePoint& p) {
    return {p.y, p.z, 2.0 * p.y * p.z - p.x};
}

/// n-fold composition; negative n applies the inverse.
TracePoint iterate(const TracePoint& p, int n);

/// Fricke-Vogt character x^2 + y^2 + z^2 - 2xyz - 1, invariant under f.
inline double fricke_vogt(const TracePoint& p) {
    return p.x * p.x + p.y * p.y + p.z * p.z - 2.0 * p.x * p.y * p.z - 1.0;
}

/// Seed triple (x_1, x_0, x_{-1}) on the line of initial conditions.
TracePoint gamma_line(const CouplingParams& params, SpectralVariable s);

/// Closed form (s/4)(1/r - r)^2 of the character along the line of initial conditions.
double gamma_invariant(const CouplingParams& params, SpectralVariable s);

/// Period-two curve (x, x/(2x-1), x); throws DomainError at x = 1/2.
TracePoint per2_curve(double x);

/// Jacobian of f at p.
Matrix3 jacobian(const TracePoint& p);

enum class Symmetry { S, S2, S3, S4 };

/// s: (z, y, x) reverses f; s2, s3, s4 flip two signs and commute with f^6.
TracePoint apply_symmetry(Symmetry which, const TracePoint& p);
std::string symmetry_name(Symmetry which);

/// Factor map F(theta, phi) = (cos 2pi(theta + phi), cos 2pi theta, cos 2pi phi).
TracePoint torus_factor(double theta, double phi);

struct TorusPoint {
    double theta;
    double phi;
};

/// Hyperbolic torus automorphism (theta + phi, theta) mod 1.
TorusPoint torus_map(TorusPoint p);

struct SurfaceLevel {
    double value;
};

struct MeshPoint {
    double x, y, z, level;
};

struct MeshWindow {
    double x_min = -2.0, x_max = 2.0;
    double y_min = -2.0, y_max = 2.0;
};

/// Points of the surface {I = V} over a resolution x resolution grid of the
/// window, solving the quadratic in z for each (x, y). Grid points where the
/// discriminant is negative emit nothing; a zero discriminant emits one point.
std::vector<MeshPoint> surface_mesh(SurfaceLevel level, std::size_t resolution,
                                    const MeshWindow& window);

}  // namespace fibising
