#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fibising/tracecore.hpp"

namespace fibising {

/// The map under test; swapping in a perturbed map must make the suite fail.
struct TraceMapPair {
    std::function<TracePoint(const TracePoint&)> forward = trace_map;
    std::function<TracePoint(const TracePoint&)> inverse = trace_map_inverse;
};

struct IdentityCheck {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0;
    bool passed() const { return residual <= threshold; }
};

struct IdentityOptions {
    std::uint64_t seed = 20240611;
    int samples = 1000;
    int torus_grid = 100;
};

/// Residuals of the algebraic identities of the trace map: invariance of the
/// Fricke-Vogt character, inverse, seed matrices, singularity cycle,
/// period-two curve, Jacobian spectrum at P1, torus semiconjugacy, and the
/// (reversing) symmetries of f^6.
std::vector<IdentityCheck> run_identity_suite(const IdentityOptions& opts = {},
                                              const TraceMapPair& map = {});

/// Componentwise max |a - b| / max(1, |b|).
double relative_residual(const TracePoint& a, const TracePoint& b);

}  // namespace fibising
