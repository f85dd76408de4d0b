#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fibising/band_set.hpp"
#include "fibising/params.hpp"
#include "fibising/tracecore.hpp"

namespace fibising {

// ---------------------------------------------------------------------------
// Trace sequence x_k(s) along the line of initial conditions
// ---------------------------------------------------------------------------

enum class TraceStatus { finite, overflowed };

/// x_k(s). An overflowed value is certified |x_k| > 1: the orbit had already
/// produced an escape witness before leaving the overflow guard. `value` then
/// carries only the sign (+-inf).
struct TraceValue {
    TraceStatus status = TraceStatus::finite;
    double value = 0.0;

    bool overflowed() const { return status == TraceStatus::overflowed; }
};

/// x_k(s) for k >= -1, seeded by gamma_line = (x_1, x_0, x_{-1}). If the
/// double recursion overflows before a witness it is redone in extended
/// precision; if that fails too a NumericError is thrown.
TraceValue trace_value(const CouplingParams& params, SpectralVariable s, int k,
                       double overflow_guard = 1e150);

/// x_k(s) and dx_k/ds together, as used by the band scanner. `derivative` is
/// NaN when the value overflowed.
struct TraceSample {
    TraceValue trace;
    double derivative = 0.0;
};
TraceSample trace_sample(const CouplingParams& params, double s, int k,
                         double overflow_guard = 1e150);

// ---------------------------------------------------------------------------
// Band sets
// ---------------------------------------------------------------------------

struct ScanOptions {
    /// Upper end of the scan window; <= 0 selects (1 + max(J0, J1))^2 + 1.
    double s_max = 0.0;
    /// Grid points per unit of s.
    double density = 2e4;
    /// Absolute bracket width at which band edges are accepted.
    double edge_tol = 1e-12;
    /// A gap whose peak |x| stays within 1 + tangency_tol is treated as
    /// closed (touching bands); a band whose trough |x| stays within
    /// 1 - tangency_tol and that is narrower than edge_tol is dropped.
    double tangency_tol = 1e-10;
    /// Re-scans at 4x density while features sit at grid resolution.
    int max_retries = 2;
    double overflow_guard = 1e150;
    unsigned threads = 0;

    double window_for(const CouplingParams& params) const;
};

struct BandDiagnostics {
    std::size_t grid_points = 0;
    double density = 0.0;
    int retries = 0;
    std::size_t extrema = 0;
    std::size_t in_cell_bands = 0;
    std::size_t closed_tangencies = 0;
    std::size_t dropped_tangencies = 0;
    /// Still at grid resolution after the last retry.
    bool resolution_warning = false;
    std::vector<std::string> warnings;
};

struct BandResult {
    BandSet bands;
    BandDiagnostics diagnostics;
};

/// Level-k band set {s in [0, s_max] : |x_{k-1}(s)| <= 1} (third coordinate of
/// f^k(gamma_r(s))). Edges are bracketed by bisection to edge_tol.
BandResult band_set(const CouplingParams& params, int k, const ScanOptions& opts = {});

/// Computes band sets lazily per level for one parameter set and caches them.
class BandLadder {
public:
    BandLadder(CouplingParams params, ScanOptions opts = {});

    const CouplingParams& params() const { return params_; }
    const ScanOptions& options() const { return opts_; }
    const BandResult& level(int k);

private:
    CouplingParams params_;
    ScanOptions opts_;
    std::map<int, BandResult> cache_;
};

struct NestedCover {
    BandSet sigma;
    int k = 0;
    int offset = 0;
    /// Whether sigma contains the next cover (k + 1) up to 2 edge_tol.
    bool nests_next = true;
    /// Largest distance by which the next cover sticks out of this one.
    double nesting_excess = 0.0;
};

/// Union of the band sets at levels N+k, N+k+1, N+k+2.
BandSet cover_union(BandLadder& ladder, int k, int offset);

/// The cover at level k, with its containment of the level-(k+1) cover checked.
NestedCover nested_cover(BandLadder& ladder, int k, int offset);
NestedCover nested_cover(const CouplingParams& params, int k, int offset,
                         const ScanOptions& opts = {});

/// Largest distance from a point of `inner` to `outer` (0 when contained).
double containment_excess(const BandSet& outer, const BandSet& inner);

/// Smallest offset N in [0, max_offset] for which the covers nest for every
/// k in [k_lo, k_hi - 1]; nullopt if none does.
std::optional<int> probe_offset(BandLadder& ladder, int k_lo, int k_hi, int max_offset = 5);

/// Outer approximation of the bounded-orbit set by the cover at level k_max.
/// offset < 0 selects the probed offset for levels 1..k_max.
BandSet b_infinity_approx(BandLadder& ladder, int k_max, int offset = -1);

/// Image of an s-axis band set under s -> {+2 sqrt(s), -2 sqrt(s)}.
BandSet symmetrize_to_energy(const BandSet& bands);

struct ConvergenceRow {
    int k = 0;
    /// dist_H(Sigma_k, Sigma_{k+1}); absent for the last level.
    std::optional<double> hausdorff;
    double length = 0.0;
};

struct ConvergenceStudy {
    int offset = 0;
    bool nested = true;
    std::vector<ConvergenceRow> rows;
};

/// Hausdorff distances between consecutive covers and cover lengths for
/// k in [k_lo, k_hi]. offset < 0 selects the probed offset.
ConvergenceStudy convergence_study(BandLadder& ladder, int k_lo, int k_hi, int offset = -1);

}  // namespace fibising
