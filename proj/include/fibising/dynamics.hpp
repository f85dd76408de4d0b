#pragma once

#include <cstddef>
#include <vector>

#include "fibising/params.hpp"
#include "fibising/tracecore.hpp"

namespace fibising {

/// Which escape certificate classify_orbit looks for.
///  - consecutive_growth: |a| > 1, |b| > 1 and |ab| > |c| on the current triple
///    (a, b, c) = (x_{k+1}, x_k, x_{k-1}); needs no history.
///  - threshold: |c| <= C and |a|, |b| > C; only valid when the seed satisfies |x_{-1}| <= C.
enum class EscapeCriterion { consecutive_growth, threshold };

struct OrbitBudget {
    int max_steps = 10000;
    double escape_threshold = 1.0;
    double overflow_guard = 1e150;
    EscapeCriterion criterion = EscapeCriterion::consecutive_growth;

    void validate() const;
};

enum class OrbitStatus { escaped, undecided_bounded };

/// For escaped orbits `step` is the index k with f^k(p) = `triple` the first
/// witness; otherwise `triple` is the last iterate examined.
struct OrbitVerdict {
    OrbitStatus status = OrbitStatus::undecided_bounded;
    int step = -1;
    TracePoint triple{};
    int steps_used = 0;

    bool escaped() const { return status == OrbitStatus::escaped; }
};

/// True if the triple is an escape witness under the growth criterion.
bool is_growth_witness(const TracePoint& t);

/// Iterates the trace map from p until an escape witness appears or the
/// budget runs out. Throws NumericError on non-finite input or when the orbit
/// leaves the overflow guard before any witness was seen.
OrbitVerdict classify_orbit(const TracePoint& p, const OrbitBudget& budget = {});

enum class DivergenceResult { confirmed, refuted, inconclusive };

/// After the escape witness, checks that all three coordinates exceed
/// `threshold` in absolute value within budget.max_steps further steps while
/// |x_k| keeps increasing. Throws DomainError when p is not classified as escaped.
DivergenceResult coordinate_divergence_check(const TracePoint& p, const OrbitBudget& budget = {},
                                             double threshold = 1e6);

/// Uniform grid on [lo, hi] with `count` points (hi included when count > 1).
struct GridSpec {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t count = 0;

    double at(std::size_t i) const;
};

struct EscapeSample {
    double s;
    OrbitVerdict verdict;
};

/// Classifies gamma_r(s) for every grid point. Ordering follows the grid.
std::vector<EscapeSample> escape_time_field(const CouplingParams& params, const GridSpec& grid,
                                            const OrbitBudget& budget = {}, unsigned threads = 0);

/// Iterates p for `steps` steps (the result has steps + 1 entries), stopping
/// early if the orbit leaves the overflow guard.
std::vector<TracePoint> orbit_points(const TracePoint& p, int steps, double overflow_guard = 1e150);

}  // namespace fibising
