#include "fibising/dynamics.hpp"

#include <cmath>
#include <string>

#include "fibising/errors.hpp"
#include "fibising/format.hpp"
#include "fibising/parallel.hpp"

namespace fibising {

namespace {

std::string describe(const TracePoint& p) {
    return "(" + format_double(p.x) + ", " + format_double(p.y) + ", " + format_double(p.z) + ")";
}

bool is_threshold_witness(const TracePoint& t, double c) {
    return std::abs(t.z) <= c && std::abs(t.x) > c && std::abs(t.y) > c;
}

}  // namespace

void OrbitBudget::validate() const {
    if (max_steps < 1) throw DomainError("orbit budget needs max_steps >= 1");
    if (!(escape_threshold >= 1.0)) throw DomainError("escape threshold C must be >= 1");
    if (!(overflow_guard > 1.0)) throw DomainError("overflow guard must exceed 1");
}

bool is_growth_witness(const TracePoint& t) {
    const double a = std::abs(t.x);
    const double b = std::abs(t.y);
    return a > 1.0 && b > 1.0 && a * b > std::abs(t.z);
}

OrbitVerdict classify_orbit(const TracePoint& p, const OrbitBudget& budget) {
    budget.validate();
    if (!p.finite()) throw NumericError("classify_orbit: non-finite input " + describe(p));
    const bool threshold = budget.criterion == EscapeCriterion::threshold;
    if (threshold && std::abs(p.z) > budget.escape_threshold) {
        throw DomainError("threshold criterion needs |x_{-1}| <= C, got " + describe(p));
    }

    OrbitVerdict verdict;
    TracePoint cur = p;
    for (int step = 0; step < budget.max_steps; ++step) {
        const bool witness = threshold ? is_threshold_witness(cur, budget.escape_threshold)
                                       : is_growth_witness(cur);
        if (witness) {
            verdict.status = OrbitStatus::escaped;
            verdict.step = step;
            verdict.triple = cur;
            verdict.steps_used = step;
            return verdict;
        }
        const TracePoint next = trace_map(cur);
        if (!next.finite() || next.max_abs() > budget.overflow_guard) {
            throw NumericError("orbit left the overflow guard at step " + std::to_string(step + 1) +
                               " without an escape witness; last triple " + describe(cur));
        }
        cur = next;
    }
    verdict.triple = cur;
    verdict.steps_used = budget.max_steps;
    return verdict;
}

DivergenceResult coordinate_divergence_check(const TracePoint& p, const OrbitBudget& budget,
                                             double threshold) {
    const OrbitVerdict verdict = classify_orbit(p, budget);
    if (!verdict.escaped()) {
        throw DomainError("coordinate_divergence_check requires an escaped orbit");
    }
    TracePoint cur = verdict.triple;
    for (int i = 0; i <= budget.max_steps; ++i) {
        if (std::abs(cur.x) > threshold && std::abs(cur.y) > threshold &&
            std::abs(cur.z) > threshold) {
            return DivergenceResult::confirmed;
        }
        const TracePoint next = trace_map(cur);
        if (!next.finite()) return DivergenceResult::inconclusive;
        if (!(std::abs(next.x) > std::abs(cur.x))) return DivergenceResult::refuted;
        cur = next;
    }
    return DivergenceResult::inconclusive;
}

double GridSpec::at(std::size_t i) const {
    if (count <= 1) return lo;
    if (i + 1 == count) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

std::vector<EscapeSample> escape_time_field(const CouplingParams& params, const GridSpec& grid,
                                            const OrbitBudget& budget, unsigned threads) {
    if (grid.count > 0 && !(grid.lo >= 0.0 && grid.hi >= 0.0)) {
        throw DomainError("escape field grid must lie in [0, inf)");
    }
    std::vector<EscapeSample> out(grid.count);
    parallel_for(grid.count, threads, [&](std::size_t i) {
        const double s = grid.at(i);
        out[i] = {s, classify_orbit(gamma_line(params, SpectralVariable(s)), budget)};
    });
    return out;
}

std::vector<TracePoint> orbit_points(const TracePoint& p, int steps, double overflow_guard) {
    std::vector<TracePoint> out{p};
    TracePoint cur = p;
    for (int i = 0; i < steps; ++i) {
        cur = trace_map(cur);
        if (!cur.finite() || cur.max_abs() > overflow_guard) break;
        out.push_back(cur);
    }
    return out;
}

}  // namespace fibising
