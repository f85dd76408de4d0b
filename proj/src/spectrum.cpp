#include "fibising/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fibising/dynamics.hpp"
#include "fibising/errors.hpp"
#include "fibising/format.hpp"
#include "fibising/parallel.hpp"

namespace fibising {

namespace {

enum class EvalOutcome { finite, certified_overflow, uncertified_overflow };

template <class T>
struct Evaluation {
    EvalOutcome outcome = EvalOutcome::finite;
    T value = 0;
    T derivative = 0;
};

template <class T>
bool growth_witness(T a, T b, T c) {
    using std::abs;
    return abs(a) > 1 && abs(b) > 1 && abs(a) * abs(b) > abs(c);
}

// Runs the trace recursion x_{m+1} = 2 x_m x_{m-1} - x_{m-2} with its
// s-derivative from the seeds (x_1, x_0, x_{-1}) up to x_k.
template <class T>
Evaluation<T> evaluate(const CouplingParams& params, double s, int k, T guard) {
    const T j1 = params.j1();
    const T j0 = params.j0();
    const T sv = s;
    T a = (sv - (1 + j1 * j1)) / (2 * j1);
    T b = (sv - (1 + j0 * j0)) / (2 * j0);
    T c = (j0 / j1 + j1 / j0) / 2;
    T da = 1 / (2 * j1);
    T db = 1 / (2 * j0);
    T dc = 0;

    Evaluation<T> out;
    if (k == -1) {
        out.value = c;
        out.derivative = dc;
        return out;
    }
    if (k == 0) {
        out.value = b;
        out.derivative = db;
        return out;
    }
    bool witness = growth_witness(a, b, c);
    for (int m = 1; m < k; ++m) {
        const T next = 2 * a * b - c;
        const T dnext = 2 * (da * b + a * db) - dc;
        using std::abs;
        using std::isfinite;
        if (!isfinite(next) || abs(next) > guard) {
            if (!witness) {
                out.outcome = EvalOutcome::uncertified_overflow;
                return out;
            }
            // Past a witness the product term dominates, so signs follow
            // sign(x_{m+1}) = sign(x_m) sign(x_{m-1}).
            int sa = a < 0 ? -1 : 1;
            int sb = b < 0 ? -1 : 1;
            for (int j = m; j < k; ++j) {
                const int sn = sa * sb;
                sb = sa;
                sa = sn;
            }
            out.outcome = EvalOutcome::certified_overflow;
            out.value = sa * std::numeric_limits<T>::infinity();
            out.derivative = std::numeric_limits<T>::quiet_NaN();
            return out;
        }
        c = b;
        b = a;
        a = next;
        dc = db;
        db = da;
        da = dnext;
        witness = witness || growth_witness(a, b, c);
    }
    out.value = a;
    out.derivative = da;
    return out;
}

TraceSample sample_with_fallback(const CouplingParams& params, double s, int k, double guard) {
    if (k < -1) throw DomainError("trace index must be >= -1");
    const auto d = evaluate<double>(params, s, k, guard);
    if (d.outcome != EvalOutcome::uncertified_overflow) {
        const TraceStatus status = d.outcome == EvalOutcome::certified_overflow
                                       ? TraceStatus::overflowed
                                       : TraceStatus::finite;
        return {{status, d.value}, d.derivative};
    }
    // Redo in extended precision; its wider exponent range lets the witness
    // appear before the overflow guard is hit.
    const auto e = evaluate<long double>(params, s, k, static_cast<long double>(guard) * 1e300L);
    if (e.outcome == EvalOutcome::uncertified_overflow ||
        (e.outcome == EvalOutcome::finite && std::abs(e.value) > guard)) {
        throw NumericError("x_" + std::to_string(k) + "(" + format_double(s) +
                           ") overflows without an escape witness");
    }
    if (e.outcome == EvalOutcome::certified_overflow) {
        return {{TraceStatus::overflowed, static_cast<double>(e.value)},
                std::numeric_limits<double>::quiet_NaN()};
    }
    return {{TraceStatus::finite, static_cast<double>(e.value)}, static_cast<double>(e.derivative)};
}

int sign_of(double v) { return v < 0.0 ? -1 : (v > 0.0 ? 1 : 0); }

struct Point {
    double s;
    double x;   // edge function x_{k-1}(s); +-inf when overflowed
    double dx;  // derivative, NaN when unknown
    bool inside() const { return std::abs(x) <= 1.0; }
};

class Scanner {
public:
    Scanner(const CouplingParams& params, int trace_index, const ScanOptions& opts,
            BandDiagnostics& diag)
        : params_(params), index_(trace_index), opts_(opts), diag_(diag) {}

    Point at(double s) const {
        const TraceSample t = sample_with_fallback(params_, s, index_, opts_.overflow_guard);
        return {s, t.trace.value, t.derivative};
    }

    // Boundary between pred(lo) and !pred(hi).
    template <class Pred>
    double bisect(double lo, double hi, Pred pred) const {
        while (hi - lo > opts_.edge_tol) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (pred(at(mid))) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    }

    // Location of the derivative sign change inside [a, b].
    Point extremum(const Point& a, const Point& b) const {
        const int sa = sign_of(a.dx);
        double lo = a.s;
        double hi = b.s;
        while (hi - lo > opts_.edge_tol) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const Point p = at(mid);
            if (std::isnan(p.dx)) break;
            if (sign_of(p.dx) == sa) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return at(0.5 * (lo + hi));
    }

    // Walks one monotone piece [u, v] and updates the running band state.
    void piece(const Point& u, const Point& v) {
        const bool iu = inside_state_;
        const bool iv = v.inside();
        if (iu && !iv) {
            const double e = bisect(u.s, v.s, [](const Point& p) { return p.inside(); });
            close(e);
        } else if (!iu && iv) {
            const double e = bisect(u.s, v.s, [](const Point& p) { return !p.inside(); });
            open(e);
        } else if (!iu && !iv && sign_of(u.x) != sign_of(v.x)) {
            // x runs monotonically from one side of [-1, 1] to the other
            // within the piece: a whole band sits inside it.
            ++diag_.in_cell_bands;
            const double up = u.x > 0.0 ? 1.0 : -1.0;
            const double e1 = bisect(u.s, v.s, [up](const Point& p) { return p.x * up > 1.0; });
            const double e2 = bisect(u.s, v.s, [up](const Point& p) { return p.x * up >= -1.0; });
            open(std::min(e1, e2));
            close(std::max(e1, e2));
        }
        inside_state_ = iv;
    }

    void cell(const Point& a, const Point& b) {
        const bool deriv_known = !std::isnan(a.dx) && !std::isnan(b.dx);
        if (deriv_known && sign_of(a.dx) != sign_of(b.dx) && sign_of(a.dx) != 0 &&
            sign_of(b.dx) != 0) {
            ++diag_.extrema;
            Point m = extremum(a, b);
            const double peak = std::abs(m.x);
            if (a.inside() && b.inside() && !m.inside() && peak <= 1.0 + opts_.tangency_tol) {
                // Gap that never opens beyond roundoff: touching bands.
                ++diag_.closed_tangencies;
                m.x = std::copysign(1.0, m.x);
            } else if (!a.inside() && !b.inside() && m.inside() &&
                       peak >= 1.0 - opts_.tangency_tol) {
                // Band that barely touches |x| = 1; kept only if wide enough.
                const double e1 = bisect(a.s, m.s, [](const Point& p) { return !p.inside(); });
                const double e2 = bisect(m.s, b.s, [](const Point& p) { return p.inside(); });
                if (e2 - e1 < opts_.edge_tol) {
                    ++diag_.dropped_tangencies;
                    m.x = std::copysign(1.0 + 2.0 * opts_.tangency_tol, m.x);
                }
            }
            piece(a, m);
            piece(m, b);
        } else {
            piece(a, b);
        }
    }

    BandSet run(const std::vector<Point>& grid, int level) {
        intervals_.clear();
        inside_state_ = grid.front().inside();
        if (inside_state_) start_ = grid.front().s;
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) cell(grid[i], grid[i + 1]);
        if (inside_state_) {
            intervals_.push_back({start_, grid.back().s});
            diag_.warnings.push_back("band reaches the upper end of the scan window");
        }
        return BandSet(intervals_, level);
    }

private:
    void open(double s) { start_ = s; }
    void close(double s) { intervals_.push_back({start_, std::max(start_, s)}); }

    const CouplingParams& params_;
    int index_;
    const ScanOptions& opts_;
    BandDiagnostics& diag_;
    std::vector<Interval> intervals_;
    bool inside_state_ = false;
    double start_ = 0.0;
};

bool near_resolution(const BandSet& bands, double spacing) {
    const auto& ivs = bands.intervals();
    for (std::size_t i = 0; i < ivs.size(); ++i) {
        if (ivs[i].length() < 2.0 * spacing) return true;
        if (i + 1 < ivs.size() && ivs[i + 1].lo - ivs[i].hi < 2.0 * spacing) return true;
    }
    return false;
}

}  // namespace

TraceValue trace_value(const CouplingParams& params, SpectralVariable s, int k,
                       double overflow_guard) {
    return sample_with_fallback(params, s.value(), k, overflow_guard).trace;
}

TraceSample trace_sample(const CouplingParams& params, double s, int k, double overflow_guard) {
    return sample_with_fallback(params, s, k, overflow_guard);
}

double ScanOptions::window_for(const CouplingParams& params) const {
    if (s_max > 0.0) return s_max;
    const double top = 1.0 + std::max(params.j0(), params.j1());
    return top * top + 1.0;
}

BandResult band_set(const CouplingParams& params, int k, const ScanOptions& opts) {
    if (k < 1) throw DomainError("band level must be >= 1");
    if (!(opts.density > 0.0) || !(opts.edge_tol > 0.0) || !(opts.tangency_tol > 0.0)) {
        throw DomainError("scan density and tolerances must be positive");
    }
    const double s_max = opts.window_for(params);
    const int trace_index = k - 1;

    BandResult result;
    double density = opts.density;
    for (int attempt = 0;; ++attempt) {
        BandDiagnostics diag;
        diag.retries = attempt;
        diag.density = density;
        const auto cells = static_cast<std::size_t>(std::ceil(density * s_max));
        const std::size_t n = std::max<std::size_t>(cells, 2) + 1;
        diag.grid_points = n;

        Scanner scanner(params, trace_index, opts, diag);
        const GridSpec grid{0.0, s_max, n};
        std::vector<Point> samples(n);
        parallel_for(n, opts.threads, [&](std::size_t i) { samples[i] = scanner.at(grid.at(i)); });

        BandSet bands = scanner.run(samples, k);
        const double spacing = s_max / static_cast<double>(n - 1);
        const bool fine = !near_resolution(bands, spacing) && diag.in_cell_bands == 0;
        result = {std::move(bands), std::move(diag)};
        if (fine) break;
        if (attempt >= opts.max_retries) {
            result.diagnostics.resolution_warning = true;
            result.diagnostics.warnings.push_back(
                "band features remain at grid resolution after " + std::to_string(attempt) +
                " refinements");
            break;
        }
        density *= 4.0;
    }
    return result;
}

BandLadder::BandLadder(CouplingParams params, ScanOptions opts)
    : params_(params), opts_(opts) {}

const BandResult& BandLadder::level(int k) {
    auto it = cache_.find(k);
    if (it == cache_.end()) it = cache_.emplace(k, band_set(params_, k, opts_)).first;
    return it->second;
}

BandSet cover_union(BandLadder& ladder, int k, int offset) {
    if (k < 1 || offset < 0) throw DomainError("cover needs k >= 1 and offset >= 0");
    const int base = offset + k;
    BandSet out = ladder.level(base).bands.unite(ladder.level(base + 1).bands)
                      .unite(ladder.level(base + 2).bands);
    out.set_level(k);
    return out;
}

double containment_excess(const BandSet& outer, const BandSet& inner) {
    if (inner.empty()) return 0.0;
    if (outer.empty()) return INFINITY;
    return directed_hausdorff(inner, outer).distance;
}

NestedCover nested_cover(BandLadder& ladder, int k, int offset) {
    NestedCover out;
    out.k = k;
    out.offset = offset;
    out.sigma = cover_union(ladder, k, offset);
    const BandSet next = cover_union(ladder, k + 1, offset);
    out.nesting_excess = containment_excess(out.sigma, next);
    out.nests_next = out.nesting_excess <= 2.0 * ladder.options().edge_tol;
    return out;
}

NestedCover nested_cover(const CouplingParams& params, int k, int offset,
                         const ScanOptions& opts) {
    BandLadder ladder(params, opts);
    return nested_cover(ladder, k, offset);
}

std::optional<int> probe_offset(BandLadder& ladder, int k_lo, int k_hi, int max_offset) {
    for (int offset = 0; offset <= max_offset; ++offset) {
        bool ok = true;
        for (int k = k_lo; k < k_hi && ok; ++k) ok = nested_cover(ladder, k, offset).nests_next;
        if (ok) return offset;
    }
    return std::nullopt;
}

BandSet b_infinity_approx(BandLadder& ladder, int k_max, int offset) {
    if (k_max < 1) throw DomainError("k_max must be >= 1");
    if (offset < 0) offset = probe_offset(ladder, 1, k_max).value_or(0);
    return cover_union(ladder, k_max, offset);
}

BandSet symmetrize_to_energy(const BandSet& bands) {
    std::vector<Interval> out;
    out.reserve(2 * bands.size());
    for (const auto& iv : bands.intervals()) {
        if (iv.lo < 0.0) throw DomainError("symmetrize_to_energy needs s >= 0");
        const double lo = 2.0 * std::sqrt(iv.lo);
        const double hi = 2.0 * std::sqrt(iv.hi);
        out.push_back({lo, hi});
        out.push_back({-hi, -lo});
    }
    return BandSet(std::move(out), bands.level());
}

ConvergenceStudy convergence_study(BandLadder& ladder, int k_lo, int k_hi, int offset) {
    if (k_lo < 1 || k_hi < k_lo) throw DomainError("convergence study needs 1 <= k_lo <= k_hi");
    ConvergenceStudy study;
    if (offset < 0) {
        const auto probed = probe_offset(ladder, k_lo, k_hi);
        study.nested = probed.has_value();
        offset = probed.value_or(0);
    }
    study.offset = offset;
    BandSet current = cover_union(ladder, k_lo, offset);
    for (int k = k_lo; k <= k_hi; ++k) {
        ConvergenceRow row;
        row.k = k;
        row.length = current.total_length();
        if (k < k_hi) {
            BandSet next = cover_union(ladder, k + 1, offset);
            if (!current.empty() && !next.empty()) {
                row.hausdorff = hausdorff_distance(current, next).distance;
            }
            if (containment_excess(current, next) > 2.0 * ladder.options().edge_tol) {
                study.nested = false;
            }
            current = std::move(next);
        }
        study.rows.push_back(row);
    }
    return study;
}

}  // namespace fibising
