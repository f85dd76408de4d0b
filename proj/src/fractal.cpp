#include "fibising/fractal.hpp"

#include <algorithm>
#include <cmath>

#include "fibising/errors.hpp"

namespace fibising {

std::int64_t box_count(const BandSet& bands, double eps) {
    if (!(eps > 0.0)) throw DomainError("box size must be positive");
    std::int64_t total = 0;
    bool any = false;
    std::int64_t last = 0;
    for (const auto& iv : bands.intervals()) {
        auto first = static_cast<std::int64_t>(std::floor(iv.lo / eps));
        auto end = iv.hi > iv.lo ? static_cast<std::int64_t>(std::ceil(iv.hi / eps)) - 1 : first;
        end = std::max(end, first);
        if (any) first = std::max(first, last + 1);
        if (end >= first) {
            total += end - first + 1;
            last = end;
            any = true;
        }
    }
    return total;
}

std::vector<double> EpsSchedule::values() const {
    std::vector<double> out;
    if (!(eps_max > 0.0) || !(eps_min > 0.0) || !(ratio > 1.0)) return out;
    for (double e = eps_max; e >= eps_min * (1.0 - 1e-12); e /= ratio) out.push_back(e);
    return out;
}

EpsSchedule schedule_for(double eps_max, double min_width) {
    EpsSchedule s;
    s.eps_max = eps_max;
    s.eps_min = 4.0 * std::max(min_width, 1e-12);
    // At least four scales: ratio 2 over three octaves.
    s.eps_min = std::min(s.eps_min, eps_max / 8.0);
    return s;
}

EpsSchedule default_schedule(const BandSet& bands) {
    if (bands.empty()) throw DomainError("no schedule for an empty band set");
    const Interval hull = bands.hull();
    const double extent = hull.length() > 0.0 ? hull.length() : 1.0;
    return schedule_for(extent / 4.0, bands.min_width());
}

DimensionEstimate box_dimension(const BandSet& bands, const std::vector<double>& eps) {
    if (eps.size() < 4) throw DomainError("box dimension needs at least four box sizes");
    DimensionEstimate est;
    est.eps_max = *std::max_element(eps.begin(), eps.end());
    est.eps_min = *std::min_element(eps.begin(), eps.end());
    if (!(est.eps_min > 0.0) || est.eps_min == est.eps_max) {
        throw DomainError("degenerate box-size schedule");
    }
    const auto n = static_cast<double>(eps.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<double> xs, ys;
    for (double e : eps) {
        const std::int64_t count = box_count(bands, e);
        est.counts.emplace_back(e, count);
        const double x = std::log(1.0 / e);
        const double y = count > 0 ? std::log(static_cast<double>(count)) : 0.0;
        xs.push_back(x);
        ys.push_back(y);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double sxx_c = sxx - sx * sx / n;
    if (!(sxx_c > 0.0)) throw DomainError("degenerate box-size schedule");
    est.slope = (sxy - sx * sy / n) / sxx_c;
    const double intercept = (sy - est.slope * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + est.slope * xs[i]);
        rss += r * r;
    }
    est.stderr_ = std::sqrt(rss / (n - 2.0) / sxx_c);
    est.value = std::clamp(est.slope, 0.0, 1.0);
    return est;
}

DimensionEstimate box_dimension(const BandSet& bands, const EpsSchedule& schedule) {
    return box_dimension(bands, schedule.values());
}

DimensionEstimate box_dimension(const BandSet& bands) {
    return box_dimension(bands, default_schedule(bands));
}

LocalDimensionProfile local_dimension_profile(const BandSet& bands, const WindowSpec& spec) {
    LocalDimensionProfile profile;
    profile.level = bands.level();
    if (bands.empty()) return profile;

    std::vector<std::pair<double, double>> windows = spec.explicit_windows;
    if (windows.empty()) {
        const std::size_t count = spec.count == 0 ? 8 : spec.count;
        const Interval hull = bands.hull();
        const double half = hull.length() / (2.0 * static_cast<double>(count));
        for (std::size_t i = 0; i < count; ++i) {
            windows.emplace_back(hull.lo + (2.0 * static_cast<double>(i) + 1.0) * half, half);
        }
    }
    const double min_width = bands.min_width();
    for (const auto& [center, half] : windows) {
        DimensionWindow w;
        w.center = center;
        w.half_width = half;
        const BandSet local = bands.intersect({center - half, center + half});
        w.intervals = local.size();
        w.low_confidence = local.size() < 3;
        if (!local.empty() && half > 0.0) {
            w.estimate = box_dimension(local, schedule_for(half / 2.0, min_width));
        }
        profile.windows.push_back(std::move(w));
    }
    return profile;
}

LocalDimensionProfile local_dimension_profile(const CouplingParams& params, int k,
                                              const WindowSpec& windows,
                                              const ScanOptions& opts) {
    BandLadder ladder(params, opts);
    BandSet cover = cover_union(ladder, k, 0);
    return local_dimension_profile(cover, windows);
}

std::vector<ParameterDimension> dimension_vs_parameters(double j1, const std::vector<double>& r_list,
                                                        int k, const ScanOptions& opts) {
    std::vector<ParameterDimension> out;
    for (double r : r_list) {
        if (!(r > 0.0)) throw DomainError("ratio r must be positive");
        BandLadder ladder(CouplingParams::from_ratio(r, j1), opts);
        out.push_back({r, box_dimension(cover_union(ladder, k, 0))});
    }
    return out;
}

BandSet middle_thirds_prefix(int depth) {
    if (depth < 0) throw DomainError("depth must be >= 0");
    std::vector<Interval> cur{{0.0, 1.0}};
    for (int d = 0; d < depth; ++d) {
        std::vector<Interval> next;
        next.reserve(2 * cur.size());
        for (const auto& iv : cur) {
            const double third = iv.length() / 3.0;
            next.push_back({iv.lo, iv.lo + third});
            next.push_back({iv.hi - third, iv.hi});
        }
        cur = std::move(next);
    }
    return BandSet(std::move(cur), depth);
}

}  // namespace fibising
