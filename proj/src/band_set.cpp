#include "fibising/band_set.hpp"

#include <algorithm>
#include <cmath>

#include "fibising/errors.hpp"

namespace fibising {

BandSet::BandSet(std::vector<Interval> intervals, int level) : level_(level) {
    for (const auto& iv : intervals) {
        if (!(iv.lo <= iv.hi)) throw DomainError("interval with lo > hi");
    }
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const auto& iv : intervals) {
        if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
            intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
        } else {
            intervals_.push_back(iv);
        }
    }
}

double BandSet::total_length() const {
    double sum = 0.0;
    for (const auto& iv : intervals_) sum += iv.length();
    return sum;
}

double BandSet::min_width() const {
    double w = 0.0;
    bool first = true;
    for (const auto& iv : intervals_) {
        if (first || iv.length() < w) w = iv.length();
        first = false;
    }
    return w;
}

Interval BandSet::hull() const {
    if (intervals_.empty()) throw DomainError("hull of an empty band set");
    return {intervals_.front().lo, intervals_.back().hi};
}

bool BandSet::contains(double s, double slack) const {
    // First interval whose hi + slack >= s.
    auto it = std::lower_bound(intervals_.begin(), intervals_.end(), s,
                               [slack](const Interval& iv, double v) { return iv.hi + slack < v; });
    return it != intervals_.end() && it->lo - slack <= s;
}

bool BandSet::contains(const BandSet& other, double slack) const {
    for (const auto& iv : other.intervals_) {
        auto it = std::lower_bound(
            intervals_.begin(), intervals_.end(), iv.lo,
            [slack](const Interval& mine, double v) { return mine.hi + slack < v; });
        if (it == intervals_.end() || it->lo - slack > iv.lo || it->hi + slack < iv.hi) return false;
    }
    return true;
}

BandSet BandSet::unite(const BandSet& other) const {
    std::vector<Interval> all = intervals_;
    all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
    return BandSet(std::move(all), level_);
}

BandSet BandSet::intersect(const Interval& window) const {
    std::vector<Interval> out;
    for (const auto& iv : intervals_) {
        const double lo = std::max(iv.lo, window.lo);
        const double hi = std::min(iv.hi, window.hi);
        if (lo <= hi) out.push_back({lo, hi});
    }
    return BandSet(std::move(out), level_);
}

BandSet BandSet::inflate(double delta) const {
    std::vector<Interval> out;
    out.reserve(intervals_.size());
    for (const auto& iv : intervals_) out.push_back({iv.lo - delta, iv.hi + delta});
    return BandSet(std::move(out), level_);
}

double distance_to(const BandSet& set, double s, double* nearest) {
    const auto& ivs = set.intervals();
    if (ivs.empty()) throw DomainError("distance to an empty band set");
    auto it = std::lower_bound(ivs.begin(), ivs.end(), s,
                               [](const Interval& iv, double v) { return iv.hi < v; });
    double best = INFINITY;
    double where = s;
    if (it != ivs.end()) {
        if (it->lo <= s) {
            if (nearest) *nearest = s;
            return 0.0;
        }
        best = it->lo - s;
        where = it->lo;
    }
    if (it != ivs.begin()) {
        const double left = s - std::prev(it)->hi;
        if (left < best) {
            best = left;
            where = std::prev(it)->hi;
        }
    }
    if (nearest) *nearest = where;
    return best;
}

HausdorffReport directed_hausdorff(const BandSet& a, const BandSet& b) {
    if (a.empty() || b.empty()) throw DomainError("Hausdorff distance needs non-empty sets");
    HausdorffReport best;
    const auto consider = [&](double p) {
        double partner = p;
        const double d = distance_to(b, p, &partner);
        if (d > best.distance) best = {d, p, partner};
    };
    for (const auto& iv : a.intervals()) {
        consider(iv.lo);
        consider(iv.hi);
    }
    const auto& gaps = b.intervals();
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
        const double mid = 0.5 * (gaps[i].hi + gaps[i + 1].lo);
        if (a.contains(mid)) consider(mid);
    }
    return best;
}

HausdorffReport hausdorff_distance(const BandSet& a, const BandSet& b) {
    if (a.empty() || b.empty()) throw DomainError("Hausdorff distance needs non-empty sets");
    HausdorffReport ab = directed_hausdorff(a, b);
    HausdorffReport ba = directed_hausdorff(b, a);
    if (ba.distance > ab.distance) return ba;
    if (ab.distance == 0.0) ab.from = ab.to = a.intervals().front().lo;
    return ab;
}

}  // namespace fibising
