#pragma once

#include <cstddef>
#include <vector>

namespace fibising {

struct Interval {
    double lo;
    double hi;

    double length() const { return hi - lo; }
    bool operator==(const Interval&) const = default;
};

/// A finite union of closed intervals, kept sorted with strictly separated
/// members (touching or overlapping intervals are merged on construction).
class BandSet {
public:
    BandSet() = default;
    explicit BandSet(std::vector<Interval> intervals, int level = 0);

    const std::vector<Interval>& intervals() const { return intervals_; }
    int level() const { return level_; }
    void set_level(int level) { level_ = level; }

    bool empty() const { return intervals_.empty(); }
    std::size_t size() const { return intervals_.size(); }
    double total_length() const;
    double min_width() const;
    /// [first lo, last hi]; requires a non-empty set.
    Interval hull() const;

    /// Membership with every interval widened by `slack` on both sides.
    bool contains(double s, double slack = 0.0) const;
    /// True if every interval of `other` lies in this set widened by `slack`.
    bool contains(const BandSet& other, double slack = 0.0) const;

    BandSet unite(const BandSet& other) const;
    BandSet intersect(const Interval& window) const;
    BandSet inflate(double delta) const;

    bool operator==(const BandSet& other) const { return intervals_ == other.intervals_; }

private:
    std::vector<Interval> intervals_;
    int level_ = 0;
};

struct HausdorffReport {
    double distance = 0.0;
    /// The point attaining the max-min distance and its nearest partner in the other set.
    double from = 0.0;
    double to = 0.0;
};

/// Distance from s to the closest point of a non-empty set.
double distance_to(const BandSet& set, double s, double* nearest = nullptr);

/// sup over a in A of the distance from a to B, with its witness pair.
HausdorffReport directed_hausdorff(const BandSet& a, const BandSet& b);

/// Exact Hausdorff distance between two non-empty interval unions. The
/// one-sided sup over A is attained at an endpoint of A or at the midpoint of
/// a gap of B lying inside A, so only those candidates are examined.
HausdorffReport hausdorff_distance(const BandSet& a, const BandSet& b);

}  // namespace fibising
