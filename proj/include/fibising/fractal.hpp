#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "fibising/band_set.hpp"
#include "fibising/params.hpp"
#include "fibising/spectrum.hpp"

namespace fibising {

/// Number of grid boxes [j eps, (j+1) eps) meeting the union, with each
/// interval read as [a, b) (a degenerate interval still occupies its box).
std::int64_t box_count(const BandSet& bands, double eps);

/// Geometric schedule eps_max, eps_max/ratio, ... down to eps_min.
struct EpsSchedule {
    double eps_max = 0.0;
    double eps_min = 0.0;
    double ratio = 2.0;

    std::vector<double> values() const;
};

/// eps_max = hull length / 4, eps_min = 4 max(min band width, 1e-12), ratio 2,
/// widened to at least four scales when the band set is too coarse.
EpsSchedule default_schedule(const BandSet& bands);

/// Fits eps_min = 4 max(min_width, 1e-12) under a given eps_max.
EpsSchedule schedule_for(double eps_max, double min_width);

struct DimensionEstimate {
    /// Slope clamped to [0, 1].
    double value = 0.0;
    /// Raw least-squares slope of log N against log(1/eps).
    double slope = 0.0;
    double stderr_ = 0.0;
    double eps_min = 0.0;
    double eps_max = 0.0;
    std::vector<std::pair<double, std::int64_t>> counts;
};

/// Ordinary least squares of log N(eps) on log(1/eps). Throws DomainError on
/// fewer than four scales or non-positive values.
DimensionEstimate box_dimension(const BandSet& bands, const std::vector<double>& eps);
DimensionEstimate box_dimension(const BandSet& bands, const EpsSchedule& schedule);
DimensionEstimate box_dimension(const BandSet& bands);

struct DimensionWindow {
    double center = 0.0;
    double half_width = 0.0;
    DimensionEstimate estimate;
    std::size_t intervals = 0;
    /// Fewer than three intervals in the window.
    bool low_confidence = false;
};

struct LocalDimensionProfile {
    int level = 0;
    std::vector<DimensionWindow> windows;
};

/// Either `count` equal slices of the band hull (the default, 8), or explicit
/// (center, half-width) windows.
struct WindowSpec {
    std::size_t count = 8;
    std::vector<std::pair<double, double>> explicit_windows;
};

/// Box dimension of bands within each window. All windows share eps_min,
/// tied to the narrowest band of the whole set.
LocalDimensionProfile local_dimension_profile(const BandSet& bands, const WindowSpec& windows = {});

/// Profile of the level-k cover Sigma_k (offset 0).
LocalDimensionProfile local_dimension_profile(const CouplingParams& params, int k,
                                              const WindowSpec& windows = {},
                                              const ScanOptions& opts = {});

struct ParameterDimension {
    double r = 0.0;
    DimensionEstimate estimate;
};

/// Global box dimension of Sigma_k for each ratio r at fixed J1.
std::vector<ParameterDimension> dimension_vs_parameters(double j1, const std::vector<double>& r_list,
                                                        int k, const ScanOptions& opts = {});

/// The 2^depth intervals of the depth-th middle-thirds construction on [0, 1].
BandSet middle_thirds_prefix(int depth);

}  // namespace fibising
