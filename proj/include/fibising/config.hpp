#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fibising/dynamics.hpp"
#include "fibising/params.hpp"
#include "fibising/spectrum.hpp"
#include "fibising/tracecore.hpp"

namespace fibising {

inline constexpr int kConfigVersion = 1;

/// Everything a CLI run depends on. Serialized as flat "key = value" lines.
struct RunConfig {
    int version = kConfigVersion;

    double j0 = 1.0;
    double j1 = 1.0;
    int level = 8;
    int k_min = 1;
    int k_max = 8;
    /// Cover offset N; -1 probes the smallest N in [0, 5] that nests.
    int offset = -1;

    double s_max = 0.0;
    double density = 2e4;
    double edge_tol = 1e-12;
    double tangency_tol = 1e-10;
    int max_retries = 2;

    int max_steps = 10000;
    double escape_threshold = 1.0;
    double overflow_guard = 1e150;
    double grid_lo = 0.0;
    double grid_hi = 5.0;
    std::size_t grid_points = 501;
    std::vector<double> orbit_point;
    int dump_steps = 20;

    std::size_t windows = 8;
    std::vector<double> r_list;

    double inflate = 1e-9;
    int oracle_k_max = 12;
    int oracle_samples = 100;

    std::vector<double> surface_levels{0.0001, 0.01, 0.05, 1.0};
    std::size_t surface_resolution = 101;
    double window_lo = -2.0;
    double window_hi = 2.0;

    std::string output_dir = "out";
    unsigned threads = 0;
    std::uint64_t seed = 20240611;

    CouplingParams params() const;
    ScanOptions scan_options() const;
    OrbitBudget budget() const;

    /// Throws ConfigError on an invalid combination.
    void validate() const;
};

/// Names of all keys, in serialization order.
std::vector<std::string> config_keys();

/// Unit/annotation for a key (written as a trailing comment).
std::string config_unit(const std::string& key);

/// Sets one key from its textual value; throws ConfigError on unknown keys or bad values.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);
std::string get_config_value(const RunConfig& config, const std::string& key);

std::string serialize_config(const RunConfig& config);
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace fibising
