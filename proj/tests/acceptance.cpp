// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fibising/commands.hpp"
#include "fibising/dynamics.hpp"
#include "fibising/errors.hpp"
#include "fibising/fermion_oracle.hpp"
#include "fibising/fractal.hpp"
#include "fibising/identities.hpp"
#include "fibising/spectrum.hpp"

using namespace fibising;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0 && secs > budget_s) {
        o.pass = false;
        o.detail += " [runtime over budget]";
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %2d: %s -- %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

ScanOptions scan() {
    ScanOptions o;
    o.threads = 0;
    return o;
}

// Σ_k ⊆ Σ_{k-1} over a ladder, hard violations beyond 2·edge_tol.
double worst_nesting(BandLadder& ladder, int k_lo, int k_hi, int offset) {
    double worst = 0.0;
    for (int k = k_lo; k < k_hi; ++k) {
        const BandSet outer = cover_union(ladder, k, offset);
        const BandSet inner = cover_union(ladder, k + 1, offset);
        worst = std::max(worst, containment_excess(outer, inner));
    }
    return worst;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    const ScanOptions opts = scan();

    run(1, "transfer product vs trace recursion, k=1..12", 10.0, [] {
        const double err = transfer_recursion_error(12, 100, 20240611);
        return Outcome{err < 1e-9, "max rel error " + num(err)};
    });

    run(2, "Fricke-Vogt invariant along orbits, n<=50", 1.0, [] {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> box(-2.0, 2.0);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            TracePoint p{box(rng), box(rng), box(rng)};
            const double i0 = fricke_vogt(p);
            for (int n = 1; n <= 50; ++n) {
                p = trace_map(p);
                // escaped-overflow tail: cancellation in I exceeds double precision
                if (p.max_abs() > 1e3) break;
                worst = std::max(worst, std::abs(fricke_vogt(p) - i0) / std::max(1.0, std::abs(i0)));
            }
        }
        return Outcome{worst < 1e-9, "max rel drift " + num(worst)};
    });

    run(3, "identity suite", 5.0, [] {
        const auto checks = run_identity_suite();
        std::string failed;
        for (const auto& c : checks) {
            if (!c.passed()) failed += " " + c.name;
        }
        return Outcome{failed.empty(), failed.empty() ? std::to_string(checks.size()) + " identities"
                                                      : "failed:" + failed};
    });

    run(4, "analytic level-2 band [0,4] for J1=1", 1.0, [&] {
        double worst = 0.0;
        bool single = true;
        for (double r : {0.3, 0.8, 1.0, 1.7, 3.0}) {
            const BandSet b = band_set(CouplingParams::from_ratio(r, 1.0), 2, opts).bands;
            if (b.size() != 1) {
                single = false;
                continue;
            }
            worst = std::max({worst, std::abs(b.intervals()[0].lo), std::abs(b.intervals()[0].hi - 4.0)});
        }
        return Outcome{single && worst <= 1e-10, "endpoint error " + num(worst)};
    });

    double nest_uniform = 0.0;
    run(5, "uniform chain end to end", 30.0, [&] {
        BandLadder ladder(CouplingParams(1.0, 1.0), opts);
        double worst = 0.0;
        for (int k = 1; k <= 10; ++k) {
            const BandSet sigma = cover_union(ladder, k, 0);
            const BandSet target({{0.0, 4.0}});
            worst = std::max(worst, hausdorff_distance(sigma, target).distance);
        }
        nest_uniform = worst_nesting(ladder, 1, 10, 0);
        const OracleSpectrum spec = oracle_spectrum(build_matrices(std::vector<double>{1.0, 1.0, 1.0}));
        const double expected[3] = {1.0, 1.0, 4.0};
        double oracle = 0.0;
        for (int i = 0; i < 3; ++i) oracle = std::max(oracle, std::abs(spec.s_values[i] - expected[i]));
        const ContainmentReport rep = containment_check(CouplingParams(1.0, 1.0), 3, 1e-9, opts);
        const bool ok = worst <= 1e-6 && oracle <= 1e-8 && rep.fraction() == 1.0;
        return Outcome{ok, "band dist " + num(worst) + ", oracle err " + num(oracle) +
                               ", containment " + num(rep.fraction())};
    });

    double nest_cantor = 0.0;
    run(6, "Cantor collapse trend at r=0.8", 300.0, [&] {
        BandLadder ladder(CouplingParams::from_ratio(0.8, 1.0), opts);
        // sigma_2 = [0,4] for J1 = 1, so offset 0 pins length(Sigma_1) = length(Sigma_2)
        const ConvergenceStudy study = convergence_study(ladder, 1, 8, 1);
        bool decreasing = true;
        int inversions = 0;
        std::string lengths;
        for (std::size_t i = 0; i < study.rows.size(); ++i) {
            lengths += (i ? "," : "") + num(study.rows[i].length);
            if (i == 0) continue;
            if (!(study.rows[i].length < study.rows[i - 1].length)) decreasing = false;
            if (i + 1 < study.rows.size() && study.rows[i].hausdorff && study.rows[i - 1].hausdorff &&
                *study.rows[i].hausdorff > *study.rows[i - 1].hausdorff) {
                ++inversions;
            }
        }
        const double ratio = study.rows.back().length / study.rows.front().length;
        nest_cantor = std::max(worst_nesting(ladder, 1, 8, 0), worst_nesting(ladder, 1, 8, 1));
        const bool ok = decreasing && ratio < 0.5 && inversions <= 1;
        return Outcome{ok, "lengths " + lengths + "; ratio " + num(ratio) + "; hausdorff inversions " +
                               std::to_string(inversions)};
    });

    run(7, "nesting of covers (criteria 5-6 runs)", 0.0, [&] {
        const double slack = 2.0 * opts.edge_tol;
        const bool ok = nest_uniform <= slack && nest_cantor <= slack;
        return Outcome{ok, "worst excess uniform " + num(nest_uniform) + ", r=0.8 " + num(nest_cantor)};
    });

    run(8, "box dimension calibration", 300.0, [&] {
        const DimensionEstimate cantor = box_dimension(middle_thirds_prefix(12));
        const DimensionEstimate line = box_dimension(BandSet({{0.0, 1.0}}));
        BandLadder ladder(CouplingParams::from_ratio(0.8, 1.0), opts);
        const BandSet sigma = cover_union(ladder, 10, 0);
        const DimensionEstimate global = box_dimension(sigma);
        const LocalDimensionProfile prof = local_dimension_profile(sigma);
        const double low = prof.windows.front().estimate.value;
        const double high = prof.windows.back().estimate.value;
        const double target = std::log(2.0) / std::log(3.0);
        const bool ok = std::abs(cantor.value - target) <= 0.03 && std::abs(line.value - 1.0) <= 0.02 &&
                        global.value > 0.02 && global.value < 0.98 && low > high;
        return Outcome{ok, "cantor " + num(cantor.value) + ", interval " + num(line.value) +
                               ", r=0.8 global " + num(global.value) + ", windows low/high " +
                               num(low) + "/" + num(high)};
    });

    run(9, "escape soundness on 10^4 escaped points", 10.0, [] {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> box(-3.0, 3.0);
        OrbitBudget budget;
        budget.max_steps = 200;
        OrbitBudget doubled = budget;
        doubled.max_steps = 2 * budget.max_steps;
        int found = 0, flips = 0, not_divergent = 0;
        while (found < 10000) {
            const TracePoint p{box(rng), box(rng), box(rng)};
            if (!classify_orbit(p, budget).escaped()) continue;
            ++found;
            if (!classify_orbit(p, doubled).escaped()) ++flips;
            if (coordinate_divergence_check(p, doubled) != DivergenceResult::confirmed) ++not_divergent;
        }
        return Outcome{flips == 0 && not_divergent == 0,
                       std::to_string(found) + " points, " + std::to_string(flips) + " flips, " +
                           std::to_string(not_divergent) + " without divergence"};
    });

    run(10, "deterministic bands/dim outputs", 0.0, [] {
        RunConfig c;
        c.j0 = 0.8;
        c.level = 9;
        c.r_list = {0.9, 1.0};
        std::ostringstream log;
        const fs::path base = fs::temp_directory_path() / "fibising_acceptance";
        fs::remove_all(base);
        std::vector<std::string> names;
        for (const char* run_dir : {"a", "b"}) {
            c.output_dir = (base / run_dir).string();
            cmd_bands(c, log);
            cmd_dim(c, log);
        }
        std::size_t compared = 0;
        bool same = true;
        for (const auto& entry : fs::directory_iterator(base / "a")) {
            const fs::path other = base / "b" / entry.path().filename();
            same = same && fs::exists(other) && slurp(entry.path()) == slurp(other);
            ++compared;
        }
        fs::remove_all(base);
        return Outcome{same && compared >= 8, std::to_string(compared) + " files compared"};
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
