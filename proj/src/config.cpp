#include "fibising/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "fibising/errors.hpp"
#include "fibising/format.hpp"

namespace fibising {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (trim(text.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': not a number: '" + text + "'");
}

long long parse_int(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError("key '" + key + "': not an integer: '" + text + "'");
    }
    return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(parse_double(key, trim(item)));
    }
    return out;
}

std::string format_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

struct Field {
    std::string unit;
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <class T>
Field real(T RunConfig::*member, std::string unit) {
    return {std::move(unit),
            [member](RunConfig& c, const std::string& k, const std::string& v) {
                c.*member = parse_double(k, v);
            },
            [member](const RunConfig& c) { return format_double(c.*member); }};
}

template <class T>
Field integer(T RunConfig::*member, std::string unit) {
    return {std::move(unit),
            [member](RunConfig& c, const std::string& k, const std::string& v) {
                const long long n = parse_int(k, v);
                if constexpr (std::is_unsigned_v<T>) {
                    if (n < 0) throw ConfigError("key '" + k + "' must be non-negative");
                }
                c.*member = static_cast<T>(n);
            },
            [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

Field list(std::vector<double> RunConfig::*member, std::string unit) {
    return {std::move(unit),
            [member](RunConfig& c, const std::string& k, const std::string& v) {
                c.*member = parse_list(k, v);
            },
            [member](const RunConfig& c) { return format_list(c.*member); }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
    static const std::vector<std::pair<std::string, Field>> table = {
        {"version", integer(&RunConfig::version, "config format version")},
        {"J0", real(&RunConfig::j0, "coupling on letter A, > 0")},
        {"J1", real(&RunConfig::j1, "coupling on letter B, > 0")},
        {"level", integer(&RunConfig::level, "band level k")},
        {"k_min", integer(&RunConfig::k_min, "first cover level")},
        {"k_max", integer(&RunConfig::k_max, "last cover level")},
        {"offset", integer(&RunConfig::offset, "cover offset N, -1 = probe")},
        {"s_max", real(&RunConfig::s_max, "scan window end in s, <= 0 = (1+max J)^2+1")},
        {"density", real(&RunConfig::density, "scan points per unit s")},
        {"edge_tol", real(&RunConfig::edge_tol, "band edge bracket width in s")},
        {"tangency_tol", real(&RunConfig::tangency_tol, "|x| excess treated as a touching gap")},
        {"max_retries", integer(&RunConfig::max_retries, "4x scan refinements")},
        {"max_steps", integer(&RunConfig::max_steps, "orbit budget in steps")},
        {"escape_threshold", real(&RunConfig::escape_threshold, "escape constant C >= 1")},
        {"overflow_guard", real(&RunConfig::overflow_guard, "|coordinate| abort bound")},
        {"grid_lo", real(&RunConfig::grid_lo, "escape field start in s")},
        {"grid_hi", real(&RunConfig::grid_hi, "escape field end in s")},
        {"grid_points", integer(&RunConfig::grid_points, "escape field points")},
        {"orbit_point", list(&RunConfig::orbit_point, "x,y,z of an orbit to dump, empty = none")},
        {"dump_steps", integer(&RunConfig::dump_steps, "orbit dump length in steps")},
        {"windows", integer(&RunConfig::windows, "local dimension windows")},
        {"r_list", list(&RunConfig::r_list, "ratios J0/J1 for the parameter sweep")},
        {"inflate", real(&RunConfig::inflate, "containment slack in s")},
        {"oracle_k_max", integer(&RunConfig::oracle_k_max, "highest level of the product check")},
        {"oracle_samples", integer(&RunConfig::oracle_samples, "random points of the product check")},
        {"surface_levels", list(&RunConfig::surface_levels, "values of V")},
        {"surface_resolution", integer(&RunConfig::surface_resolution, "grid points per axis")},
        {"window_lo", real(&RunConfig::window_lo, "surface window start in x and y")},
        {"window_hi", real(&RunConfig::window_hi, "surface window end in x and y")},
        {"output_dir",
         {"directory for outputs",
          [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; },
          [](const RunConfig& c) { return c.output_dir; }}},
        {"threads", integer(&RunConfig::threads, "worker threads, 0 = FIBISING_THREADS or all cores")},
        {"seed", integer(&RunConfig::seed, "random seed")},
    };
    return table;
}

const Field& field(const std::string& key) {
    for (const auto& [name, f] : fields()) {
        if (name == key) return f;
    }
    throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

CouplingParams RunConfig::params() const {
    try {
        return {j0, j1};
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

ScanOptions RunConfig::scan_options() const {
    ScanOptions o;
    o.s_max = s_max;
    o.density = density;
    o.edge_tol = edge_tol;
    o.tangency_tol = tangency_tol;
    o.max_retries = max_retries;
    o.overflow_guard = overflow_guard;
    o.threads = threads;
    return o;
}

OrbitBudget RunConfig::budget() const {
    OrbitBudget b;
    b.max_steps = max_steps;
    b.escape_threshold = escape_threshold;
    b.overflow_guard = overflow_guard;
    return b;
}

void RunConfig::validate() const {
    if (version != kConfigVersion) {
        throw ConfigError("unsupported config version " + std::to_string(version));
    }
    (void)params();
    if (level < 1 || k_min < 1 || k_max < k_min) throw ConfigError("levels need 1 <= k_min <= k_max");
    if (offset < -1 || offset > 64) throw ConfigError("offset must be -1 or in [0, 64]");
    if (!(density > 0.0) || !(edge_tol > 0.0) || !(tangency_tol > 0.0)) {
        throw ConfigError("density and tolerances must be > 0");
    }
    if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
    if (max_steps < 1 || !(escape_threshold >= 1.0) || !(overflow_guard > 1.0)) {
        throw ConfigError("orbit budget needs max_steps >= 1, C >= 1, overflow_guard > 1");
    }
    if (!(grid_lo >= 0.0) || !(grid_hi >= grid_lo)) throw ConfigError("escape grid must lie in [0, inf)");
    if (!orbit_point.empty() && orbit_point.size() != 3) {
        throw ConfigError("orbit_point needs exactly three coordinates");
    }
    if (dump_steps < 0) throw ConfigError("dump_steps must be >= 0");
    if (!(inflate >= 0.0)) throw ConfigError("inflate must be >= 0");
    for (double r : r_list) {
        if (!(r > 0.0)) throw ConfigError("r_list entries must be > 0");
    }
    for (double v : surface_levels) {
        if (!(v >= 0.0)) throw ConfigError("surface levels must be >= 0");
    }
    if (!(window_hi >= window_lo)) throw ConfigError("surface window is empty");
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

std::vector<std::string> config_keys() {
    std::vector<std::string> out;
    for (const auto& [name, f] : fields()) out.push_back(name);
    return out;
}

std::string config_unit(const std::string& key) { return field(key).unit; }

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
    field(key).set(config, key, trim(value));
}

std::string get_config_value(const RunConfig& config, const std::string& key) {
    return field(key).get(config);
}

std::string serialize_config(const RunConfig& config) {
    std::string out;
    for (const auto& [name, f] : fields()) {
        out += name + " = " + f.get(config) + "  # " + f.unit + "\n";
    }
    return out;
}

RunConfig parse_config(const std::string& text) {
    RunConfig config;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        set_config_value(config, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace fibising
