#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "veil/dist.hpp"
#include "veil/errors.hpp"
#include "veil/protocol.hpp"
#include "veil/rng.hpp"

namespace veil {

// ---------------------------------------------------------------------------
// Seeded Monte-Carlo experiments, the text formats (CSV, key=value config)
// and the small parsers the command-line front end shares with tests.
// ---------------------------------------------------------------------------

enum class NoiseFamily { Laplace, Normal };

inline std::string to_string(NoiseFamily f) {
    return f == NoiseFamily::Laplace ? "laplace" : "normal";
}

struct ExperimentSpec {
    NoiseFamily noise_family = NoiseFamily::Normal;
    std::vector<double> eta_values;  // noise-scale / person-effect ratios
    int n_start = 100;               // reading counts to evaluate: start..stop by step
    int n_stop = 1000;
    int n_step = 100;
    int trials = 10;
    double p_target = 0.05;
    std::uint64_t seed = 0;
};

struct CurvePoint {
    double eta = 0.0;
    int n = 0;
    double mean_confidence = 0.0;
    double std_confidence = 0.0;
    double mean_llr = 0.0;
};

inline void validate(const ExperimentSpec& spec) {
    if (spec.eta_values.empty()) throw ConfigError("experiment needs at least one eta");
    for (double eta : spec.eta_values) {
        if (!(eta > 0.0)) throw ConfigError("eta values must be > 0");
    }
    if (spec.n_start < 1 || spec.n_step < 1 || spec.n_stop < spec.n_start) {
        throw ConfigError("reading-count range must be nonempty with positive step");
    }
    if (spec.trials < 1) throw ConfigError("trials must be >= 1");
    if (!(spec.p_target > 0.0 && spec.p_target < 0.5)) {
        throw ConfigError("p_target must lie in (0, 0.5)");
    }
}

inline std::vector<int> reading_counts(const ExperimentSpec& spec) {
    std::vector<int> ns;
    for (int n = spec.n_start; n <= spec.n_stop; n += spec.n_step) ns.push_back(n);
    return ns;
}

namespace detail {
inline NoiseDistribution family_dist(NoiseFamily f, double mu, double sigma) {
    return f == NoiseFamily::Laplace ? NoiseDistribution::laplace(mu, sigma)
                                     : NoiseDistribution::normal(mu, sigma);
}
}  // namespace detail

// Confidence-vs-readings curves. Working in units where the person effect is
// 1 and the clean mean is 0 (evidence depends only on the ratio eta), each
// trial draws from the interfered law family(0, eta), accumulates evidence
// against family(-1, eta), and records the prefix sums at every requested
// reading count. Trial (e, t) runs on its own generator seeded by a fixed
// mix of (spec.seed, e, t), so the output is one specific function of the
// spec — independent of execution order and of `threads`, which only sets
// how many workers share the trial grid.
inline std::vector<CurvePoint> run_confidence_curve(const ExperimentSpec& spec,
                                                    int threads = 1) {
    validate(spec);
    if (threads < 1) throw ConfigError("threads must be >= 1");
    const std::vector<int> ns = reading_counts(spec);
    const int n_max = ns.back();
    const std::size_t etas = spec.eta_values.size();
    const std::size_t trials = static_cast<std::size_t>(spec.trials);

    // cum[e][t][i] = cumulative evidence after ns[i] readings.
    std::vector<std::vector<std::vector<double>>> cum(
        etas, std::vector<std::vector<double>>(trials, std::vector<double>(ns.size(), 0.0)));

    auto run_trial = [&](std::size_t e, std::size_t t) {
        const double eta = spec.eta_values[e];
        const NoiseDistribution truth = detail::family_dist(spec.noise_family, 0.0, eta);
        const NoiseDistribution alt = detail::family_dist(spec.noise_family, -1.0, eta);
        SeededRng rng(derive_seed(spec.seed, e, t));
        LlrState state;
        std::size_t slot = 0;
        for (int i = 1; i <= n_max; ++i) {
            state = llr_update(state, sample(truth, rng), truth, alt);
            if (i == ns[slot]) cum[e][t][slot++] = state.cum_llr;
        }
    };

    const std::size_t tasks = etas * trials;
    if (threads == 1 || tasks == 1) {
        for (std::size_t e = 0; e < etas; ++e) {
            for (std::size_t t = 0; t < trials; ++t) run_trial(e, t);
        }
    } else {
        const std::size_t workers = std::min<std::size_t>(threads, tasks);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t task = w; task < tasks; task += workers) {
                    run_trial(task / trials, task % trials);
                }
            });
        }
        for (std::thread& th : pool) th.join();
    }

    // Aggregate in fixed (eta, n, trial) order so results do not depend on
    // how the trials were scheduled.
    std::vector<CurvePoint> points;
    points.reserve(etas * ns.size());
    for (std::size_t e = 0; e < etas; ++e) {
        for (std::size_t i = 0; i < ns.size(); ++i) {
            CurvePoint pt;
            pt.eta = spec.eta_values[e];
            pt.n = ns[i];
            double conf_sum = 0.0;
            double llr_sum = 0.0;
            for (std::size_t t = 0; t < trials; ++t) {
                conf_sum += confidence_from_llr(cum[e][t][i]);
                llr_sum += cum[e][t][i];
            }
            pt.mean_confidence = conf_sum / static_cast<double>(trials);
            pt.mean_llr = llr_sum / static_cast<double>(trials);
            double sq = 0.0;
            for (std::size_t t = 0; t < trials; ++t) {
                const double d = confidence_from_llr(cum[e][t][i]) - pt.mean_confidence;
                sq += d * d;
            }
            pt.std_confidence =
                trials > 1 ? std::sqrt(sq / static_cast<double>(trials - 1)) : 0.0;
            points.push_back(pt);
        }
    }
    return points;
}

// Fraction of the strength budget an emission law spends on average.
inline double power_utilization(const NoiseDistribution& emission, double m) {
    if (!(m > 0.0)) throw ParameterError("max strength must be > 0");
    return mean(emission) / m;
}

inline double power_utilization(const ProtocolConfig& cfg, double m) {
    if (cfg.kind != ProtocolKind::NoiseInjection) {
        throw ProtocolError("power utilization is defined for the noise-injection protocol");
    }
    return power_utilization(cfg.emission_dist, m);
}

// --- Text formats -----------------------------------------------------------
// Numbers render with 9 significant digits, '.' decimal point, no locale.

inline std::string fmt_g9(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

inline void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& points) {
    out << "eta,n,mean_confidence,std_confidence,mean_llr\n";
    for (const CurvePoint& pt : points) {
        out << fmt_g9(pt.eta) << ',' << pt.n << ',' << fmt_g9(pt.mean_confidence) << ','
            << fmt_g9(pt.std_confidence) << ',' << fmt_g9(pt.mean_llr) << '\n';
    }
}

inline void write_trace_csv(std::ostream& out, const ObservationTrace& trace) {
    out << "t,emitted,value,clamped,b\n";
    for (std::size_t t = 0; t < trace.readings.size(); ++t) {
        const Reading& r = trace.readings[t];
        out << t << ',' << fmt_g9(trace.emitted[t]) << ',' << fmt_g9(r.value) << ','
            << (r.clamped ? 1 : 0) << ',' << r.truth_b << '\n';
    }
}

namespace detail {
inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

inline double parse_real(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
        throw ConfigError("cannot parse " + what + " from '" + t + "'");
    }
    return v;
}

inline long parse_int(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    long v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
        throw ConfigError("cannot parse " + what + " from '" + t + "'");
    }
    return v;
}
}  // namespace detail

// Distribution literals: laplace(mu,sigma) | normal(mu,sigma) |
// tnormal(mu,sigma,lo,hi) | point(mu).
inline NoiseDistribution parse_distribution(const std::string& text) {
    const std::string s = detail::trim(text);
    const auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')') {
        throw ConfigError("distribution literal must look like name(arg,...): '" + s + "'");
    }
    const std::string name = detail::trim(s.substr(0, open));
    const std::vector<std::string> args =
        detail::split(s.substr(open + 1, s.size() - open - 2), ',');
    auto arg = [&](std::size_t i) { return detail::parse_real(args[i], name + " argument"); };
    try {
        if (name == "laplace" && args.size() == 2) {
            return NoiseDistribution::laplace(arg(0), arg(1));
        }
        if (name == "normal" && args.size() == 2) {
            return NoiseDistribution::normal(arg(0), arg(1));
        }
        if (name == "tnormal" && args.size() == 4) {
            return NoiseDistribution::truncated_normal(arg(0), arg(1), arg(2), arg(3));
        }
        if (name == "point" && args.size() == 1) {
            return NoiseDistribution::point_mass(arg(0));
        }
    } catch (const ParameterError& e) {
        throw ConfigError("bad distribution '" + s + "': " + e.what());
    }
    throw ConfigError("unknown distribution literal '" + s + "'");
}

// Integer ranges: "start:stop:step" (step optional, default 1).
struct IntRange {
    int start = 0;
    int stop = 0;
    int step = 1;
};

inline IntRange parse_range(const std::string& text) {
    const std::vector<std::string> parts = detail::split(detail::trim(text), ':');
    if (parts.size() != 2 && parts.size() != 3) {
        throw ConfigError("range must look like start:stop[:step]: '" + text + "'");
    }
    IntRange r;
    r.start = static_cast<int>(detail::parse_int(parts[0], "range start"));
    r.stop = static_cast<int>(detail::parse_int(parts[1], "range stop"));
    r.step = parts.size() == 3 ? static_cast<int>(detail::parse_int(parts[2], "range step")) : 1;
    return r;
}

inline std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    for (const std::string& part : detail::split(text, ',')) {
        out.push_back(detail::parse_real(part, "list entry"));
    }
    return out;
}

// Flat key=value configuration files: one pair per line, '#' comments and
// blank lines ignored. Order preserved; repeated keys stay repeated (the
// command line decides precedence).
inline std::vector<std::pair<std::string, std::string>> parse_config_file(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        pairs.emplace_back(detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }
    return pairs;
}

// Columns of a CSV stream as written by this library (no quoting, '.'
// decimals). Returns the values of the named column.
inline std::vector<double> read_csv_column(std::istream& in, const std::string& column) {
    std::string header;
    if (!std::getline(in, header)) throw ConfigError("CSV input is empty");
    const std::vector<std::string> names = detail::split(detail::trim(header), ',');
    std::size_t col = names.size();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (detail::trim(names[i]) == column) col = i;
    }
    if (col == names.size()) throw ConfigError("CSV input has no '" + column + "' column");
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const std::vector<std::string> cells = detail::split(line, ',');
        if (cells.size() != names.size()) {
            throw ConfigError("CSV line " + std::to_string(lineno) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(names.size()));
        }
        values.push_back(detail::parse_real(cells[col], column));
    }
    return values;
}

}  // namespace veil
