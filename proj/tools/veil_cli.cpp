// veil — command-line front end for the hiding-protocol simulator.
//
// Subcommands: simulate, detect, complexity, curve, solve2d.
// Flags shared by every subcommand: --seed, --config, --out.
// Exit codes: 0 success, 1 configuration/usage error, 2 numeric error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "veil/veil.hpp"

namespace {

struct CommonArgs {
    std::uint64_t seed = 0;
    std::string config_path;
    std::string out_path;
};

void add_common(CLI::App* sub, CommonArgs* common) {
    sub->add_option("--seed", common->seed, "random seed (64-bit)");
    sub->add_option("--config", common->config_path,
                    "flat key=value file supplying defaults for this subcommand");
    sub->add_option("--out", common->out_path, "write output here instead of stdout");
}

// Run `body` with the chosen output stream.
template <typename Fn>
void with_output(const CommonArgs& common, Fn&& body) {
    if (common.out_path.empty()) {
        body(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(common.out_path);
    if (!out) throw veil::ConfigError("cannot open output file '" + common.out_path + "'");
    body(out);
}

std::vector<int> parse_bits(const std::string& text) {
    std::vector<int> bits;
    for (double v : veil::parse_real_list(text)) {
        if (v != 0.0 && v != 1.0) throw veil::ConfigError("bits must be 0 or 1");
        bits.push_back(v == 0.0 ? 0 : 1);
    }
    return bits;
}

// --- simulate ----------------------------------------------------------------

struct SimulateArgs {
    CommonArgs common;
    std::string protocol;
    double delta = 0.0;
    std::string shift_dist;
    std::string emission;
    double max_strength = 30.0;
    double decay_c = 0.5;
    double sender_pos = 0.0;
    double adversary_pos = 10.0;
    std::string interference = "point(0)";
    std::string bits;
    int n = 0;
    int b = 1;
};

void register_simulate(CLI::App& app, SimulateArgs& args) {
    CLI::App* sub = app.add_subcommand("simulate", "run a hiding protocol, write readings CSV");
    add_common(sub, &args.common);
    sub->add_option("--protocol", args.protocol, "shift | random-shift | noise-injection")
        ->required();
    sub->add_option("--delta", args.delta, "constant person effect the shift protocol cancels");
    sub->add_option("--shift-dist", args.shift_dist,
                    "random-shift law, e.g. tnormal(2,0.5,0,4)");
    sub->add_option("--emission", args.emission,
                    "noise-injection emission law, e.g. normal(20,2)");
    sub->add_option("--m", args.max_strength, "sender's maximum strength");
    sub->add_option("--c", args.decay_c, "decay per meter");
    sub->add_option("--sender", args.sender_pos, "sender position (m)");
    sub->add_option("--adversary", args.adversary_pos, "adversary position (m)");
    sub->add_option("--interference", args.interference,
                    "person effect when present: point(d) or tnormal(...)");
    sub->add_option("--bits", args.bits, "explicit interference bits, e.g. 0,1,1,0");
    sub->add_option("--n", args.n, "emit this many steps with a constant bit");
    sub->add_option("--b", args.b, "the constant bit used with --n");
    sub->callback([&args] {
        veil::Environment1D env;
        env.sender_pos = args.sender_pos;
        env.adversary_pos = args.adversary_pos;
        env.decay_c = args.decay_c;
        env.max_strength = args.max_strength;
        env.interference = veil::parse_distribution(args.interference);

        veil::ProtocolConfig cfg;
        if (args.protocol == "shift") {
            cfg = veil::ProtocolConfig::shift(args.delta);
        } else if (args.protocol == "random-shift") {
            if (args.shift_dist.empty()) {
                throw veil::ConfigError("random-shift needs --shift-dist");
            }
            cfg = veil::ProtocolConfig::random_shift(veil::parse_distribution(args.shift_dist));
        } else if (args.protocol == "noise-injection") {
            if (args.emission.empty()) {
                throw veil::ConfigError("noise-injection needs --emission");
            }
            cfg = veil::ProtocolConfig::noise_injection(veil::parse_distribution(args.emission));
        } else {
            throw veil::ConfigError("unknown protocol '" + args.protocol + "'");
        }

        std::vector<int> bits;
        if (!args.bits.empty()) {
            bits = parse_bits(args.bits);
        } else if (args.n > 0) {
            if (args.b != 0 && args.b != 1) throw veil::ConfigError("--b must be 0 or 1");
            bits.assign(args.n, args.b);
        } else {
            throw veil::ConfigError("provide --bits or a positive --n");
        }

        const veil::ObservationTrace trace =
            veil::run_trace(cfg, env, bits, args.common.seed);
        with_output(args.common, [&](std::ostream& out) { veil::write_trace_csv(out, trace); });
        if (cfg.kind == veil::ProtocolKind::NoiseInjection) {
            std::cerr << "power_utilization="
                      << veil::fmt_g9(veil::power_utilization(cfg, env.max_strength)) << "\n";
        }
    });
}

// --- detect ------------------------------------------------------------------

struct DetectArgs {
    CommonArgs common;
    std::string in_path;
    std::string h0;
    std::string h1;
    double p = 0.05;
    int window = 10;
    double ma_threshold = 0.0;
    bool ma_threshold_set = false;
};

void register_detect(CLI::App& app, DetectArgs& args) {
    CLI::App* sub = app.add_subcommand("detect", "run detectors over a readings CSV");
    add_common(sub, &args.common);
    sub->add_option("--in", args.in_path, "readings CSV (needs a 'value' column)")->required();
    sub->add_option("--h0", args.h0, "reading law when nobody interferes")->required();
    sub->add_option("--h1", args.h1, "reading law when someone interferes")->required();
    sub->add_option("--p", args.p, "target error probability in (0, 0.5)");
    sub->add_option("--window", args.window, "moving-average window");
    sub->add_option("--ma-threshold", args.ma_threshold,
                    "moving-average trigger level (default: midpoint of the hypothesis means)")
        ->each([&args](const std::string&) { args.ma_threshold_set = true; });
    sub->callback([&args] {
        std::ifstream in(args.in_path);
        if (!in) throw veil::ConfigError("cannot open input file '" + args.in_path + "'");
        const std::vector<double> values = veil::read_csv_column(in, "value");

        veil::HypothesisPair pair;
        pair.h0 = veil::parse_distribution(args.h0);
        pair.h1 = veil::parse_distribution(args.h1);
        const veil::DetectionReport report = veil::sequential_detect(pair, values, args.p);

        const double threshold = args.ma_threshold_set
                                     ? args.ma_threshold
                                     : (veil::mean(pair.h0) + veil::mean(pair.h1)) / 2.0;
        const std::vector<veil::Decision> ma =
            veil::moving_average_detect(values, args.window, threshold);
        long ma_first_b1 = -1;
        for (std::size_t i = 0; i < ma.size(); ++i) {
            if (ma[i] == veil::Decision::B1) {
                ma_first_b1 = static_cast<long>(i);
                break;
            }
        }
        with_output(args.common, [&](std::ostream& out) {
            out << "decision=" << veil::to_string(report.decision) << "\n"
                << "confidence=" << veil::fmt_g9(report.confidence_b1) << "\n"
                << "llr=" << veil::fmt_g9(report.llr.cum_llr) << "\n"
                << "n_used=" << report.llr.n << "\n"
                << "case=" << veil::to_string(report.hiding_case) << "\n"
                << "ma_decision=" << veil::to_string(ma.empty() ? veil::Decision::Undecided
                                                                : ma.back())
                << "\n"
                << "ma_first_b1=" << ma_first_b1 << "\n";
        });
    });
}

// --- complexity ----------------------------------------------------------------

struct ComplexityArgs {
    CommonArgs common;
    std::string family;
    double p = 0.05;
    std::optional<double> eta;
    std::optional<double> eta1;
    std::optional<double> eta2;
    std::optional<double> eta_prime;
    std::optional<double> sigma;
    std::optional<double> sigma_i;
    std::optional<double> mu_i;
};

void register_complexity(CLI::App& app, ComplexityArgs& args) {
    CLI::App* sub =
        app.add_subcommand("complexity", "evaluate the reading-count bounds");
    add_common(sub, &args.common);
    sub->add_option("--family", args.family, "laplace | normal | normal-normal")->required();
    sub->add_option("--p", args.p, "target error probability in (0, 0.5)");
    sub->add_option("--eta", args.eta, "scale/effect ratio (laplace, equal-variance normal, "
                                       "or sigma1/mu_i for normal-normal)");
    sub->add_option("--eta1", args.eta1, "normal: sigma_alt/sigma_true");
    sub->add_option("--eta2", args.eta2, "normal: (mu_alt - mu_true)/sigma_alt");
    sub->add_option("--eta-prime", args.eta_prime, "normal-normal: sigma1/sigma");
    sub->add_option("--sigma", args.sigma, "normal-normal: emission noise scale");
    sub->add_option("--sigma-i", args.sigma_i, "normal-normal: interference scale");
    sub->add_option("--mu-i", args.mu_i, "normal-normal: interference mean");
    sub->callback([&args] {
        double bound = 0.0;
        if (args.family == "laplace") {
            if (!args.eta) throw veil::ConfigError("laplace bound needs --eta");
            bound = veil::n_required_laplace(args.p, *args.eta);
        } else if (args.family == "normal") {
            if (args.eta1 && args.eta2) {
                bound = veil::n_required_normal(args.p, *args.eta1, *args.eta2);
            } else if (args.eta) {
                // Equal scales; the mean gap is 1/eta of the common scale.
                bound = veil::n_required_normal(args.p, 1.0, 1.0 / *args.eta);
            } else {
                throw veil::ConfigError("normal bound needs --eta or --eta1 with --eta2");
            }
        } else if (args.family == "normal-normal") {
            if (args.sigma && args.sigma_i && args.mu_i) {
                bound = veil::n_required_normal_normal_from_sigmas(args.p, *args.sigma,
                                                                   *args.sigma_i, *args.mu_i);
            } else if (args.eta && args.eta_prime) {
                bound = veil::n_required_normal_normal(args.p, *args.eta, *args.eta_prime);
            } else {
                throw veil::ConfigError(
                    "normal-normal bound needs --eta with --eta-prime, or --sigma, "
                    "--sigma-i and --mu-i");
            }
        } else {
            throw veil::ConfigError("unknown family '" + args.family + "'");
        }
        with_output(args.common,
                    [&](std::ostream& out) { out << "n_required=" << veil::fmt_g9(bound) << "\n"; });
    });
}

// --- curve ---------------------------------------------------------------------

struct CurveArgs {
    CommonArgs common;
    std::string family = "normal";
    std::string etas;
    std::string n_range = "100:1000:100";
    int trials = 10;
    double p = 0.05;
    int threads = 1;
};

void register_curve(CLI::App& app, CurveArgs& args) {
    CLI::App* sub =
        app.add_subcommand("curve", "confidence-vs-readings experiment, write CSV");
    add_common(sub, &args.common);
    sub->add_option("--family", args.family, "laplace | normal");
    sub->add_option("--etas", args.etas, "comma-separated ratios, e.g. 3,6,9")->required();
    sub->add_option("--n", args.n_range, "reading counts start:stop:step");
    sub->add_option("--trials", args.trials, "trials per eta");
    sub->add_option("--p", args.p, "target error probability in (0, 0.5)");
    sub->add_option("--threads", args.threads, "worker threads (never changes the output)");
    sub->callback([&args] {
        veil::ExperimentSpec spec;
        if (args.family == "laplace") {
            spec.noise_family = veil::NoiseFamily::Laplace;
        } else if (args.family == "normal") {
            spec.noise_family = veil::NoiseFamily::Normal;
        } else {
            throw veil::ConfigError("unknown family '" + args.family + "'");
        }
        spec.eta_values = veil::parse_real_list(args.etas);
        const veil::IntRange r = veil::parse_range(args.n_range);
        spec.n_start = r.start;
        spec.n_stop = r.stop;
        spec.n_step = r.step;
        spec.trials = args.trials;
        spec.p_target = args.p;
        spec.seed = args.common.seed;
        const std::vector<veil::CurvePoint> points =
            veil::run_confidence_curve(spec, args.threads);
        with_output(args.common, [&](std::ostream& out) { veil::write_curve_csv(out, points); });
    });
}

// --- solve2d ---------------------------------------------------------------------

struct Solve2dArgs {
    CommonArgs common;
    std::string angles;
    double alpha0 = 0.0;
    double max_strength = 0.0;
    double tau = 0.1;
    double slope = 1.0;
    double delta = 0.0;
    int interfered = 0;
};

void register_solve2d(CLI::App& app, Solve2dArgs& args) {
    CLI::App* sub = app.add_subcommand(
        "solve2d", "re-aim a gradual-decay beam to hide a person from two adversaries");
    add_common(sub, &args.common);
    sub->add_option("--angles", args.angles, "two adversary angles in radians, e.g. 0.5,1.6")
        ->required();
    sub->add_option("--alpha0", args.alpha0, "baseline beam strength")->required();
    sub->add_option("--m", args.max_strength, "maximum beam strength")->required();
    sub->add_option("--tau", args.tau, "narrow-beam half-width (scene bookkeeping)");
    sub->add_option("--slope", args.slope, "strength lost per radian off axis")->required();
    sub->add_option("--delta", args.delta, "person effect on the interfered path")->required();
    sub->add_option("--interfered", args.interfered, "index (0 or 1) of the interfered path");
    sub->callback([&args] {
        veil::Scene2D scene;
        scene.adversary_angles = veil::parse_real_list(args.angles);
        scene.base_strength = args.alpha0;
        scene.max_strength = args.max_strength;
        scene.tau = args.tau;
        scene.decay_slope = args.slope;
        scene.interference_delta = args.delta;
        if (args.interfered != 0 && args.interfered != 1) {
            throw veil::ConfigError("--interfered must be 0 or 1");
        }
        const veil::BeamSolution sol =
            veil::solve_two_adversary(scene, static_cast<std::size_t>(args.interfered));
        with_output(args.common, [&](std::ostream& out) {
            if (sol.feasible) {
                out << "feasible=true theta=" << veil::fmt_g9(sol.theta)
                    << " alpha=" << veil::fmt_g9(sol.alpha) << "\n";
            } else {
                out << "feasible=false reason=" << sol.reason << "\n";
            }
        });
    });
}

// Expand `--config file` into leading tokens so explicit flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& raw) {
    std::string config_path;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == "--config" && i + 1 < raw.size()) {
            config_path = raw[i + 1];
        } else if (raw[i].rfind("--config=", 0) == 0) {
            config_path = raw[i].substr(9);
        }
    }
    if (config_path.empty() || raw.empty() || raw[0].empty() || raw[0][0] == '-') return raw;

    std::vector<std::string> tokens;
    tokens.push_back(raw[0]);  // subcommand name
    for (const auto& [key, value] : veil::parse_config_file(config_path)) {
        if (key == "config") throw veil::ConfigError("config files cannot nest 'config'");
        tokens.push_back("--" + key);
        tokens.push_back(value);
    }
    tokens.insert(tokens.end(), raw.begin() + 1, raw.end());
    return tokens;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hiding-protocol simulator and analysis tool"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    SimulateArgs simulate_args;
    DetectArgs detect_args;
    ComplexityArgs complexity_args;
    CurveArgs curve_args;
    Solve2dArgs solve2d_args;
    register_simulate(app, simulate_args);
    register_detect(app, detect_args);
    register_complexity(app, complexity_args);
    register_curve(app, curve_args);
    register_solve2d(app, solve2d_args);

    try {
        std::vector<std::string> tokens =
            expand_config(std::vector<std::string>(argv + 1, argv + argc));
        std::reverse(tokens.begin(), tokens.end());
        app.parse(tokens);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the error and a --help hint
        return 1;
    } catch (const veil::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const veil::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
