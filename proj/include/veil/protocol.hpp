#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "veil/channel.hpp"
#include "veil/dist.hpp"
#include "veil/errors.hpp"
#include "veil/rng.hpp"

namespace veil {

// ---------------------------------------------------------------------------
// Sender-side hiding strategies. Per time step the sender picks an emitted
// strength, either using its knowledge of the interference bit (Shift,
// RandomShift) or blind to it (NoiseInjection).
// ---------------------------------------------------------------------------

enum class ProtocolKind { Shift, RandomShift, NoiseInjection };

inline std::string to_string(ProtocolKind k) {
    switch (k) {
        case ProtocolKind::Shift: return "shift";
        case ProtocolKind::RandomShift: return "random-shift";
        case ProtocolKind::NoiseInjection: return "noise-injection";
    }
    return "?";
}

struct ProtocolConfig {
    ProtocolKind kind = ProtocolKind::Shift;
    double delta = 0.0;                                                  // Shift
    NoiseDistribution shift_dist = NoiseDistribution::point_mass(0.0);   // RandomShift
    NoiseDistribution emission_dist = NoiseDistribution::point_mass(0.0);  // NoiseInjection
    bool knows_b = true;

    static ProtocolConfig shift(double delta) {
        if (!(delta >= 0.0)) throw ParameterError("shift protocol requires delta >= 0");
        ProtocolConfig c;
        c.kind = ProtocolKind::Shift;
        c.delta = delta;
        c.knows_b = true;
        return c;
    }

    static ProtocolConfig random_shift(const NoiseDistribution& f) {
        if (f.support_lo() < 0.0) {
            throw ParameterError("random-shift law must have nonnegative support");
        }
        ProtocolConfig c;
        c.kind = ProtocolKind::RandomShift;
        c.shift_dist = f;
        c.knows_b = true;
        return c;
    }

    static ProtocolConfig noise_injection(const NoiseDistribution& emission) {
        if (emission.kind == DistKind::PointMass) {
            throw ParameterError("noise-injection emission must be laplace, normal or tnormal");
        }
        ProtocolConfig c;
        c.kind = ProtocolKind::NoiseInjection;
        c.emission_dist = emission;
        c.knows_b = false;
        return c;
    }
};

// Probability that a blind emission lands outside the sender's legal range
// [0, m]. Zero for truncated laws whose bounds sit inside the range.
inline double ceiling_violation_probability(const NoiseDistribution& emission, double m) {
    return cdf_strict(emission, 0.0) + (1.0 - cdf(emission, m));
}

// Guard thresholds: a configuration is accepted only if illegal emissions
// and clamped readings are this rare, so downstream likelihood analysis can
// treat the observed law as the untouched emission law minus path loss.
inline constexpr double kGuardTolerance = 1e-6;

// Reject configurations whose runs could leave the modeled regime.
// Throws ConfigError before any step of a run executes.
inline void validate_protocol(const ProtocolConfig& cfg, const Environment1D& env) {
    validate(env);
    switch (cfg.kind) {
        case ProtocolKind::Shift:
            if (!cfg.knows_b) throw ConfigError("shift protocol requires knowledge of the bit");
            if (!(cfg.delta >= 0.0 && cfg.delta <= env.max_strength)) {
                throw ConfigError("shift delta must lie in [0, max_strength]");
            }
            break;
        case ProtocolKind::RandomShift:
            if (!cfg.knows_b) {
                throw ConfigError("random-shift protocol requires knowledge of the bit");
            }
            if (cfg.shift_dist.support_lo() < 0.0 ||
                cfg.shift_dist.support_hi() > env.max_strength) {
                throw ConfigError("random-shift law support must lie inside [0, max_strength]");
            }
            break;
        case ProtocolKind::NoiseInjection: {
            if (cfg.knows_b) throw ConfigError("noise-injection protocol is blind to the bit");
            if (ceiling_violation_probability(cfg.emission_dist, env.max_strength) >=
                kGuardTolerance) {
                throw ConfigError(
                    "emission law exceeds [0, max_strength] too often; truncate it");
            }
            // Clamped readings put an atom at zero that the uncensored
            // densities used by detectors cannot express; reject upfront.
            for (int b : {0, 1}) {
                if (clamp_probability(env, cfg.emission_dist, b) >= kGuardTolerance) {
                    throw ConfigError("readings would clamp at zero too often in this scene");
                }
            }
            break;
        }
    }
}

// Emitted strength for one step. `b` must be supplied exactly when the
// protocol knows the bit.
inline double emit(const ProtocolConfig& cfg, double m, std::optional<int> b, SeededRng& rng) {
    if (cfg.knows_b && !b.has_value()) {
        throw ProtocolError("protocol needs the interference bit but none was supplied");
    }
    if (!cfg.knows_b && b.has_value()) {
        throw ProtocolError("blind protocol was handed the interference bit");
    }
    const int bit = b.value_or(0);  // guarded above: present iff the protocol knows it
    switch (cfg.kind) {
        case ProtocolKind::Shift:
            return bit != 0 ? m : m - cfg.delta;
        case ProtocolKind::RandomShift:
            return bit != 0 ? m : m - sample(cfg.shift_dist, rng);
        case ProtocolKind::NoiseInjection: {
            const double x = sample(cfg.emission_dist, rng);
            if (x < 0.0 || x > m) {
                throw ProtocolError("emission fell outside [0, max_strength]");
            }
            return x;
        }
    }
    throw ParameterError("unknown protocol kind");
}

struct ObservationTrace {
    std::vector<Reading> readings;
    std::vector<double> emitted;

    std::vector<double> values() const {
        std::vector<double> v;
        v.reserve(readings.size());
        for (const Reading& r : readings) v.push_back(r.value);
        return v;
    }
};

// Compose emit + observe over a caller-supplied bit sequence. One generator
// drives both stages so a run is a pure function of (cfg, env, bits, seed).
inline ObservationTrace run_trace(const ProtocolConfig& cfg, const Environment1D& env,
                                  const std::vector<int>& b_sequence, std::uint64_t seed) {
    validate_protocol(cfg, env);
    SeededRng rng(seed);
    ObservationTrace trace;
    trace.readings.reserve(b_sequence.size());
    trace.emitted.reserve(b_sequence.size());
    for (int b : b_sequence) {
        const std::optional<int> known = cfg.knows_b ? std::optional<int>(b) : std::nullopt;
        const double alpha = emit(cfg, env.max_strength, known, rng);
        trace.readings.push_back(observe(env, alpha, b, rng));
        trace.emitted.push_back(alpha);
    }
    return trace;
}

}  // namespace veil
