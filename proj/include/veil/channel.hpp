#pragma once

#include <cmath>

#include "veil/dist.hpp"
#include "veil/errors.hpp"
#include "veil/rng.hpp"

namespace veil {

// ---------------------------------------------------------------------------
// 1D line-of-sight channel: linear decay, a floor at zero, and a person who
// may attenuate the path.
// ---------------------------------------------------------------------------

struct Environment1D {
    double sender_pos = 0.0;     // meters
    double adversary_pos = 0.0;  // meters
    double decay_c = 1.0;        // strength units per meter
    double max_strength = 1.0;   // M, upper limit of the sender's range [0, M]
    // Person effect when present: PointMass(delta) for the constant model or
    // a nonnegative-support law f for the random model.
    NoiseDistribution interference = NoiseDistribution::point_mass(0.0);
};

inline double path_loss(const Environment1D& env) {
    return env.decay_c * std::abs(env.sender_pos - env.adversary_pos);
}

inline void validate(const Environment1D& env) {
    if (!(env.decay_c > 0.0)) throw ParameterError("environment requires decay_c > 0");
    if (!(env.max_strength > 0.0)) throw ParameterError("environment requires max_strength > 0");
    const DistKind k = env.interference.kind;
    if (k != DistKind::PointMass && k != DistKind::TruncatedNormal) {
        throw ParameterError("interference must have nonnegative support (point mass or truncated normal)");
    }
    if (env.interference.support_lo() < 0.0) {
        throw ParameterError("interference support must be nonnegative");
    }
}

// One observed strength value. `truth_b` is ground truth carried for
// evaluation; detectors never see it.
struct Reading {
    double value = 0.0;
    bool clamped = false;
    int truth_b = 0;
};

// Observed strength for emitted level `alpha` with interference bit b.
// The interference draw is subtracted from alpha before the path loss so
// that the two branches of a shift protocol round identically; keep that
// grouping.
inline Reading observe(const Environment1D& env, double alpha, int b, SeededRng& rng) {
    if (!(alpha >= 0.0 && alpha <= env.max_strength)) {
        throw ProtocolError("emitted strength outside [0, max_strength]");
    }
    double lowered = alpha;
    if (b != 0) lowered -= sample(env.interference, rng);
    const double pre_clamp = lowered - path_loss(env);
    Reading r;
    r.clamped = pre_clamp < 0.0;
    r.value = r.clamped ? 0.0 : pre_clamp;
    r.truth_b = b;
    return r;
}

// Probability that a reading drawn under emission law `emission` hits the
// zero floor. The downstream likelihood analysis assumes this never
// happens; callers gate configurations on it being negligible.
inline double clamp_probability(const Environment1D& env, const NoiseDistribution& emission,
                                int b) {
    const double loss = path_loss(env);
    if (b == 0) return cdf_strict(emission, loss);
    if (env.interference.kind == DistKind::PointMass) {
        return cdf_strict(emission, loss + env.interference.mu);
    }
    // Random interference: integrate the emission CDF against the
    // interference density over its (bounded) support.
    const NoiseDistribution& f = env.interference;
    auto integrand = [&](double y) { return pdf(f, y) * cdf_strict(emission, loss + y); };
    return integrate_adaptive_split(integrand, f.support_lo(), f.support_hi(),
                                    {f.mu, emission.mu - loss}, 1e-8);
}

}  // namespace veil
