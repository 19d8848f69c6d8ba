#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "veil/errors.hpp"
#include "veil/rng.hpp"

namespace veil {

// ---------------------------------------------------------------------------
// Directional-emission models on the plane: a narrow random beam that at most
// one sufficiently separated adversary can ever see, and a gradually decaying
// beam whose direction and strength can be re-aimed to cancel a person's
// effect at two adversaries simultaneously.
// ---------------------------------------------------------------------------

inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

inline double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

// Angular distance on the circle, in [0, pi].
inline double wrapped_distance(double a, double b) {
    double d = std::fabs(wrap_angle(a) - wrap_angle(b));
    return d > std::numbers::pi_v<double> ? kTwoPi - d : d;
}

struct Scene2D {
    std::vector<double> adversary_angles;  // radians, positions as seen from the sender
    double base_strength = 1.0;            // beam strength used when nobody interferes
    double max_strength = 1.0;
    double tau = 0.1;                // narrow-beam half-width, radians
    double decay_slope = 1.0;        // strength lost per radian of angular offset
    double interference_delta = 0.0; // constant person effect on one adversary's path
};

inline void validate(const Scene2D& scene) {
    if (!(scene.base_strength > 0.0)) throw ParameterError("scene requires base_strength > 0");
    if (!(scene.max_strength > 0.0)) throw ParameterError("scene requires max_strength > 0");
    if (!(scene.base_strength <= scene.max_strength)) {
        throw ParameterError("scene requires base_strength <= max_strength");
    }
    if (!(scene.tau > 0.0 && scene.tau < std::numbers::pi_v<double>)) {
        throw ParameterError("scene requires 0 < tau < pi");
    }
    if (!(scene.decay_slope > 0.0)) throw ParameterError("scene requires decay_slope > 0");
    if (!(scene.interference_delta >= 0.0)) {
        throw ParameterError("scene requires interference_delta >= 0");
    }
    for (double a : scene.adversary_angles) {
        if (!std::isfinite(a)) throw ParameterError("adversary angles must be finite");
    }
    for (std::size_t i = 0; i < scene.adversary_angles.size(); ++i) {
        for (std::size_t j = i + 1; j < scene.adversary_angles.size(); ++j) {
            if (wrapped_distance(scene.adversary_angles[i], scene.adversary_angles[j]) == 0.0) {
                throw ParameterError("adversary angles " + std::to_string(i) + " and " +
                                     std::to_string(j) + " coincide");
            }
        }
    }
}

// True iff an observer at `adversary_angle` sees a narrow beam aimed at
// `theta` (strictly inside the half-width window).
inline bool narrowband_visible(double adversary_angle, double theta, double tau) {
    return wrapped_distance(adversary_angle, theta) < tau;
}

struct NarrowbandRound {
    double theta = 0.0;
    std::vector<std::size_t> observers;  // indices of adversaries that saw the beam
};

// One round of the random-direction narrow-beam protocol. Requires every
// pair of adversaries to sit more than two half-widths apart so the beam can
// never be seen twice.
inline NarrowbandRound narrowband_round(const Scene2D& scene, SeededRng& rng) {
    validate(scene);
    const auto& angles = scene.adversary_angles;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        for (std::size_t j = i + 1; j < angles.size(); ++j) {
            if (wrapped_distance(angles[i], angles[j]) <= 2.0 * scene.tau) {
                throw GeometryError("adversaries " + std::to_string(i) + " and " +
                                    std::to_string(j) + " are within 2*tau of each other");
            }
        }
    }
    NarrowbandRound round;
    round.theta = kTwoPi * rng.uniform01();
    for (std::size_t i = 0; i < angles.size(); ++i) {
        if (narrowband_visible(angles[i], round.theta, scene.tau)) round.observers.push_back(i);
    }
    return round;
}

// Strength seen by one adversary under the gradual-decay beam: linear loss
// in angular offset, a constant person effect if interfered, floored at
// zero. Radial path loss is fixed per adversary and folded into
// base_strength by convention.
inline double gradual_reading(const Scene2D& scene, double theta, double alpha,
                              std::size_t adversary_index, bool interfered) {
    validate(scene);
    if (adversary_index >= scene.adversary_angles.size()) {
        throw ParameterError("adversary index out of range");
    }
    if (!(alpha >= 0.0 && alpha <= scene.max_strength)) {
        throw ProtocolError("emitted strength outside [0, max_strength]");
    }
    const double offset = wrapped_distance(scene.adversary_angles[adversary_index], theta);
    const double value =
        alpha - scene.decay_slope * offset - (interfered ? scene.interference_delta : 0.0);
    return value < 0.0 ? 0.0 : value;
}

struct BeamSolution {
    double theta = 0.0;
    double alpha = 0.0;
    bool feasible = false;
    std::string reason;  // empty when feasible; else one of
                         // "angular-separation", "power-limit", "clamping"
};

// Midpoint of the minor arc between two angles, plus the direction (+1/-1 in
// angle) that leads from the midpoint toward `toward`.
namespace detail {
struct ArcMid {
    double midpoint;
    double toward_sign;
    double half_separation;
};
inline ArcMid arc_midpoint(double toward, double other) {
    // Signed shortest rotation from `other` to `toward`, in (-pi, pi].
    double d = std::remainder(toward - other, kTwoPi);
    if (d == -std::numbers::pi_v<double>) d = std::numbers::pi_v<double>;
    ArcMid m;
    m.midpoint = wrap_angle(other + d / 2.0);
    m.toward_sign = d >= 0.0 ? 1.0 : -1.0;
    m.half_separation = std::fabs(d) / 2.0;
    return m;
}
}  // namespace detail

// Re-aim the gradual-decay beam so that, with a person attenuating one
// adversary's path by delta, BOTH adversaries still read exactly what the
// baseline beam (midpoint direction, base strength) would have given them.
// Turning toward the interfered side by delta/(2k) trades k*shift of loss
// between the two paths; raising strength by delta/2 then cancels the rest.
inline BeamSolution solve_two_adversary(const Scene2D& scene, std::size_t interfered_index) {
    validate(scene);
    if (scene.adversary_angles.size() != 2) {
        throw GeometryError("the re-aiming solver needs exactly 2 adversaries");
    }
    if (interfered_index >= 2) throw ParameterError("interfered_index must be 0 or 1");

    const double a_hit = scene.adversary_angles[interfered_index];
    const double a_other = scene.adversary_angles[1 - interfered_index];
    const detail::ArcMid mid = detail::arc_midpoint(a_hit, a_other);
    const double k = scene.decay_slope;
    const double delta = scene.interference_delta;
    const double shift = delta / (2.0 * k);

    BeamSolution sol;
    sol.theta = wrap_angle(mid.midpoint + mid.toward_sign * shift);
    sol.alpha = scene.base_strength + delta / 2.0;
    if (!(shift < mid.half_separation)) {
        // The beam would have to aim at or beyond the interfered adversary,
        // leaving the linear-decay regime: the two directions are too close
        // for this person effect.
        sol.feasible = false;
        sol.reason = "angular-separation";
    } else if (sol.alpha > scene.max_strength) {
        sol.feasible = false;
        sol.reason = "power-limit";
    } else if (scene.base_strength - k * mid.half_separation < 0.0) {
        // Baseline readings already sit on the zero floor.
        sol.feasible = false;
        sol.reason = "clamping";
    } else {
        sol.feasible = true;
    }
    return sol;
}

// Reading each adversary gets from the no-interference baseline beam (aimed
// at the arc midpoint with base strength).
inline double baseline_reading(const Scene2D& scene, std::size_t adversary_index) {
    validate(scene);
    if (scene.adversary_angles.size() != 2) {
        throw GeometryError("baseline is defined for exactly 2 adversaries");
    }
    if (adversary_index >= 2) throw ParameterError("adversary index must be 0 or 1");
    const detail::ArcMid mid =
        detail::arc_midpoint(scene.adversary_angles[0], scene.adversary_angles[1]);
    return gradual_reading(scene, mid.midpoint, scene.base_strength, adversary_index, false);
}

}  // namespace veil
