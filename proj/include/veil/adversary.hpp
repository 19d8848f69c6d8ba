#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "veil/channel.hpp"
#include "veil/dist.hpp"
#include "veil/errors.hpp"

namespace veil {

// ---------------------------------------------------------------------------
// Passive detectors over a reading stream, the three-regime classifier, and
// closed-form sample-size bounds.
// ---------------------------------------------------------------------------

struct HypothesisPair {
    NoiseDistribution h0;  // reading law if nobody interferes
    NoiseDistribution h1;  // reading law if someone interferes
};

enum class HidingCase { PerfectHiding, NoisyHiding, ImmediateDetection };
enum class Decision { B0, B1, Undecided };

inline std::string to_string(HidingCase c) {
    switch (c) {
        case HidingCase::PerfectHiding: return "perfect-hiding";
        case HidingCase::NoisyHiding: return "noisy-hiding";
        case HidingCase::ImmediateDetection: return "immediate-detection";
    }
    return "?";
}

inline std::string to_string(Decision d) {
    switch (d) {
        case Decision::B0: return "b0";
        case Decision::B1: return "b1";
        case Decision::Undecided: return "undecided";
    }
    return "?";
}

// Which detection regime a hypothesis pair sits in: identical laws can never
// be told apart; laws with different supports expose themselves on a single
// reading; anything else takes finitely many readings.
inline HidingCase classify_case(const HypothesisPair& pair) {
    if (pair.h0 == pair.h1) return HidingCase::PerfectHiding;
    if (pair.h0.support_lo() != pair.h1.support_lo() ||
        pair.h0.support_hi() != pair.h1.support_hi()) {
        return HidingCase::ImmediateDetection;
    }
    return HidingCase::NoisyHiding;
}

// Evidence needed before deciding with confidence 1-p.
inline double detection_threshold(double p) {
    if (!(p > 0.0 && p < 0.5)) throw ParameterError("p must lie in (0, 0.5)");
    return std::log((1.0 - p) / p);
}

struct DetectionReport {
    LlrState llr;
    double confidence_b1 = 0.5;  // P(b=1 | readings) under equal priors
    Decision decision = Decision::Undecided;
    HidingCase hiding_case = HidingCase::NoisyHiding;
};

// Sequential likelihood-ratio detector. Positive evidence favors h1 (h1 in
// the numerator); stops as soon as |cum_llr| strictly exceeds
// ln((1-p)/p) or a zero-likelihood reading settles the question outright.
// Exact ties keep reading. Identical hypotheses short-circuit to Undecided.
inline DetectionReport sequential_detect(const HypothesisPair& pair,
                                         const std::vector<double>& readings, double p) {
    const double threshold = detection_threshold(p);
    DetectionReport report;
    report.hiding_case = classify_case(pair);
    if (report.hiding_case == HidingCase::PerfectHiding) {
        report.confidence_b1 = 0.5;
        report.decision = Decision::Undecided;
        return report;
    }
    report.hiding_case = HidingCase::NoisyHiding;
    LlrState state;
    for (double x : readings) {
        state = llr_update(state, x, pair.h1, pair.h0);
        if (state.immediate) {
            report.decision = state.cum_llr > 0.0 ? Decision::B1 : Decision::B0;
            report.hiding_case = HidingCase::ImmediateDetection;
            break;
        }
        if (state.cum_llr > threshold) {
            report.decision = Decision::B1;
            break;
        }
        if (state.cum_llr < -threshold) {
            report.decision = Decision::B0;
            break;
        }
    }
    report.llr = state;
    report.confidence_b1 = confidence_from_llr(state.cum_llr);
    return report;
}

// Baseline drop detector: flag interference when the trailing window mean
// falls strictly below the threshold. One decision per reading; Undecided
// until the first window fills.
inline std::vector<Decision> moving_average_detect(const std::vector<double>& readings,
                                                   int window, double threshold) {
    if (window < 1) throw ParameterError("window must be >= 1");
    std::vector<Decision> out;
    out.reserve(readings.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < readings.size(); ++i) {
        sum += readings[i];
        if (i + 1 < static_cast<std::size_t>(window)) {
            out.push_back(Decision::Undecided);
            continue;
        }
        if (i >= static_cast<std::size_t>(window)) sum -= readings[i - window];
        const double mean = sum / window;
        out.push_back(mean < threshold ? Decision::B1 : Decision::B0);
    }
    return out;
}

// --- Sample-size bounds -----------------------------------------------------
// Each returns the real-valued bound; strictly more readings than this are
// needed on average. Callers wanting an integer take floor(bound) + 1.

// Matched Laplace pair separated by delta with common scale sigma;
// eta = sigma/delta.
inline double n_required_laplace(double p, double eta) {
    const double threshold = detection_threshold(p);
    if (!(eta > 0.0)) throw ParameterError("eta must be > 0");
    return threshold * eta;
}

// Normal pair with scale ratio eta1 = sigma_alt/sigma_true and normalized
// mean gap eta2 = (mu_alt - mu_true)/sigma_alt. The denominator is the
// per-reading expected evidence; zero means the pair is indistinguishable.
inline double n_required_normal(double p, double eta1, double eta2) {
    const double threshold = detection_threshold(p);
    if (!(eta1 > 0.0)) throw ParameterError("eta1 must be > 0");
    const double denom =
        (eta2 * eta2 - 1.0) / 2.0 + std::log(eta1) + 1.0 / (2.0 * eta1 * eta1);
    if (!(denom > 0.0)) {
        throw PerfectHidingError("hypotheses coincide; no reading count suffices");
    }
    return threshold / denom;
}

// Normal emission noise plus independent normal interference: the b=1 law
// both shifts (by the interference mean) and widens (by its variance).
// eta = sigma1/mu_i and eta_prime = sigma1/sigma with
// sigma1 = sqrt(sigma^2 + sigma_i^2).
inline double n_required_normal_normal(double p, double eta, double eta_prime) {
    const double threshold = detection_threshold(p);
    if (!(eta > 0.0)) throw ParameterError("eta must be > 0");
    if (!(eta_prime > 0.0)) throw ParameterError("eta_prime must be > 0");
    const double inv_eta = 1.0 / eta;
    const double denom = (inv_eta * inv_eta - 1.0) / 2.0 + std::log(eta_prime) +
                         1.0 / (2.0 * eta_prime * eta_prime);
    if (!(denom > 0.0)) {
        throw PerfectHidingError("hypotheses coincide; no reading count suffices");
    }
    return threshold / denom;
}

// Same bound stated in raw scene parameters.
inline double n_required_normal_normal_from_sigmas(double p, double sigma, double sigma_i,
                                                   double mu_i) {
    if (!(sigma > 0.0)) throw ParameterError("sigma must be > 0");
    if (!(sigma_i >= 0.0)) throw ParameterError("sigma_i must be >= 0");
    if (!(mu_i >= 0.0)) throw ParameterError("mu_i must be >= 0");
    const double sigma1 = std::hypot(sigma, sigma_i);
    return n_required_normal_normal(p, sigma1 / mu_i, sigma1 / sigma);
}

// Reading laws an adversary at the given environment faces under blind noise
// emission with a constant person effect: the emission law shifted down by
// the path loss, and additionally by delta when b=1.
inline HypothesisPair adversary_hypotheses(const Environment1D& env,
                                           const NoiseDistribution& emission) {
    if (env.interference.kind != DistKind::PointMass) {
        throw ParameterError(
            "closed-form reading laws exist only for a constant person effect");
    }
    const double loss = path_loss(env);
    HypothesisPair pair;
    pair.h0 = shifted(emission, -loss);
    pair.h1 = shifted(emission, -loss - env.interference.mu);
    return pair;
}

}  // namespace veil
