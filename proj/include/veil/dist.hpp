#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "veil/errors.hpp"
#include "veil/numeric.hpp"
#include "veil/rng.hpp"

namespace veil {

// ---------------------------------------------------------------------------
// NoiseDistribution
// ---------------------------------------------------------------------------

enum class DistKind { Laplace, Normal, TruncatedNormal, PointMass };

inline const char* to_string(DistKind k) {
    switch (k) {
        case DistKind::Laplace: return "laplace";
        case DistKind::Normal: return "normal";
        case DistKind::TruncatedNormal: return "tnormal";
        case DistKind::PointMass: return "point";
    }
    return "?";
}

// Parametric emission / interference law. `mu` is the location parameter,
// `sigma` the scale (0 exactly for PointMass), and [lo, hi] the support for
// the truncated kind. Construct through the factories so invariants hold.
struct NoiseDistribution {
    DistKind kind = DistKind::Normal;
    double mu = 0.0;
    double sigma = 1.0;
    double lo = -kInf;
    double hi = kInf;

    static NoiseDistribution laplace(double mu, double sigma) {
        require_scale(sigma, "laplace");
        return {DistKind::Laplace, mu, sigma, -kInf, kInf};
    }

    static NoiseDistribution normal(double mu, double sigma) {
        require_scale(sigma, "normal");
        return {DistKind::Normal, mu, sigma, -kInf, kInf};
    }

    static NoiseDistribution truncated_normal(double mu, double sigma, double lo, double hi) {
        require_scale(sigma, "truncated normal");
        if (!(lo < hi)) throw ParameterError("truncated normal requires lo < hi");
        NoiseDistribution d{DistKind::TruncatedNormal, mu, sigma, lo, hi};
        if (d.truncation_mass() <= 0.0) {
            throw ParameterError("truncated normal has no mass on [lo, hi]");
        }
        return d;
    }

    static NoiseDistribution point_mass(double mu) {
        return {DistKind::PointMass, mu, 0.0, mu, mu};
    }

    bool operator==(const NoiseDistribution& o) const {
        return kind == o.kind && mu == o.mu && sigma == o.sigma && lo == o.lo && hi == o.hi;
    }

    // Probability a full normal assigns to [lo, hi]; the truncated
    // renormalizer Z.
    double truncation_mass() const {
        return std_normal_cdf((hi - mu) / sigma) - std_normal_cdf((lo - mu) / sigma);
    }

    double support_lo() const { return kind == DistKind::TruncatedNormal ? lo : (kind == DistKind::PointMass ? mu : -kInf); }
    double support_hi() const { return kind == DistKind::TruncatedNormal ? hi : (kind == DistKind::PointMass ? mu : kInf); }

    bool support_contains(double x) const {
        switch (kind) {
            case DistKind::TruncatedNormal: return x >= lo && x <= hi;
            case DistKind::PointMass: return x == mu;
            default: return true;
        }
    }

private:
    static void require_scale(double sigma, const char* what) {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            throw ParameterError(std::string(what) + " requires sigma > 0");
        }
    }
};

// Same-shape law translated by `offset` (what a lossy path does to an
// emission law as seen by a distant observer).
inline NoiseDistribution shifted(const NoiseDistribution& d, double offset) {
    NoiseDistribution out = d;
    out.mu += offset;
    if (d.kind == DistKind::TruncatedNormal || d.kind == DistKind::PointMass) {
        out.lo += offset;
        out.hi += offset;
    }
    return out;
}

// True iff every point of p's support lies in q's support.
inline bool support_subset(const NoiseDistribution& p, const NoiseDistribution& q) {
    if (q.kind == DistKind::PointMass) return p.kind == DistKind::PointMass && p.mu == q.mu;
    return p.support_lo() >= q.support_lo() && p.support_hi() <= q.support_hi();
}

// ---------------------------------------------------------------------------
// Densities, CDFs, quantiles, moments
// ---------------------------------------------------------------------------

// Natural log of the density at x; -inf exactly outside the support.
// Normalizing constants are included so likelihood ratios between unlike
// scales and goodness-of-fit statistics are exact.
inline double log_pdf(const NoiseDistribution& d, double x) {
    switch (d.kind) {
        case DistKind::Laplace:
            return -std::log(2.0 * d.sigma) - std::abs(x - d.mu) / d.sigma;
        case DistKind::Normal: {
            const double z = (x - d.mu) / d.sigma;
            return -0.5 * std::log(2.0 * std::numbers::pi) - std::log(d.sigma) - 0.5 * z * z;
        }
        case DistKind::TruncatedNormal: {
            if (x < d.lo || x > d.hi) return -kInf;
            const double z = (x - d.mu) / d.sigma;
            return -0.5 * std::log(2.0 * std::numbers::pi) - std::log(d.sigma) - 0.5 * z * z -
                   std::log(d.truncation_mass());
        }
        case DistKind::PointMass:
            // Log of the unit mass at the atom.
            return x == d.mu ? 0.0 : -kInf;
    }
    throw ParameterError("log_pdf: unknown distribution kind");
}

inline double pdf(const NoiseDistribution& d, double x) { return std::exp(log_pdf(d, x)); }

// P(X <= x).
inline double cdf(const NoiseDistribution& d, double x) {
    switch (d.kind) {
        case DistKind::Laplace: {
            const double z = (x - d.mu) / d.sigma;
            return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
        }
        case DistKind::Normal:
            return std_normal_cdf((x - d.mu) / d.sigma);
        case DistKind::TruncatedNormal: {
            if (x <= d.lo) return 0.0;
            if (x >= d.hi) return 1.0;
            const double za = std_normal_cdf((d.lo - d.mu) / d.sigma);
            return (std_normal_cdf((x - d.mu) / d.sigma) - za) / d.truncation_mass();
        }
        case DistKind::PointMass:
            return x >= d.mu ? 1.0 : 0.0;
    }
    throw ParameterError("cdf: unknown distribution kind");
}

// P(X < x). Differs from cdf only for the atom of a PointMass.
inline double cdf_strict(const NoiseDistribution& d, double x) {
    if (d.kind == DistKind::PointMass) return x > d.mu ? 1.0 : 0.0;
    return cdf(d, x);
}

// Inverse CDF for u in (0, 1). The truncated kind maps u onto the normal
// quantile restricted to [lo, hi]; this is exact truncated sampling, not a
// clipped full-normal draw.
inline double quantile(const NoiseDistribution& d, double u) {
    if (!(u > 0.0 && u < 1.0)) throw ParameterError("quantile: u must be in (0, 1)");
    switch (d.kind) {
        case DistKind::Laplace: {
            const double q = u - 0.5;
            return d.mu - d.sigma * (q < 0.0 ? -1.0 : 1.0) * std::log(1.0 - 2.0 * std::abs(q));
        }
        case DistKind::Normal:
            return d.mu + d.sigma * std_normal_quantile(u);
        case DistKind::TruncatedNormal: {
            const double za = std_normal_cdf((d.lo - d.mu) / d.sigma);
            const double x = d.mu + d.sigma * std_normal_quantile(za + u * d.truncation_mass());
            return std::min(std::max(x, d.lo), d.hi);  // guard roundoff at the edges
        }
        case DistKind::PointMass:
            return d.mu;
    }
    throw ParameterError("quantile: unknown distribution kind");
}

inline double mean(const NoiseDistribution& d) {
    if (d.kind == DistKind::TruncatedNormal) {
        const double a = (d.lo - d.mu) / d.sigma;
        const double b = (d.hi - d.mu) / d.sigma;
        return d.mu + d.sigma * (std_normal_pdf(a) - std_normal_pdf(b)) / d.truncation_mass();
    }
    return d.mu;
}

// One draw from d. Consumes exactly one uniform for the continuous kinds
// and none for PointMass, so traces that swap a degenerate law in or out
// stay in lockstep under a common seed.
inline double sample(const NoiseDistribution& d, SeededRng& rng) {
    if (d.kind == DistKind::PointMass) return d.mu;
    return quantile(d, rng.uniform01());
}

// ---------------------------------------------------------------------------
// KL divergence
// ---------------------------------------------------------------------------

namespace detail {

// Numerical KL(p || q) over the support of p. Requires support(p) subset of
// support(q); callers check first.
inline double kl_numeric(const NoiseDistribution& p, const NoiseDistribution& q) {
    double a = p.support_lo();
    double b = p.support_hi();
    const double span = 70.0 * std::max(p.sigma, q.sigma);
    if (std::isinf(a)) a = std::min(p.mu, q.mu) - span;
    if (std::isinf(b)) b = std::max(p.mu, q.mu) + span;

    auto integrand = [&](double x) {
        const double lp = log_pdf(p, x);
        if (lp == -kInf) return 0.0;
        const double w = std::exp(lp);
        if (w == 0.0) return 0.0;
        return w * (lp - log_pdf(q, x));
    };

    // Split at density kinks and truncation edges.
    std::vector<double> breaks{p.mu, q.mu, q.support_lo(), q.support_hi()};
    std::erase_if(breaks, [&](double x) { return !std::isfinite(x) || x <= a || x >= b; });

    const double coarse = integrate_adaptive_split(integrand, a, b, breaks, 1e-6);
    const double eps = std::max(1e-13, 1e-9 * std::abs(coarse));
    const double value = integrate_adaptive_split(integrand, a, b, breaks, eps);
    // The integral is nonnegative; quadrature noise near identical pairs may
    // dip a hair below zero.
    return value < 0.0 && value > -1e-9 ? 0.0 : value;
}

}  // namespace detail

// KL(p || q) in nats. +inf when p's support escapes q's (an observation from
// p can have zero likelihood under q, so an observer distinguishes at once).
// Same-family full-support pairs use closed forms; anything involving a
// truncated law integrates p*ln(p/q) adaptively.
inline double kl_divergence(const NoiseDistribution& p, const NoiseDistribution& q) {
    if (p == q) return 0.0;
    if (p.kind == DistKind::PointMass || q.kind == DistKind::PointMass) {
        // Distinct atoms, or an atom against a continuous law: never
        // absolutely continuous.
        return kInf;
    }
    if (!support_subset(p, q)) return kInf;

    double value;
    if (p.kind == DistKind::Normal && q.kind == DistKind::Normal) {
        const double dm = p.mu - q.mu;
        value = (dm * dm + p.sigma * p.sigma - q.sigma * q.sigma) / (2.0 * q.sigma * q.sigma) +
                std::log(q.sigma / p.sigma);
    } else if (p.kind == DistKind::Laplace && q.kind == DistKind::Laplace) {
        const double dm = std::abs(p.mu - q.mu);
        value = std::log(q.sigma / p.sigma) + dm / q.sigma +
                (p.sigma / q.sigma) * std::exp(-dm / p.sigma) - 1.0;
    } else {
        value = detail::kl_numeric(p, q);
    }
    // Mathematically nonnegative; rounding on near-identical pairs can land
    // a few ulp below zero.
    return value < 0.0 && value > -1e-9 ? 0.0 : value;
}

// ---------------------------------------------------------------------------
// Log-likelihood ratio accumulation
// ---------------------------------------------------------------------------

// Running log-likelihood ratio over a reading stream. `immediate` marks the
// saturated +/-inf state reached when a reading falls outside exactly one
// hypothesis' support.
struct LlrState {
    double cum_llr = 0.0;
    std::int64_t n = 0;
    bool immediate = false;
};

// Folds one reading into the ratio of p_true against p_alt. A saturated
// state absorbs further updates.
inline LlrState llr_update(LlrState state, double x, const NoiseDistribution& p_true,
                           const NoiseDistribution& p_alt) {
    if (state.immediate) return state;
    const double lt = log_pdf(p_true, x);
    const double la = log_pdf(p_alt, x);
    if (lt == -kInf && la == -kInf) {
        throw ImpossibleObservationError("reading lies outside both hypothesis supports");
    }
    state.n += 1;
    if (la == -kInf) {
        state.cum_llr = kInf;
        state.immediate = true;
    } else if (lt == -kInf) {
        state.cum_llr = -kInf;
        state.immediate = true;
    } else {
        state.cum_llr += lt - la;
    }
    return state;
}

// Maps a log-likelihood ratio M to the confidence that the numerator
// hypothesis generated the data: e^M / (1 + e^M). Inverts the decision
// threshold M = ln((1-p)/p) at confidence 1-p. Branching on the sign keeps
// confidence(m) + confidence(-m) == 1 exact.
inline double confidence_from_llr(double m) {
    if (m >= 0.0) return 1.0 / (1.0 + std::exp(-m));
    return 1.0 - 1.0 / (1.0 + std::exp(m));
}

}  // namespace veil
