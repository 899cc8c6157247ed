#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "diophant/error.hpp"
#include "diophant/minimal_points.hpp"
#include "diophant/rational.hpp"

namespace diophant {

enum class ExponentKind { uniform_hat, two_form_LP, quadratic_star };
enum class Trend { increasing, decreasing, flat };

inline const char *to_string(ExponentKind k) {
    switch (k) {
    case ExponentKind::uniform_hat:
        return "uniform_hat";
    case ExponentKind::two_form_LP:
        return "two_form_LP";
    default:
        return "quadratic_star";
    }
}

inline const char *to_string(Trend t) {
    return t == Trend::increasing ? "increasing" : t == Trend::decreasing ? "decreasing" : "flat";
}

struct ExponentEstimate {
    ExponentKind kind = ExponentKind::uniform_hat;
    double value = 0.0;
    size_t window_begin = 0, window_end = 0; // nu range of used samples
    std::vector<std::pair<size_t, double>> samples;
    Trend trend = Trend::flat;
    size_t skipped = 0; // records dropped (P enclosure containing 0)
};

namespace detail {

inline Trend trend_of(const std::vector<std::pair<size_t, double>> &samples) {
    size_t n = samples.size();
    if (n < 4)
        return Trend::flat;
    size_t half = n / 2;
    size_t quarter = (n - half) / 2;
    double a = 0, b = 0;
    size_t na = 0, nb = 0;
    for (size_t i = half; i < half + quarter; ++i, ++na)
        a += samples[i].second;
    for (size_t i = half + quarter; i < n; ++i, ++nb)
        b += samples[i].second;
    if (na == 0 || nb == 0)
        return Trend::flat;
    a /= static_cast<double>(na);
    b /= static_cast<double>(nb);
    double tol = 0.02;
    if (b > a + tol)
        return Trend::increasing;
    if (b < a - tol)
        return Trend::decreasing;
    return Trend::flat;
}

} // namespace detail

// Finite-T proxy for the uniform exponent: over X_j <= t < X_{j+1} the
// minimum of |L| at height t is L_j, and the weakest t is just below X_{j+1};
// gamma_j = -log L_j / log X_{j+1} is the exact finite content of the sup in
// the definition. liminf is proxied by the minimum over the newest half of
// the window.
inline ExponentEstimate estimate_uniform(const MinimalSequence &seq, size_t burn_in = 3) {
    ExponentEstimate est;
    est.kind = ExponentKind::uniform_hat;
    auto ratios = seq.records.size() >= 2 ? sii_ratios(seq)
                                          : std::vector<std::pair<size_t, double>>{};
    for (const auto &[nu, g] : ratios)
        if (nu > burn_in)
            est.samples.emplace_back(nu, g);
    if (est.samples.size() < 6)
        throw insufficient_data_error("estimate_uniform needs >= 6 samples after burn-in, have " +
                                      std::to_string(est.samples.size()));
    est.window_begin = est.samples.front().first;
    est.window_end = est.samples.back().first;
    size_t half = est.samples.size() / 2;
    double v = est.samples[half].second;
    for (size_t i = half; i < est.samples.size(); ++i)
        v = std::min(v, est.samples[i].second);
    est.value = v;
    est.trend = detail::trend_of(est.samples);
    return est;
}

// Two-form exponent samples s_nu = log(|P_nu| / L_nu) / log X_nu over minimal
// points; the limsup is proxied by the running maximum. Records whose P
// enclosure contains zero are skipped and counted.
inline ExponentEstimate estimate_two_form(const MinimalSequence &seq, size_t burn_in = 3) {
    ExponentEstimate est;
    est.kind = ExponentKind::two_form_LP;
    RealCtx ctx(seq.precision_bits);
    size_t usable = 0;
    for (const auto &r : seq.records) {
        if (r.nu <= burn_in)
            continue;
        ++usable;
        if (r.P_val.contains_zero()) {
            ++est.skipped;
            continue;
        }
        double logX = log(r.X, ctx).mid_double();
        if (logX <= 0) {
            ++est.skipped;
            continue;
        }
        double s = (log(abs_enclosure(r.P_val), ctx).mid_double() -
                    log(abs_enclosure(r.L_val), ctx).mid_double()) /
                   logX;
        est.samples.emplace_back(r.nu, s);
    }
    if (usable > 0 && est.samples.empty())
        throw insufficient_data_error("P vanishes on all minimal points after burn-in: "
                                      "L and P look dependent on this data");
    if (est.samples.size() < 6)
        throw insufficient_data_error("estimate_two_form needs >= 6 samples after burn-in, have " +
                                      std::to_string(est.samples.size()));
    est.window_begin = est.samples.front().first;
    est.window_end = est.samples.back().first;
    double v = est.samples.front().second;
    for (const auto &[nu, s] : est.samples)
        v = std::max(v, s);
    est.value = v;
    est.trend = detail::trend_of(est.samples);
    return est;
}

// f(w) = w^2 - w + 1, the Theorem-1 lower bound for omega_LP. Exact on exact
// input. Inputs below 2 are outside the regime (omega_hat >= 2 always); they
// are computed anyway with a warning so exploration stays possible.
inline LedgerScalar theorem1_floor(const LedgerScalar &omega_hat,
                                   std::vector<std::string> *warnings = nullptr) {
    if (omega_hat < 2 && warnings)
        warnings->push_back("theorem1_floor: omega_hat = " + to_string(omega_hat) +
                            " < 2 is outside the regime (Minkowski gives omega_hat >= 2)");
    return omega_hat * omega_hat - omega_hat + 1;
}

inline double theorem1_floor(double omega_hat, std::vector<std::string> *warnings = nullptr) {
    if (omega_hat < 2 && warnings)
        warnings->push_back("theorem1_floor: omega_hat = " + std::to_string(omega_hat) +
                            " < 2 is outside the regime (Minkowski gives omega_hat >= 2)");
    return omega_hat * omega_hat - omega_hat + 1;
}

inline BigReal theorem1_floor(const BigReal &omega_hat, const RealCtx &ctx) {
    return add(sub(mul(omega_hat, omega_hat, ctx), omega_hat, ctx), BigReal(1, ctx), ctx);
}

struct TheoremVerdict {
    ExponentEstimate omega_hat;
    ExponentEstimate omega_lp;
    double floor = 0.0;
    double slack = 0.5;
    bool consistent_with_theorem = false;
    std::vector<std::string> warnings;
};

// omega_LP >= omega_hat^2 - omega_hat + 1 within the configured slack.
// The slack absorbs finite-T truncation; it is always reported next to the
// verdict, never silently.
inline TheoremVerdict verdict(const MinimalSequence &seq, double slack = 0.5,
                              size_t burn_in = 3) {
    TheoremVerdict v;
    v.omega_hat = estimate_uniform(seq, burn_in);
    v.omega_lp = estimate_two_form(seq, burn_in);
    v.slack = slack;
    v.floor = theorem1_floor(v.omega_hat.value, &v.warnings);
    v.consistent_with_theorem = v.omega_lp.value >= v.floor - slack;
    return v;
}

} // namespace diophant
