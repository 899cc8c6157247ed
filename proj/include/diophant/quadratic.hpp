#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "diophant/error.hpp"
#include "diophant/exponents.hpp"
#include "diophant/forms.hpp"
#include "diophant/scan.hpp"
#include "diophant/theta.hpp"

namespace diophant {

// One record-breaking algebraic approximant of degree <= 2. Coefficients are
// the canonical polynomial: coprime, leading nonzero coefficient positive.
struct QuadraticApproximant {
    std::array<int64_t, 3> a{}; // a0 + a1 x + a2 x^2
    int64_t H = 0;              // max |a_i|
    BigReal xi;                 // certified real root nearest theta
    BigReal dist;               // |theta - xi|
    std::optional<double> gamma; // -log dist / log H; absent for H = 1
};

// L = (1, theta, theta^2), P = (0, 1, 2 theta): the pair behind Theorem 2.
inline FormSet theorem2_pair(std::shared_ptr<ThetaValue> theta) {
    return FormSet::theorem2(std::move(theta));
}

// Rejects theta that is certainly rational-of-small-height or a quadratic
// irrationality. Algebraic specs of stripped degree <= 3 are decided exactly;
// higher degrees fall back to a small-relation search verified by exact
// polynomial division.
inline void check_omega_star_hypothesis(const ThetaValue &theta, int64_t h_max,
                                        std::vector<std::string> &warnings) {
    auto [deg, known] = theta.algebraic_degree();
    if (known && deg == 1) {
        auto q = theta.exact_rational();
        // a rational theta of height within reach is its own approximant
        if (q) {
            mpz_class h = std::max(mpz_class(abs(q->get_num())), mpz_class(q->get_den()));
            if (h <= h_max) {
                throw hypothesis_error("hypothesis violated: theta is rational with height " +
                                       h.get_str() + " <= H_max");
            }
            warnings.push_back("theta is rational with height " + h.get_str() +
                               " beyond H_max; treating it as irrational at this scale");
            return;
        }
    }
    if (known && deg == 2)
        throw hypothesis_error("hypothesis violated: theta is a quadratic irrationality");
    if (!known && theta.spec().kind() == ThetaSpec::Kind::algebraic_root) {
        // search a small quadratic divisor of the defining polynomial
        const ZPoly &p = theta.spec().polynomial();
        RealCtx ctx(256);
        BigReal t = theta.eval(ctx);
        BigReal t2 = mul(t, t, ctx);
        for (long m2 = 1; m2 <= 16; ++m2) {
            for (long m1 = -16; m1 <= 16; ++m1) {
                BigReal u = add(mul(BigReal(m2, ctx), t2, ctx), mul(BigReal(m1, ctx), t, ctx), ctx);
                mpz_class lo, hi;
                neg(u).integer_hull(lo, hi);
                for (mpz_class m0 = lo; m0 <= hi; ++m0) {
                    ZPoly quad{m0, mpz_class(m1), mpz_class(m2)};
                    BigReal v = add(u, BigReal(m0, ctx), ctx);
                    if (abs_enclosure(v).certainly_below_2exp(-120) && poly::divides(quad, p))
                        throw hypothesis_error(
                            "hypothesis violated: theta satisfies the quadratic " +
                            poly::to_string(quad));
                }
            }
        }
        warnings.push_back("minimal-polynomial degree of " + theta.spec().text() +
                           " not fully certified; no small quadratic relation found");
    }
}

namespace detail {

struct RawCandidate {
    int64_t a0, a1, a2;
};

// Certified distance from theta to the nearest real root of the candidate,
// plus the root itself. Empty when the polynomial has no real root.
inline std::optional<std::pair<BigReal, BigReal>>
root_distance(const ThetaValue &theta, const RawCandidate &c, const RealCtx &ctx) {
    BigReal t = theta.eval(ctx);
    if (c.a2 == 0) {
        if (c.a1 == 0)
            return std::nullopt;
        mpq_class xi(-c.a0, c.a1);
        xi.canonicalize();
        BigReal x(xi, ctx);
        return std::make_pair(x, abs_enclosure(sub(t, x, ctx)));
    }
    mpz_class disc = mpz_class(c.a1) * c.a1 - 4 * mpz_class(c.a0) * c.a2;
    if (disc < 0)
        return std::nullopt;
    BigReal sq = sqrt(BigReal(disc, ctx), ctx);
    mpz_class two_a2_z = 2 * mpz_class(c.a2);
    BigReal two_a2(two_a2_z, ctx);
    BigReal r1 = div(sub(neg(BigReal(mpz_class(c.a1), ctx)), sq, ctx), two_a2, ctx);
    BigReal r2 = div(add(neg(BigReal(mpz_class(c.a1), ctx)), sq, ctx), two_a2, ctx);
    BigReal d1 = abs_enclosure(sub(t, r1, ctx));
    BigReal d2 = abs_enclosure(sub(t, r2, ctx));
    Sign s = sub(d1, d2, ctx).sign();
    if (s == Sign::negative)
        return std::make_pair(r1, d1);
    if (s == Sign::positive)
        return std::make_pair(r2, d2);
    // equidistant (only reachable for rational theta): keep the smaller root
    return std::make_pair(r1, d1);
}

} // namespace detail

struct OmegaStarScan {
    std::vector<QuadraticApproximant> records;
    std::vector<std::string> warnings;
};

// Record-breaker enumeration over all degree <= 2 integer polynomials with
// height 1..H_max. Candidates are located through the root condition
// |p(theta)| < H * best * (best + sqrt(5)), which pins a0 (or a1) to an O(1)
// window per coefficient pair, so a shell costs O(H) instead of O(H^2).
inline OmegaStarScan enumerate_approximants(std::shared_ptr<ThetaValue> theta, int64_t h_max,
                                            const RealCtx &ctx) {
    if (h_max < 1)
        throw config_error("H_max must be >= 1");
    OmegaStarScan out;
    check_omega_star_hypothesis(*theta, h_max, out.warnings);

    detail::ScanTheta st = detail::ScanTheta::from(theta->eval(RealCtx(192)));
    const double th = st.value.hi + st.value.lo;
    const double th2 = th * th;
    auto exact_theta = theta->exact_rational();

    std::optional<BigReal> best; // certified |theta - xi| of the last record
    double best_upper = std::numeric_limits<double>::infinity();

    std::vector<detail::RawCandidate> shell;
    for (int64_t H = 1; H <= h_max; ++H) {
        shell.clear();
        double delta = best_upper * (best_upper + 2.2361) * static_cast<double>(H) + 1e-9;
        auto window = [](double center, double radius, int64_t cap) {
            // integer window [center - radius, center + radius] clipped to
            // [-cap, cap], safe against non-finite radius
            if (!(radius < 1e17) || std::abs(center) > 1e17)
                return std::pair<int64_t, int64_t>(-cap, cap);
            int64_t lo = static_cast<int64_t>(std::floor(center - radius));
            int64_t hi = static_cast<int64_t>(std::ceil(center + radius));
            return std::pair<int64_t, int64_t>(std::max(lo, -cap), std::min(hi, cap));
        };
        auto push_a0_window = [&](int64_t a2, int64_t a1, int64_t a0_cap) {
            double u = static_cast<double>(a1) * th + static_cast<double>(a2) * th2;
            auto [lo, hi] = window(-u, delta, a0_cap);
            for (int64_t a0 = lo; a0 <= hi; ++a0)
                shell.push_back({a0, a1, a2});
        };
        // (i) a2 = H
        for (int64_t a1 = -H; a1 <= H; ++a1)
            push_a0_window(H, a1, H);
        // (ii) |a1| = H, a2 < H (a2 = 0 requires a1 = +H canonical)
        for (int64_t a2 = 0; a2 < H; ++a2) {
            push_a0_window(a2, H, H);
            if (a2 >= 1)
                push_a0_window(a2, -H, H);
        }
        // (iii) |a0| = H, a2 < H, |a1| < H: window in a1 around (+-H - a2 th2)/th
        for (int64_t a2 = 0; a2 < H; ++a2) {
            for (int sgn0 : {1, -1}) {
                double center = (-static_cast<double>(sgn0) * static_cast<double>(H) -
                                 static_cast<double>(a2) * th2) /
                                th;
                double width = th == 0.0 ? std::numeric_limits<double>::infinity()
                                         : delta / std::abs(th) + 1.0;
                auto [lo, hi] = window(center, width, H - 1);
                for (int64_t a1 = lo; a1 <= hi; ++a1) {
                    if (a2 == 0 && a1 < 1)
                        continue; // canonical sign for linear forms
                    shell.push_back({static_cast<int64_t>(sgn0) * H, a1, a2});
                }
            }
        }

        std::sort(shell.begin(), shell.end(),
                  [](const detail::RawCandidate &x, const detail::RawCandidate &y) {
                      if (x.a2 != y.a2)
                          return x.a2 < y.a2;
                      if (x.a1 != y.a1)
                          return x.a1 < y.a1;
                      return x.a0 < y.a0;
                  });
        shell.erase(std::unique(shell.begin(), shell.end(),
                                [](const detail::RawCandidate &x, const detail::RawCandidate &y) {
                                    return x.a0 == y.a0 && x.a1 == y.a1 && x.a2 == y.a2;
                                }),
                    shell.end());

        for (const auto &c : shell) {
            if (std::max({std::abs(c.a0), std::abs(c.a1), std::abs(c.a2)}) != H)
                continue;
            mpz_class g = gcd(gcd(mpz_class(std::abs(c.a0)), mpz_class(std::abs(c.a1))),
                              mpz_class(std::abs(c.a2)));
            if (g != 1)
                continue;
            if (c.a2 == 0 && c.a1 <= 0)
                continue;
            if (c.a2 != 0) {
                mpz_class disc = mpz_class(c.a1) * c.a1 - 4 * mpz_class(c.a0) * c.a2;
                if (disc < 0)
                    continue;
                // reducible quadratics are skipped: their roots are rational
                // and already enumerated at lower or equal height
                if (mpz_perfect_square_p(disc.get_mpz_t()))
                    continue;
            }
            auto rd = detail::root_distance(*theta, c, ctx);
            if (!rd)
                continue;
            auto &[xi, dist] = *rd;
            bool exact_hit = false;
            if (exact_theta && c.a2 == 0) {
                mpq_class root(-c.a0, c.a1);
                root.canonicalize();
                exact_hit = (root == *exact_theta);
            }
            if (dist.is_exact_zero() || exact_hit) {
                throw hypothesis_error("hypothesis violated: theta is the exact root of " +
                                       std::to_string(c.a0) + " + " + std::to_string(c.a1) +
                                       " x + " + std::to_string(c.a2) + " x^2");
            }
            bool is_record;
            if (!best) {
                is_record = true;
            } else {
                Sign s = sub(dist, *best, ctx).sign();
                if (s == Sign::zero_indeterminate) {
                    s = with_escalation(ctx, [&](const RealCtx &cc) {
                        auto rd2 = detail::root_distance(*theta, c, cc);
                        Sign s2 = sub(rd2->second, *best, cc).sign();
                        if (s2 == Sign::zero_indeterminate)
                            throw escalation_request{"omega-star record comparison"};
                        return s2;
                    });
                }
                is_record = (s == Sign::negative);
            }
            if (is_record) {
                QuadraticApproximant rec;
                rec.a = {c.a0, c.a1, c.a2};
                rec.H = H;
                rec.xi = xi;
                rec.dist = dist;
                if (H >= 2) {
                    RealCtx lc(ctx.precision_bits);
                    rec.gamma = -log(dist, lc).mid_double() /
                                std::log(static_cast<double>(H));
                }
                best = dist;
                best_upper = dist.upper_double();
                out.records.push_back(std::move(rec));
            }
        }
    }
    return out;
}

// limsup proxy: running maximum of gamma over record-breakers with H >= 2.
inline ExponentEstimate estimate_omega_star(const OmegaStarScan &scan) {
    ExponentEstimate est;
    est.kind = ExponentKind::quadratic_star;
    for (const auto &r : scan.records)
        if (r.gamma)
            est.samples.emplace_back(static_cast<size_t>(r.H), *r.gamma);
    if (est.samples.size() < 3)
        throw insufficient_data_error("estimate_omega_star needs >= 3 record-breakers with "
                                      "H >= 2, have " +
                                      std::to_string(est.samples.size()));
    est.window_begin = est.samples.front().first;
    est.window_end = est.samples.back().first;
    double v = est.samples.front().second;
    for (const auto &[h, g] : est.samples)
        v = std::max(v, g);
    est.value = v;
    est.trend = detail::trend_of(est.samples);
    return est;
}

struct DiffCheck {
    double omega_star = 0.0;
    double omega_lp = 0.0;
    double slack = 0.0;
    bool holds = false;
};

// Eq-(diff) style comparison: omega_star >= omega_LP within slack.
inline DiffCheck check_diff(double omega_star_est, double omega_lp_est, double slack) {
    DiffCheck c{omega_star_est, omega_lp_est, slack,
                omega_star_est >= omega_lp_est - slack};
    return c;
}

} // namespace diophant
