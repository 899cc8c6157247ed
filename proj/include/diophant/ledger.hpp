#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diophant/error.hpp"
#include "diophant/minimal_points.hpp"
#include "diophant/rational.hpp"

namespace diophant {

// Parameters of the Lemma 4/5 arithmetic, all exact rationals.
struct LedgerParams {
    LedgerScalar alpha;
    LedgerScalar r;
    LedgerScalar beta0;

    LedgerParams(LedgerScalar a, LedgerScalar rr, LedgerScalar b)
        : alpha(std::move(a)), r(std::move(rr)), beta0(std::move(b)) {
        if (alpha <= 2)
            throw hypothesis_error("out of regime: alpha must be > 2 (alpha = " +
                                   diophant::to_string(alpha) + ")");
        if (r <= 0)
            throw config_error("r must be positive");
    }
};

// alpha^2 - alpha + 1, the critical exponent.
inline LedgerScalar lemma4_threshold(const LedgerScalar &alpha) {
    if (alpha <= 2)
        throw hypothesis_error("out of regime: alpha must be > 2 (the alpha = 2 case is the "
                               "classical Davenport-Schmidt bound)");
    return alpha * alpha - alpha + 1;
}

// One step of the recursion beta' = r - alpha - 1 + beta / (alpha - 1).
inline LedgerScalar beta_step(const LedgerParams &p, const LedgerScalar &beta_i) {
    return p.r - p.alpha - 1 + beta_i / (p.alpha - 1);
}

// Exact fixed point (r - alpha - 1)(alpha - 1)/(alpha - 2); equals
// alpha (alpha - 1) at the critical r = alpha^2 - alpha + 1.
inline LedgerScalar beta_fixed_point(const LedgerParams &p) {
    return (p.r - p.alpha - 1) * (p.alpha - 1) / (p.alpha - 2);
}

// Exact solution of the recursion at the critical r:
//   beta_i = alpha(alpha-1) + (beta0 - alpha(alpha-1)) / (alpha-1)^i.
// This is the closed form the recursion actually satisfies; it must agree
// with i-fold beta_step exactly.
inline LedgerScalar beta_closed_form(const LedgerParams &p, unsigned long i) {
    LedgerScalar critical = lemma4_threshold(p.alpha);
    if (p.r != critical)
        throw config_error("closed form only at critical r = alpha^2 - alpha + 1 (= " +
                           diophant::to_string(critical) + "), got r = " +
                           diophant::to_string(p.r));
    LedgerScalar fp = p.alpha * (p.alpha - 1);
    return fp + (p.beta0 - fp) / pow_int(p.alpha - 1, i);
}

// alpha^2 + 1 - beta/(alpha - 1): the Lemma-5 conclusion threshold for r.
inline LedgerScalar itog1_bound(const LedgerScalar &alpha, const LedgerScalar &beta) {
    if (alpha <= 2)
        throw hypothesis_error("out of regime: alpha must be > 2");
    return alpha * alpha + 1 - beta / (alpha - 1);
}

inline LedgerScalar itog1_bound(const LedgerParams &p) { return itog1_bound(p.alpha, p.beta0); }

// Tri-state per-index check of |P_nu| <= L_nu X_nu^r on real sequence data.
enum class PredicateState { holds, fails, unclear };

struct PredicateRow {
    size_t nu = 0;
    PredicateState r1 = PredicateState::unclear;
};

struct ContradictionTrace {
    LedgerParams params;
    std::vector<LedgerScalar> beta;       // beta_0 .. beta_w
    std::vector<LedgerScalar> itog1;      // itog1_bound(alpha, beta_i)
    LedgerScalar fixed_point;
    std::optional<unsigned long> contradiction_at; // first i with bound > r
    bool monotone_decreasing = true;               // beta_{i+1} < beta_i whenever beta_i > beta*
    std::vector<PredicateRow> predicates;          // present when a sequence was supplied
};

// Replays the recursion of the Theorem-1 proof in exact arithmetic: beta_i
// contracts toward the fixed point with exact factor 1/(alpha-1), the running
// itog1 bound rises, and once it exceeds r the assumed r is contradicted.
inline ContradictionTrace contradiction_trace(const LedgerParams &p, unsigned long w,
                                              const MinimalSequence *seq = nullptr,
                                              size_t burn_in = 3) {
    LedgerScalar threshold = lemma4_threshold(p.alpha);
    if (!(p.r < threshold))
        throw config_error("precondition violated: r must satisfy r < alpha^2 - alpha + 1 = " +
                           diophant::to_string(threshold));
    LedgerScalar floor_beta = p.alpha * (p.alpha - 1);
    if (!(p.beta0 >= floor_beta))
        throw config_error("precondition violated: beta0 must be >= alpha(alpha-1) = " +
                           diophant::to_string(floor_beta) +
                           " (decay bound at independent triples)");

    ContradictionTrace tr{p, {}, {}, beta_fixed_point(p), std::nullopt, true, {}};
    LedgerScalar beta = p.beta0;
    for (unsigned long i = 0; i <= w; ++i) {
        tr.beta.push_back(beta);
        LedgerScalar bound = itog1_bound(p.alpha, beta);
        tr.itog1.push_back(bound);
        if (!tr.contradiction_at && bound > p.r)
            tr.contradiction_at = i;
        LedgerScalar next = beta_step(p, beta);
        // contraction identity: |beta_{i+1} - beta*| = |beta_i - beta*| / (alpha-1)
        if ((next - tr.fixed_point) * (p.alpha - 1) != beta - tr.fixed_point)
            throw error("internal: contraction identity failed"); // exact arithmetic: impossible
        if (beta > tr.fixed_point && !(next < beta))
            tr.monotone_decreasing = false;
        beta = next;
    }

    if (seq) {
        RealCtx ctx(seq->precision_bits);
        BigReal r_real(p.r, ctx);
        for (const auto &rec : seq->records) {
            if (rec.nu <= burn_in)
                continue;
            PredicateRow row;
            row.nu = rec.nu;
            // X^r = exp(r log X)
            BigReal xr = exp(mul(r_real, log(rec.X, ctx), ctx), ctx);
            BigReal rhs = mul(abs_enclosure(rec.L_val), xr, ctx);
            Sign s = sub(rhs, abs_enclosure(rec.P_val), ctx).sign();
            row.r1 = s == Sign::positive    ? PredicateState::holds
                     : s == Sign::negative  ? PredicateState::fails
                                            : PredicateState::unclear;
            tr.predicates.push_back(row);
        }
    }
    return tr;
}

} // namespace diophant
