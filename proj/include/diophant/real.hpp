#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <climits>
#include <cstdint>
#include <string>
#include <utility>

#include "diophant/error.hpp"

namespace diophant {

// Evaluation context: midpoints are rounded to nearest at precision_bits;
// sign-deciding computations may be replayed at doubled precision up to
// max_precision_bits.
struct RealCtx {
    long precision_bits = 256;
    long max_precision_bits = 8192;

    RealCtx() = default;
    RealCtx(long bits, long max_bits = 8192) : precision_bits(bits), max_precision_bits(max_bits) {
        if (bits < 64)
            throw config_error("precision_bits must be >= 64");
        if (max_precision_bits < precision_bits)
            max_precision_bits = precision_bits;
    }

    RealCtx with_bits(long bits) const { return RealCtx(bits, std::max(bits, max_precision_bits)); }
};

enum class Sign { negative, zero_indeterminate, positive };

namespace detail {
// Radius values need little precision but must always round outward.
inline constexpr mpfr_prec_t kRadiusBits = 32;

// RAII scratch mpfr value for paths where the precision is data-dependent.
class ScopedMpfr {
  public:
    explicit ScopedMpfr(mpfr_prec_t prec) { mpfr_init2(v_, std::max<mpfr_prec_t>(prec, MPFR_PREC_MIN)); }
    ~ScopedMpfr() { mpfr_clear(v_); }
    ScopedMpfr(const ScopedMpfr &) = delete;
    ScopedMpfr &operator=(const ScopedMpfr &) = delete;
    operator mpfr_ptr() { return v_; }
    operator mpfr_srcptr() const { return v_; }

  private:
    mpfr_t v_;
};
} // namespace detail

// Midpoint-radius real: the exact value lies in [mid - rad, mid + rad].
// Values are immutable after construction aside from assignment.
class BigReal {
  public:
    BigReal() { init(64); }

    explicit BigReal(long value, const RealCtx &ctx = RealCtx()) {
        init(ctx.precision_bits);
        mpfr_set_si(mid_, value, MPFR_RNDN); // exact: |value| < 2^63 <= 2^prec
    }

    BigReal(const mpz_class &value, const RealCtx &ctx) {
        init(ctx.precision_bits);
        int t = mpfr_set_z(mid_, value.get_mpz_t(), MPFR_RNDN);
        bump_ulp_if(t);
    }

    BigReal(const mpq_class &value, const RealCtx &ctx) {
        init(ctx.precision_bits);
        int t = mpfr_set_q(mid_, value.get_mpq_t(), MPFR_RNDN);
        bump_ulp_if(t);
    }

    BigReal(const BigReal &o) {
        init_with(mpfr_get_prec(o.mid_));
        mpfr_set(mid_, o.mid_, MPFR_RNDN);
        mpfr_set(rad_, o.rad_, MPFR_RNDU);
    }

    BigReal(BigReal &&o) noexcept {
        mid_[0] = o.mid_[0];
        rad_[0] = o.rad_[0];
        o.moved_ = true;
        moved_ = false;
    }

    BigReal &operator=(BigReal o) noexcept {
        swap(*this, o);
        return *this;
    }

    ~BigReal() {
        if (!moved_) {
            mpfr_clear(mid_);
            mpfr_clear(rad_);
        }
    }

    friend void swap(BigReal &a, BigReal &b) noexcept {
        std::swap(a.mid_[0], b.mid_[0]);
        std::swap(a.rad_[0], b.rad_[0]);
        std::swap(a.moved_, b.moved_);
    }

    static BigReal exact_zero(const RealCtx &ctx = RealCtx()) { return BigReal(0L, ctx); }

    // An a-priori enclosure mid +/- rad given as doubles (rad >= 0).
    static BigReal from_double_enclosure(double mid, double rad, const RealCtx &ctx) {
        BigReal r;
        r.reprec(ctx.precision_bits);
        mpfr_set_d(r.mid_, mid, MPFR_RNDN);
        mpfr_set_d(r.rad_, rad < 0 ? -rad : rad, MPFR_RNDU);
        return r;
    }

    long precision() const { return mpfr_get_prec(mid_); }

    const mpfr_t &mid() const { return mid_; }
    const mpfr_t &rad() const { return rad_; }

    bool is_exact() const { return mpfr_zero_p(rad_); }

    // ---- certified queries ------------------------------------------------

    Sign sign() const {
        if (mpfr_zero_p(mid_) && mpfr_zero_p(rad_))
            return Sign::zero_indeterminate; // exactly zero, reported as such
        if (mpfr_cmpabs(mid_, rad_) > 0)
            return mpfr_sgn(mid_) > 0 ? Sign::positive : Sign::negative;
        return Sign::zero_indeterminate;
    }

    bool definitely_positive() const { return sign() == Sign::positive; }
    bool definitely_negative() const { return sign() == Sign::negative; }
    bool contains_zero() const { return sign() == Sign::zero_indeterminate; }

    bool is_exact_zero() const { return mpfr_zero_p(mid_) && mpfr_zero_p(rad_); }

    // Exact value is certainly < 2^e.
    bool certainly_below_2exp(long e) const {
        BigReal bound;
        bound.reprec(64);
        mpfr_set_ui_2exp(bound.mid_, 1, e, MPFR_RNDN);
        BigReal diff = sub(bound, *this, RealCtx(64));
        return diff.definitely_positive();
    }

    double lower_double() const {
        MPFR_DECL_INIT(t, 64);
        mpfr_sub(t, mid_, rad_, MPFR_RNDD);
        return mpfr_get_d(t, MPFR_RNDD);
    }

    double upper_double() const {
        MPFR_DECL_INIT(t, 64);
        mpfr_add(t, mid_, rad_, MPFR_RNDU);
        return mpfr_get_d(t, MPFR_RNDU);
    }

    double mid_double() const { return mpfr_get_d(mid_, MPFR_RNDN); }
    double rad_double() const { return mpfr_get_d(rad_, MPFR_RNDU); }

    // Smallest integer interval [lo, hi] containing the enclosure.
    void integer_hull(mpz_class &lo, mpz_class &hi) const {
        mpfr_prec_t p = std::max<mpfr_prec_t>(mpfr_get_prec(mid_) + 64, 128);
        detail::ScopedMpfr t(p);
        mpfr_sub(t, mid_, rad_, MPFR_RNDD);
        mpfr_get_z(lo.get_mpz_t(), t, MPFR_RNDD);
        mpfr_add(t, mid_, rad_, MPFR_RNDU);
        mpfr_get_z(hi.get_mpz_t(), t, MPFR_RNDU);
    }

    // floor of the exact value, when the enclosure determines it.
    bool certified_floor(mpz_class &out) const {
        mpfr_prec_t p = std::max<mpfr_prec_t>(mpfr_get_prec(mid_) + 64, 128);
        detail::ScopedMpfr a(p), b(p);
        mpfr_sub(a, mid_, rad_, MPFR_RNDD);
        mpfr_add(b, mid_, rad_, MPFR_RNDU);
        mpfr_floor(a, a);
        mpfr_floor(b, b);
        if (!mpfr_equal_p(a, b))
            return false;
        mpfr_get_z(out.get_mpz_t(), a, MPFR_RNDN);
        return true;
    }

    std::string to_string(size_t digits = 0) const {
        if (mpfr_zero_p(mid_))
            return "0";
        if (digits == 0)
            digits = static_cast<size_t>(static_cast<double>(precision()) * 0.30103) + 2;
        mpfr_exp_t e;
        char *s = mpfr_get_str(nullptr, &e, 10, digits, mid_, MPFR_RNDN);
        std::string m(s);
        mpfr_free_str(s);
        bool neg = !m.empty() && m[0] == '-';
        std::string dig = neg ? m.substr(1) : m;
        std::string out = neg ? "-" : "";
        out += "0." + dig + "e" + std::to_string(e);
        return out;
    }

    // err <= 2^err_bits (ceiling of log2 of the radius); LONG_MIN when exact.
    long err_bits() const {
        if (mpfr_zero_p(rad_))
            return LONG_MIN;
        return static_cast<long>(mpfr_get_exp(rad_));
    }

    // ---- arithmetic (outward rounded) ------------------------------------

    friend BigReal add(const BigReal &a, const BigReal &b, const RealCtx &ctx) {
        BigReal r;
        r.reprec(ctx.precision_bits);
        int t = mpfr_add(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
        mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
        r.bump_ulp_if(t);
        return r;
    }

    friend BigReal sub(const BigReal &a, const BigReal &b, const RealCtx &ctx) {
        BigReal r;
        r.reprec(ctx.precision_bits);
        int t = mpfr_sub(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
        mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
        r.bump_ulp_if(t);
        return r;
    }

    friend BigReal mul(const BigReal &a, const BigReal &b, const RealCtx &ctx) {
        BigReal r;
        r.reprec(ctx.precision_bits);
        int t = mpfr_mul(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
        // rad = |am| rb + |bm| ra + ra rb, every step rounded up
        MPFR_DECL_INIT(am, detail::kRadiusBits);
        MPFR_DECL_INIT(bm, detail::kRadiusBits);
        MPFR_DECL_INIT(tmp, detail::kRadiusBits);
        abs_up(am, a.mid_);
        abs_up(bm, b.mid_);
        mpfr_mul(r.rad_, am, b.rad_, MPFR_RNDU);
        mpfr_mul(tmp, bm, a.rad_, MPFR_RNDU);
        mpfr_add(r.rad_, r.rad_, tmp, MPFR_RNDU);
        mpfr_mul(tmp, a.rad_, b.rad_, MPFR_RNDU);
        mpfr_add(r.rad_, r.rad_, tmp, MPFR_RNDU);
        r.bump_ulp_if(t);
        return r;
    }

    friend BigReal div(const BigReal &a, const BigReal &b, const RealCtx &ctx) {
        // |b| must be certainly bounded away from zero.
        MPFR_DECL_INIT(blo, detail::kRadiusBits);
        abs_down(blo, b.mid_);
        mpfr_sub(blo, blo, b.rad_, MPFR_RNDD);
        if (!(mpfr_sgn(blo) > 0))
            throw indeterminate_divisor_error("division by interval containing zero");
        BigReal r;
        r.reprec(ctx.precision_bits);
        int t = mpfr_div(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
        // rad = (ra |bm| + |am| rb) / (|bm|_down * (|bm| - rb))
        MPFR_DECL_INIT(am, detail::kRadiusBits);
        MPFR_DECL_INIT(bmu, detail::kRadiusBits);
        MPFR_DECL_INIT(bmd, detail::kRadiusBits);
        MPFR_DECL_INIT(num, detail::kRadiusBits);
        MPFR_DECL_INIT(tmp, detail::kRadiusBits);
        abs_up(am, a.mid_);
        abs_up(bmu, b.mid_);
        abs_down(bmd, b.mid_);
        mpfr_mul(num, a.rad_, bmu, MPFR_RNDU);
        mpfr_mul(tmp, am, b.rad_, MPFR_RNDU);
        mpfr_add(num, num, tmp, MPFR_RNDU);
        mpfr_mul(tmp, bmd, blo, MPFR_RNDD);
        mpfr_div(r.rad_, num, tmp, MPFR_RNDU);
        r.bump_ulp_if(t);
        return r;
    }

    friend BigReal neg(const BigReal &a) {
        BigReal r(a);
        mpfr_neg(r.mid_, r.mid_, MPFR_RNDN); // exact
        return r;
    }

    // Enclosure of |x|: | |exact| - |mid| | <= |exact - mid| <= rad.
    friend BigReal abs_enclosure(const BigReal &a) {
        BigReal r(a);
        mpfr_abs(r.mid_, r.mid_, MPFR_RNDN); // exact
        return r;
    }

    friend BigReal sqrt(const BigReal &a, const RealCtx &ctx) {
        MPFR_DECL_INIT(lo, detail::kRadiusBits);
        abs_down(lo, a.mid_); // only valid if a >= 0; checked below
        if (mpfr_sgn(a.mid_) < 0 || a.sign() == Sign::negative)
            throw error("sqrt of negative enclosure");
        BigReal r;
        r.reprec(ctx.precision_bits);
        int t = mpfr_sqrt(r.mid_, a.mid_, MPFR_RNDN);
        if (a.is_exact()) {
            mpfr_set_zero(r.rad_, 1);
            r.bump_ulp_if(t);
            return r;
        }
        MPFR_DECL_INIT(low, detail::kRadiusBits);
        mpfr_set(low, lo, MPFR_RNDD);
        mpfr_sub(low, low, a.rad_, MPFR_RNDD);
        if (mpfr_sgn(low) > 0) {
            // Lipschitz: rad / (2 sqrt(lower))
            mpfr_sqrt(low, low, MPFR_RNDD);
            mpfr_mul_ui(low, low, 2, MPFR_RNDD);
            mpfr_div(r.rad_, a.rad_, low, MPFR_RNDU);
        } else {
            // enclosure includes 0: bound by sqrt(upper)
            MPFR_DECL_INIT(hi, detail::kRadiusBits);
            abs_up(hi, a.mid_);
            mpfr_add(hi, hi, a.rad_, MPFR_RNDU);
            mpfr_sqrt(r.rad_, hi, MPFR_RNDU);
        }
        r.bump_ulp_if(t);
        return r;
    }

    friend BigReal log(const BigReal &a, const RealCtx &ctx) {
        MPFR_DECL_INIT(low, detail::kRadiusBits);
        abs_down(low, a.mid_);
        mpfr_sub(low, low, a.rad_, MPFR_RNDD);
        if (!(mpfr_sgn(a.mid_) > 0) || !(mpfr_sgn(low) > 0))
            throw error("log of enclosure not certainly positive");
        BigReal r;
        r.reprec(ctx.precision_bits);
        int t = mpfr_log(r.mid_, a.mid_, MPFR_RNDN);
        mpfr_div(r.rad_, a.rad_, low, MPFR_RNDU);
        r.bump_ulp_if(t);
        return r;
    }

    friend BigReal exp(const BigReal &a, const RealCtx &ctx) {
        BigReal r;
        r.reprec(ctx.precision_bits);
        int t = mpfr_exp(r.mid_, a.mid_, MPFR_RNDN);
        MPFR_DECL_INIT(hi, detail::kRadiusBits);
        mpfr_set(hi, a.mid_, MPFR_RNDU);
        mpfr_add(hi, hi, a.rad_, MPFR_RNDU);
        mpfr_exp(hi, hi, MPFR_RNDU);
        mpfr_mul(r.rad_, hi, a.rad_, MPFR_RNDU); // |e^x - e^y| <= e^max |x-y|
        r.bump_ulp_if(t);
        return r;
    }

    friend BigReal mul_2exp(const BigReal &a, long e) {
        BigReal r(a);
        mpfr_mul_2si(r.mid_, r.mid_, e, MPFR_RNDN); // exact
        mpfr_mul_2si(r.rad_, r.rad_, e, MPFR_RNDU);
        return r;
    }

    // Widen the radius by an upper bound of |amount|.
    friend BigReal widen(const BigReal &a, const BigReal &amount) {
        BigReal r(a);
        MPFR_DECL_INIT(t, detail::kRadiusBits);
        mpfr_abs(t, amount.mid_, MPFR_RNDU);
        mpfr_add(t, t, amount.rad_, MPFR_RNDU);
        mpfr_add(r.rad_, r.rad_, t, MPFR_RNDU);
        return r;
    }

    // Widen the radius by 2^e (certified containment of a nearby real).
    friend BigReal widen_2exp(const BigReal &a, long e) {
        BigReal r(a);
        MPFR_DECL_INIT(w, detail::kRadiusBits);
        mpfr_set_ui_2exp(w, 1, e, MPFR_RNDU);
        mpfr_add(r.rad_, r.rad_, w, MPFR_RNDU);
        return r;
    }

  private:
    mpfr_t mid_;
    mpfr_t rad_;
    bool moved_ = false;

    void init(mpfr_prec_t prec) { init_with(prec); }

    void init_with(mpfr_prec_t prec) {
        mpfr_init2(mid_, std::max<mpfr_prec_t>(prec, MPFR_PREC_MIN));
        mpfr_init2(rad_, detail::kRadiusBits);
        mpfr_set_zero(mid_, 1);
        mpfr_set_zero(rad_, 1);
        moved_ = false;
    }

    void reprec(mpfr_prec_t prec) {
        mpfr_set_prec(mid_, prec);
        mpfr_set_zero(mid_, 1);
        mpfr_set_zero(rad_, 1);
    }

    // Add one ulp of mid to rad when the midpoint rounding was inexact.
    void bump_ulp_if(int ternary) {
        if (ternary == 0 || mpfr_zero_p(mid_))
            return;
        MPFR_DECL_INIT(u, detail::kRadiusBits);
        mpfr_set_ui_2exp(u, 1, mpfr_get_exp(mid_) - mpfr_get_prec(mid_), MPFR_RNDU);
        mpfr_add(rad_, rad_, u, MPFR_RNDU);
    }

    static void abs_up(mpfr_ptr out, mpfr_srcptr x) {
        mpfr_abs(out, x, MPFR_RNDU);
    }
    static void abs_down(mpfr_ptr out, mpfr_srcptr x) {
        mpfr_abs(out, x, MPFR_RNDD);
    }
};

inline Sign sign_of(const BigReal &a) { return a.sign(); }

// Double-double image of an enclosure: hi + lo approximates the exact value
// with |exact - (hi + lo)| <= err.
struct DD {
    double hi = 0.0;
    double lo = 0.0;
    double err = 0.0;
};

inline DD to_dd(const BigReal &a) {
    DD d;
    d.hi = mpfr_get_d(a.mid(), MPFR_RNDN);
    detail::ScopedMpfr t(std::max<mpfr_prec_t>(a.precision() + 64, 128));
    mpfr_set_d(t, d.hi, MPFR_RNDN);
    mpfr_sub(t, a.mid(), t, MPFR_RNDN); // exact: prec is wide enough
    d.lo = mpfr_get_d(t, MPFR_RNDN);
    detail::ScopedMpfr r(64);
    mpfr_set_d(r, d.lo, MPFR_RNDU);
    mpfr_sub(r, t, r, MPFR_RNDA);
    mpfr_abs(r, r, MPFR_RNDU);
    mpfr_add(r, r, a.rad(), MPFR_RNDU);
    d.err = mpfr_get_d(r, MPFR_RNDU);
    return d;
}

// sign of (a - b), i.e. a <=> b with certification.
inline Sign cmp(const BigReal &a, const BigReal &b) {
    RealCtx c(std::max({a.precision(), b.precision(), 64L}));
    return sub(a, b, c).sign();
}

// Replays f at doubled precision while it raises escalation_request.
template <class F> auto with_escalation(const RealCtx &ctx, F &&f) {
    std::string last;
    for (long bits = ctx.precision_bits; bits <= ctx.max_precision_bits; bits *= 2) {
        try {
            return f(RealCtx(bits, ctx.max_precision_bits));
        } catch (const escalation_request &e) {
            last = e.context;
            continue;
        }
    }
    throw precision_error("undecidable at precision cap " +
                          std::to_string(ctx.max_precision_bits) +
                          (last.empty() ? "" : (": " + last)));
}

} // namespace diophant
