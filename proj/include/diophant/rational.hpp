#pragma once

#include <gmpxx.h>

#include <string>

#include "diophant/error.hpp"
#include "diophant/real.hpp"

namespace diophant {

// Exact rational scalar; mpq_class keeps gcd(|num|, den) = 1 and den > 0
// canonical, which is exactly the invariant we need.
using LedgerScalar = mpq_class;

inline LedgerScalar make_rational(long num, long den = 1) {
    if (den == 0)
        throw config_error("rational with zero denominator");
    LedgerScalar q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "p", "p/q" and plain decimal strings like "-12.375".
inline LedgerScalar parse_rational(const std::string &text) {
    if (text.empty())
        throw config_error("empty rational literal");
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        size_t frac_len = text.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw config_error("bad decimal literal: " + text);
        mpz_class num(digits, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
        LedgerScalar q(num, den);
        q.canonicalize();
        return q;
    }
    LedgerScalar q;
    if (mpq_set_str(q.get_mpq_t(), text.c_str(), 10) != 0)
        throw config_error("bad rational literal: " + text);
    q.canonicalize();
    if (q.get_den() <= 0)
        throw config_error("rational with nonpositive denominator: " + text);
    return q;
}

inline std::string to_string(const LedgerScalar &q) {
    if (q.get_den() == 1)
        return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline LedgerScalar pow_int(const LedgerScalar &base, unsigned long e) {
    LedgerScalar r = 1;
    LedgerScalar b = base;
    while (e > 0) {
        if (e & 1)
            r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

inline BigReal to_real(const LedgerScalar &q, const RealCtx &ctx) { return BigReal(q, ctx); }

// Exact rational value of a (finite) mpfr number.
inline mpq_class mpq_from_mpfr(mpfr_srcptr x) {
    if (mpfr_zero_p(x))
        return mpq_class(0);
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    mpq_class q(m);
    mpz_class f;
    if (e >= 0) {
        mpz_ui_pow_ui(f.get_mpz_t(), 2, static_cast<unsigned long>(e));
        q *= mpq_class(f);
    } else {
        mpz_ui_pow_ui(f.get_mpz_t(), 2, static_cast<unsigned long>(-e));
        q /= mpq_class(f);
    }
    q.canonicalize();
    return q;
}

// Certified containment of an exact rational in the enclosure.
inline bool contains_exact(const BigReal &v, const mpq_class &exact) {
    mpq_class mid = mpq_from_mpfr(v.mid());
    mpq_class rad = mpq_from_mpfr(v.rad());
    mpq_class diff = exact - mid;
    return abs(diff) <= rad;
}

} // namespace diophant
