#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "diophant/rational.hpp"
#include "diophant/real.hpp"

using namespace diophant;

namespace {

mpq_class random_rational(std::mt19937_64 &rng) {
    std::uniform_int_distribution<long> num(-1000, 1000);
    std::uniform_int_distribution<long> den(1, 1000);
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

} // namespace

TEST_CASE("exact integer addition", "[core]") {
    RealCtx ctx(64);
    BigReal one(1, ctx);
    BigReal two = add(one, one, ctx);
    CHECK(two.is_exact());
    CHECK(contains_exact(two, mpq_class(2)));
    CHECK(two.sign() == Sign::positive);
}

TEST_CASE("squaring cbrt(2) encloses 2^(2/3)", "[core]") {
    // independent reference: direct mpfr evaluation of 2^(2/3) at higher precision
    RealCtx ctx(256);
    mpfr_t ref;
    mpfr_init2(ref, 1024);
    mpfr_set_ui(ref, 2, MPFR_RNDN);
    mpfr_rootn_ui(ref, ref, 3, MPFR_RNDN);
    mpfr_sqr(ref, ref, MPFR_RNDN);
    mpq_class reference = mpq_from_mpfr(ref); // within 2^-1020 of 2^(2/3)
    mpfr_clear(ref);

    // enclosure of cbrt(2) by bisection of x^3 - 2 (independent of mpfr_rootn)
    mpq_class lo = 1, hi = 2;
    for (int i = 0; i < 300; ++i) {
        mpq_class m = (lo + hi) / 2;
        if (m * m * m < 2)
            lo = m;
        else
            hi = m;
    }
    BigReal t = widen(BigReal(lo, ctx), BigReal(hi - lo, RealCtx(64)));
    BigReal sq = mul(t, t, ctx);
    // the true square must be inside; allow the reference its own 2^-1020 slack
    CHECK(contains_exact(widen_2exp(sq, -1000), reference));
    CHECK(sq.rad_double() < 1e-60);
}

TEST_CASE("division by interval containing zero fails", "[core]") {
    RealCtx ctx(64);
    BigReal num(1, ctx);
    BigReal den = BigReal::from_double_enclosure(0.0, 0.1, ctx);
    CHECK_THROWS_AS(div(num, den, ctx), indeterminate_divisor_error);
}

TEST_CASE("sign_of certification", "[core]") {
    RealCtx ctx(64);
    CHECK(BigReal::from_double_enclosure(5.0, 0.1, ctx).sign() == Sign::positive);
    CHECK(BigReal::from_double_enclosure(0.0001, 0.01, ctx).sign() == Sign::zero_indeterminate);
    CHECK(BigReal::from_double_enclosure(-3.0, 0.5, ctx).sign() == Sign::negative);
}

TEST_CASE("interval soundness on random rational expressions", "[core]") {
    std::mt19937_64 rng(20240901);
    RealCtx ctx(128);
    for (int iter = 0; iter < 1000; ++iter) {
        mpq_class qa = random_rational(rng);
        mpq_class qb = random_rational(rng);
        mpq_class qc = random_rational(rng);
        BigReal a(qa, ctx), b(qb, ctx), c(qc, ctx);

        mpq_class exact = qa * qb + qc;
        BigReal got = add(mul(a, b, ctx), c, ctx);
        REQUIRE(contains_exact(got, exact));

        exact = (qa - qb) * (qa + qc);
        got = mul(sub(a, b, ctx), add(a, c, ctx), ctx);
        REQUIRE(contains_exact(got, exact));

        if (qc != 0) {
            exact = qa / qc;
            got = div(a, c, ctx);
            REQUIRE(contains_exact(got, exact));
        }
    }
}

TEST_CASE("doubling precision never increases the error bound", "[core]") {
    std::mt19937_64 rng(77);
    for (int iter = 0; iter < 200; ++iter) {
        mpq_class qa = random_rational(rng);
        mpq_class qb = random_rational(rng);
        if (qb == 0)
            continue;
        auto run = [&](long bits) {
            RealCtx ctx(bits);
            BigReal a(qa, ctx), b(qb, ctx);
            BigReal r = div(mul(a, b, ctx), add(mul(b, b, ctx), BigReal(1, ctx), ctx), ctx);
            return r.rad_double();
        };
        double e1 = run(64);
        double e2 = run(128);
        double e3 = run(256);
        REQUIRE(e2 <= e1);
        REQUIRE(e3 <= e2);
    }
}

TEST_CASE("sqrt, log, exp enclosures are sound", "[core]") {
    std::mt19937_64 rng(4242);
    RealCtx ctx(128);
    mpfr_t ref;
    mpfr_init2(ref, 512);
    for (int iter = 0; iter < 200; ++iter) {
        mpq_class q = random_rational(rng);
        if (q <= 0)
            q = -q + mpq_class(1, 7);
        BigReal x(q, ctx);

        mpfr_set_q(ref, q.get_mpq_t(), MPFR_RNDN);
        mpfr_sqrt(ref, ref, MPFR_RNDN);
        REQUIRE(contains_exact(widen_2exp(sqrt(x, ctx), -500), mpq_from_mpfr(ref)));

        mpfr_set_q(ref, q.get_mpq_t(), MPFR_RNDN);
        mpfr_log(ref, ref, MPFR_RNDN);
        REQUIRE(contains_exact(widen_2exp(log(x, ctx), -500), mpq_from_mpfr(ref)));

        mpq_class small = q / 100;
        BigReal s(small, ctx);
        mpfr_set_q(ref, small.get_mpq_t(), MPFR_RNDN);
        mpfr_exp(ref, ref, MPFR_RNDN);
        REQUIRE(contains_exact(widen_2exp(exp(s, ctx), -490), mpq_from_mpfr(ref)));
    }
    mpfr_clear(ref);
}

TEST_CASE("LedgerScalar arithmetic identities", "[core]") {
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 500; ++iter) {
        LedgerScalar a = random_rational(rng);
        LedgerScalar b = random_rational(rng);
        LedgerScalar c = random_rational(rng);
        REQUIRE((a + b) + c == a + (b + c));
        REQUIRE(a * (b + c) == a * b + a * c);
        REQUIRE((a * b) * c == a * (b * c));
        // canonical form: positive denominator, reduced
        LedgerScalar s = a * b + c;
        REQUIRE(s.get_den() > 0);
        REQUIRE(gcd(mpz_class(abs(s.get_num())), mpz_class(s.get_den())) == 1);
    }
}

TEST_CASE("rational parse and format round-trip", "[core]") {
    CHECK(to_string(parse_rational("19/4")) == "19/4");
    CHECK(to_string(parse_rational("-7")) == "-7");
    CHECK(parse_rational("1.25") == mpq_class(5, 4));
    CHECK(parse_rational("-0.5") == mpq_class(-1, 2));
    CHECK(pow_int(parse_rational("3/2"), 3) == mpq_class(27, 8));
    CHECK_THROWS_AS(parse_rational("x"), config_error);
}

TEST_CASE("escalation resolves marginal signs and reports hard failures", "[core]") {
    mpq_class third(1, 3);
    mpq_class delta = mpq_class(1, mpz_class("1606938044258990275541962092341162602522202993782792835301376")); // 2^-200
    mpq_class shifted = third + delta;

    RealCtx budget(64, 4096);
    Sign s = with_escalation(budget, [&](const RealCtx &ctx) {
        BigReal a(third, ctx);
        BigReal b(shifted, ctx);
        Sign sig = sub(b, a, ctx).sign();
        if (sig == Sign::zero_indeterminate)
            throw escalation_request{"third vs shifted"};
        return sig;
    });
    CHECK(s == Sign::positive);

    // exactly equal values can never be separated: must hit the cap
    RealCtx small(64, 256);
    auto hopeless = [&](const RealCtx &ctx) {
        BigReal a(third, ctx);
        BigReal b = div(BigReal(1, ctx), BigReal(3, ctx), ctx);
        Sign sig = sub(b, a, ctx).sign();
        if (sig == Sign::zero_indeterminate)
            throw escalation_request{"1/3 vs 1/3"};
        return sig;
    };
    CHECK_THROWS_AS(with_escalation(small, hopeless), precision_error);
}
