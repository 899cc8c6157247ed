#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <random>

#include "diophant/ledger.hpp"

using namespace diophant;

namespace {
LedgerScalar q(const char *text) { return parse_rational(text); }
} // namespace

TEST_CASE("lemma4 threshold", "[ledger]") {
    CHECK(lemma4_threshold(q("5/2")) == q("19/4"));
    CHECK(lemma4_threshold(q("3")) == q("7"));
    CHECK_THROWS_AS(lemma4_threshold(q("2")), hypothesis_error);
    CHECK_THROWS_AS(lemma4_threshold(q("3/2")), hypothesis_error);
}

TEST_CASE("beta_step fixed points and iteration", "[ledger]") {
    LedgerParams p1(q("5/2"), q("19/4"), q("6"));
    CHECK(beta_step(p1, q("15/4")) == q("15/4")); // alpha(alpha-1) at critical r
    CHECK(beta_step(p1, q("6")) == q("21/4"));

    LedgerParams p2(q("3"), q("7"), q("6"));
    CHECK(beta_step(p2, q("6")) == q("6")); // 7 - 4 + 3

    CHECK_THROWS_AS(LedgerParams(q("2"), q("1"), q("1")), hypothesis_error);
    CHECK_THROWS_AS(LedgerParams(q("5/2"), q("-1"), q("1")), config_error);
}

TEST_CASE("beta fixed point closed expression", "[ledger]") {
    CHECK(beta_fixed_point(LedgerParams(q("5/2"), q("19/4"), q("6"))) == q("15/4"));
    CHECK(beta_fixed_point(LedgerParams(q("5/2"), q("4"), q("6"))) == q("3/2"));
    CHECK(beta_fixed_point(LedgerParams(q("3"), q("7"), q("6"))) == q("6"));
    // stability under beta_step
    LedgerParams p(q("5/2"), q("4"), q("6"));
    CHECK(beta_step(p, beta_fixed_point(p)) == beta_fixed_point(p));
}

TEST_CASE("closed form matches iteration at critical r", "[ledger]") {
    LedgerParams p(q("5/2"), q("19/4"), q("6"));
    CHECK(beta_closed_form(p, 1) == beta_step(p, p.beta0));
    CHECK(beta_closed_form(p, 1) == q("21/4"));

    LedgerParams fixed(q("5/2"), q("19/4"), q("15/4"));
    for (unsigned long i : {0ul, 1ul, 5ul, 20ul})
        CHECK(beta_closed_form(fixed, i) == q("15/4"));

    LedgerParams p3(q("3"), q("7"), q("10"));
    CHECK(beta_closed_form(p3, 2) == q("7")); // 7-4+10/2=8, then 7-4+8/2=7

    // closed form equals i-fold iteration for i <= 64, several seeds
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<long> num(1, 40);
    for (const char *alpha : {"21/10", "5/2", "3", "7/2"}) {
        LedgerScalar a = q(alpha);
        LedgerScalar rc = lemma4_threshold(a);
        for (int rep = 0; rep < 5; ++rep) {
            LedgerScalar beta0 = a * (a - 1) + LedgerScalar(num(rng), 7);
            beta0.canonicalize();
            LedgerParams p4(a, rc, beta0);
            LedgerScalar b = beta0;
            for (unsigned long i = 0; i <= 64; ++i) {
                REQUIRE(beta_closed_form(p4, i) == b);
                b = beta_step(p4, b);
            }
        }
    }

    LedgerParams off(q("5/2"), q("9/2"), q("6"));
    CHECK_THROWS_AS(beta_closed_form(off, 1), config_error);
}

TEST_CASE("itog1 bound closes the mechanism", "[ledger]") {
    CHECK(itog1_bound(q("5/2"), q("15/4")) == q("19/4"));
    CHECK(itog1_bound(q("3"), q("6")) == q("7"));
    CHECK(itog1_bound(q("3"), q("12")) == q("4"));
    // itog1_bound(alpha, alpha(alpha-1)) = alpha^2 - alpha + 1 on a grid
    for (const char *alpha : {"21/10", "5/2", "3", "7/2", "4"}) {
        LedgerScalar a = q(alpha);
        REQUIRE(itog1_bound(a, a * (a - 1)) == lemma4_threshold(a));
    }
}

TEST_CASE("contraction is exact with factor 1/(alpha-1)", "[ledger]") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<long> num(-30, 30);
    for (const char *alpha : {"21/10", "5/2", "3", "7/2"}) {
        LedgerScalar a = q(alpha);
        LedgerScalar rc = lemma4_threshold(a) - LedgerScalar(1, 5);
        rc.canonicalize();
        LedgerParams p(a, rc, a * (a - 1) + 1);
        LedgerScalar fp = beta_fixed_point(p);
        for (int rep = 0; rep < 20; ++rep) {
            LedgerScalar beta(num(rng), 9);
            beta.canonicalize();
            LedgerScalar next = beta_step(p, beta);
            REQUIRE((next - fp) * (a - 1) == beta - fp);
            if (beta > fp)
                REQUIRE((next < beta && next > fp));
        }
    }
}

TEST_CASE("contradiction traces from the proof of Theorem 1", "[ledger]") {
    // alpha = 5/2, r = 9/2 < 19/4: fixed point 3, bound -> 21/4 > 9/2
    LedgerParams p1(q("5/2"), q("9/2"), q("6"));
    ContradictionTrace t1 = contradiction_trace(p1, 50);
    CHECK(t1.fixed_point == q("3"));
    REQUIRE(t1.contradiction_at.has_value());
    CHECK(*t1.contradiction_at <= 50);
    CHECK(t1.monotone_decreasing);
    // exact distance after 50 contractions: |beta0 - beta*| (2/3)^50 = 2^50/3^49
    LedgerScalar err = abs(t1.beta.back() - t1.fixed_point);
    LedgerScalar expect = (q("6") - q("3")) * pow_int(q("2/3"), 50);
    CHECK(err == expect);
    CHECK(err < LedgerScalar(1, 100000000L)); // ~4.7e-9
    // the bound at the detection index really exceeds r
    CHECK(t1.itog1[*t1.contradiction_at] > p1.r);

    // alpha = 3, r = 6: fixed point 4, bound -> 8 > 6
    LedgerParams p2(q("3"), q("6"), q("8"));
    ContradictionTrace t2 = contradiction_trace(p2, 50);
    CHECK(t2.fixed_point == q("4"));
    REQUIRE(t2.contradiction_at.has_value());

    // beta0 = alpha(alpha-1): detection immediately at w = 0
    LedgerParams p3(q("5/2"), q("9/2"), q("15/4"));
    ContradictionTrace t3 = contradiction_trace(p3, 0);
    REQUIRE(t3.contradiction_at.has_value());
    CHECK(*t3.contradiction_at == 0);

    // violated preconditions are parameter errors
    CHECK_THROWS_AS(contradiction_trace(LedgerParams(q("5/2"), q("19/4"), q("6")), 5),
                    config_error); // r not < threshold
    CHECK_THROWS_AS(contradiction_trace(LedgerParams(q("5/2"), q("9/2"), q("1")), 5),
                    config_error); // beta0 below alpha(alpha-1)
}

TEST_CASE("per-index predicate evaluation on real data", "[ledger]") {
    auto fs = std::make_shared<const FormSet>(
        FormSet::theorem2(std::make_shared<ThetaValue>("cbrt:2")));
    MinimalSequence seq = enumerate_minimal_points(fs, NormKind::euclid, 800, RealCtx(256));
    LedgerParams p(q("5/2"), q("9/2"), q("6"));
    ContradictionTrace tr = contradiction_trace(p, 10, &seq);
    REQUIRE_FALSE(tr.predicates.empty());
    // with r = 9/2, |P| <= L X^r holds eventually (s_nu samples sit near 3)
    size_t holds = 0;
    for (const auto &row : tr.predicates)
        holds += row.r1 == PredicateState::holds;
    CHECK(holds >= tr.predicates.size() / 2);
}
