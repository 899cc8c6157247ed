#include <catch2/catch_amalgamated.hpp>

#include <memory>

#include "diophant/minimal_points.hpp"

using namespace diophant;

namespace {

std::shared_ptr<const FormSet> t2(const std::string &theta_text) {
    return std::make_shared<const FormSet>(
        FormSet::theorem2(std::make_shared<ThetaValue>(theta_text)));
}

void check_same_records(const MinimalSequence &a, const MinimalSequence &b) {
    REQUIRE(a.records.size() == b.records.size());
    for (size_t i = 0; i < a.records.size(); ++i) {
        INFO("record " << i + 1);
        REQUIRE(a.records[i].x == b.records[i].x);
        REQUIRE(a.records[i].norm_key == b.records[i].norm_key);
    }
}

} // namespace

TEST_CASE("cbrt2 lowest heights by hand", "[minimal]") {
    RealCtx ctx(256);
    auto fs = t2("cbrt:2");

    // T = 1: the six unit vectors; |L| is minimized at +-e0 since theta > 1
    MinimalSequence s1 = enumerate_minimal_points(fs, NormKind::euclid, 1, ctx);
    REQUIRE(s1.records.size() == 1);
    CHECK(s1.records[0].x == IntVec(1, 0, 0));
    CHECK(contains_exact(s1.records[0].L_val, mpq_class(1)));

    // T = 2: second record is (-1, 1, 0) with L = 2^(1/3) - 1
    MinimalSequence s2 = enumerate_minimal_points(fs, NormKind::euclid, 2, ctx);
    REQUIRE(s2.records.size() == 2);
    CHECK(s2.records[1].x == IntVec(-1, 1, 0));
    CHECK(s2.records[1].L_val.lower_double() > 0.2599);
    CHECK(s2.records[1].L_val.upper_double() < 0.25993);
}

TEST_CASE("oracle and scanner agree record-for-record", "[minimal]") {
    RealCtx ctx(256);
    for (const char *theta : {"cbrt:2", "rand:1", "cf-fib:40"}) {
        auto fs = t2(theta);
        for (long T : {10L, 60L, 200L}) {
            INFO("theta " << theta << " T " << T);
            MinimalSequence fast = enumerate_minimal_points(fs, NormKind::euclid, T, ctx);
            MinimalSequence slow = brute_force_oracle(fs, NormKind::euclid, T, ctx);
            check_same_records(fast, slow);
            MinimalSequence fast_sup = enumerate_minimal_points(fs, NormKind::sup, T, ctx);
            MinimalSequence slow_sup = brute_force_oracle(fs, NormKind::sup, T, ctx);
            check_same_records(fast_sup, slow_sup);
        }
    }
}

TEST_CASE("worker count does not change output", "[minimal]") {
    RealCtx ctx(256);
    auto fs = t2("cbrt:2");
    MinimalSequence w1 = enumerate_minimal_points(fs, NormKind::euclid, 400, ctx, 1);
    MinimalSequence w4 = enumerate_minimal_points(fs, NormKind::euclid, 400, ctx, 4);
    check_same_records(w1, w4);
}

TEST_CASE("sequence invariants: monotone, primitive, neighbor independence", "[minimal]") {
    RealCtx ctx(256);
    for (const char *theta : {"cbrt:2", "rand:2", "cf-fib:40"}) {
        INFO("theta " << theta);
        MinimalSequence s = enumerate_minimal_points(t2(theta), NormKind::euclid, 2000, ctx);
        REQUIRE(s.records.size() >= 4);
        CHECK_FALSE(s.diag.relation_found);
        for (size_t i = 0; i < s.records.size(); ++i) {
            const auto &r = s.records[i];
            REQUIRE(r.x.is_primitive());
            REQUIRE(r.L_val.sign() == Sign::positive);
            if (i > 0) {
                REQUIRE(s.records[i - 1].norm_key < r.norm_key);
                // L strictly decreasing, certified
                Sign d = sub(s.records[i - 1].L_val, r.L_val, ctx).sign();
                REQUIRE(d == Sign::positive);
                // consecutive minimal points are linearly independent
                REQUIRE_FALSE(s.records[i - 1].x.cross(r.x).is_zero());
            }
        }
    }
}

TEST_CASE("sup and euclid sequences interleave consistently", "[minimal]") {
    RealCtx ctx(256);
    auto fs = t2("cbrt:2");
    MinimalSequence se = enumerate_minimal_points(fs, NormKind::euclid, 150, ctx);
    MinimalSequence ss = enumerate_minimal_points(fs, NormKind::sup, 150, ctx);
    REQUIRE(se.records.size() >= 3);
    REQUIRE(ss.records.size() >= 3);
    for (const auto &r : ss.records) {
        mpz_class r_euclid_sq = r.x.euclid_sq();
        const MinimalPointRecord *last = nullptr;
        for (const auto &e : se.records)
            if (e.norm_key <= r_euclid_sq)
                last = &e;
        if (!last)
            continue;
        // the sup-norm record lies inside the euclid ball, so its |L| cannot
        // certifiably undercut the euclid running minimum there
        REQUIRE(abs_enclosure(r.L_val).upper_double() >= last->L_val.lower_double());
    }
}

TEST_CASE("degenerate rational theta: tie diagnostics and relation cutoff", "[minimal]") {
    RealCtx ctx(128);
    // general mode with theta1 = theta2 = 0.3: L = (1, 0.3, 0.3)
    auto fs = std::make_shared<const FormSet>(
        FormSet::general(std::make_shared<ThetaValue>("dec:0.3"),
                         std::make_shared<ThetaValue>("dec:0.3"),
                         {mpq_class(0), mpq_class(1), mpq_class(0)}));
    MinimalSequence s = enumerate_minimal_points(fs, NormKind::euclid, 10, ctx);
    // (0,1,0) and (0,0,1) tie exactly at height 1: lex-smallest kept
    REQUIRE(s.records.size() == 1);
    CHECK(s.records[0].x == IntVec(0, 0, 1));
    CHECK(s.diag.tie_count >= 1);
    // L(0,1,-1) = 0 exactly: relation ends the sequence
    CHECK(s.diag.relation_found);
    REQUIRE(s.diag.relation.has_value());
    IntVec rel = *s.diag.relation;
    CHECK(fs->exact()->eval_L(rel) == 0);
}

TEST_CASE("sii ratios on a computed sequence", "[minimal]") {
    RealCtx ctx(256);
    MinimalSequence s = enumerate_minimal_points(t2("cbrt:2"), NormKind::euclid, 2000, ctx);
    auto ratios = sii_ratios(s);
    REQUIRE(ratios.size() == s.records.size() - 1);
    // gamma_1 = -log(1)/log X_2 = 0 for the (1,0,0) head record
    CHECK(ratios[0].second == Catch::Approx(0.0).margin(1e-12));
    // later ratios hover around 2 for a cubic irrational
    for (size_t j = 3; j < ratios.size(); ++j) {
        CHECK(ratios[j].second > 1.0);
        CHECK(ratios[j].second < 3.5);
    }
    MinimalSequence tiny;
    tiny.records.resize(1);
    CHECK_THROWS_AS(sii_ratios(tiny), insufficient_data_error);
}
