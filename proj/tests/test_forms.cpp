#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <random>

#include "diophant/forms.hpp"

using namespace diophant;

namespace {

std::shared_ptr<ThetaValue> theta(const std::string &text) {
    return std::make_shared<ThetaValue>(text);
}

mpq_class cbrt2_approx(long bits) {
    mpq_class lo = 1, hi = 2;
    for (long i = 0; i < bits; ++i) {
        mpq_class m = (lo + hi) / 2;
        if (m * m * m < 2)
            lo = m;
        else
            hi = m;
    }
    return lo;
}

} // namespace

TEST_CASE("eval_form basics", "[forms]") {
    RealCtx ctx(192);
    auto fs = FormSet::theorem2(theta("cbrt:2"));
    LinearForm L = fs.L(ctx);

    // only c0 contributes
    BigReal v = eval_form(L, IntVec(1, 0, 0), ctx);
    CHECK(v.is_exact());
    CHECK(contains_exact(v, mpq_class(1)));

    // 2^(1/3) - 1, against an independent bisection of x^3 - 2
    BigReal w = eval_form(L, IntVec(-1, 1, 0), ctx);
    mpq_class ref = cbrt2_approx(200) - 1;
    CHECK(contains_exact(widen_2exp(w, -190), ref));
    CHECK(w.lower_double() > 0.2598);
    CHECK(w.upper_double() < 0.26);

    // P at (0,0,1) is 2 * 2^(1/3)
    BigReal p = eval_form(fs.P(ctx), IntVec(0, 0, 1), ctx);
    mpq_class ref2 = 2 * cbrt2_approx(200);
    CHECK(contains_exact(widen_2exp(p, -190), ref2));
}

TEST_CASE("eval_form additivity on random integer vectors", "[forms]") {
    RealCtx ctx(128);
    auto fs = FormSet::theorem2(theta("rand:7"));
    LinearForm L = fs.L(ctx);
    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<long> d(-50, 50);
    for (int i = 0; i < 100; ++i) {
        IntVec x(d(rng), d(rng), d(rng));
        IntVec y(d(rng), d(rng), d(rng));
        BigReal lhs = eval_form(L, x + y, ctx);
        BigReal rhs = add(eval_form(L, x, ctx), eval_form(L, y, ctx), ctx);
        // two enclosures of the same exact number must overlap
        BigReal diff = sub(lhs, rhs, ctx);
        REQUIRE(diff.sign() == Sign::zero_indeterminate);
    }
}

TEST_CASE("coefficient determinant values", "[forms]") {
    RealCtx ctx(192);
    auto fs = FormSet::theorem2(theta("cbrt:2"));
    LinearForm L = fs.L(ctx);
    LinearForm P = fs.P(ctx);

    // triangular structure gives exactly 1
    BigReal d1 = coefficient_det(L, P, LinearForm::unit(2, ctx), ctx);
    CHECK(d1.is_exact());
    CHECK(contains_exact(d1, mpq_class(1)));

    // proportional rows give exactly 0 (scaled L as "P")
    LinearForm twoL{mul(BigReal(2L, ctx), L.c0, ctx), mul(BigReal(2L, ctx), L.c1, ctx),
                    mul(BigReal(2L, ctx), L.c2, ctx)};
    BigReal d0 = coefficient_det(L, twoL, LinearForm::unit(1, ctx), ctx);
    CHECK(d0.contains_zero());

    // det(L, P, e1) = -2 cbrt(2): symbolic expansion reference
    BigReal d2 = coefficient_det(L, P, LinearForm::unit(1, ctx), ctx);
    mpq_class ref = -2 * cbrt2_approx(200);
    CHECK(contains_exact(widen_2exp(d2, -180), ref));

    // antisymmetry under swapping two forms
    BigReal d3 = coefficient_det(P, L, LinearForm::unit(1, ctx), ctx);
    BigReal s = add(d2, d3, ctx);
    CHECK(s.contains_zero());
}

TEST_CASE("default F picks the first independent unit form", "[forms]") {
    RealCtx ctx(128);

    // theorem-2 pair: det with e2 is exactly 1
    auto fs = FormSet::theorem2(theta("cbrt:2"));
    CHECK(fs.f_axis(ctx) == 2);
    BigReal a = fs.A(ctx);
    CHECK(a.is_exact());
    CHECK(contains_exact(a, mpq_class(1)));

    // L = (1, 0, theta), P = (0, 1, 0): e2 works (det = 1 after expansion)
    auto g1 = FormSet::general(theta("dec:0"), theta("cbrt:2"),
                               {mpq_class(0), mpq_class(1), mpq_class(0)});
    CHECK(g1.f_axis(ctx) == 2);

    // L = (1, theta, theta'), P = (0, 0, 1): det with e2 is structurally 0,
    // so the chooser must fall through to e1
    auto g2 = FormSet::general(theta("cbrt:2"), theta("poly:[-4,0,0,1]@0"),
                               {mpq_class(0), mpq_class(0), mpq_class(1)});
    CHECK(g2.f_axis(ctx) == 1);
}

TEST_CASE("theorem-2 P is the formal derivative of L in theta", "[forms]") {
    RealCtx ctx(128);
    auto fs = FormSet::theorem2(theta("cbrt:2"));
    BigReal t = fs.theta1()->eval(ctx);
    LinearForm P = fs.P(ctx);
    // derivative of (1, y, y^2) coefficient pattern at y = theta: (0, 1, 2 theta)
    CHECK(P.c0.is_exact_zero());
    CHECK(contains_exact(P.c1, mpq_class(1)));
    BigReal expect = mul(BigReal(2L, ctx), t, ctx);
    CHECK(sub(P.c2, expect, ctx).contains_zero());
}

TEST_CASE("exact rational form path", "[forms]") {
    auto fs = FormSet::theorem2(theta("dec:0.5"));
    auto ef = fs.exact();
    REQUIRE(ef.has_value());
    CHECK(ef->L[2] == mpq_class(1, 4));
    CHECK(ef->P[2] == mpq_class(1));
    CHECK(ef->eval_L(IntVec(1, -2, 0)) == 0); // 1 - 2*(1/2): exact relation
    CHECK(ef->eval_P(IntVec(0, 1, 0)) == 1);

    auto irr = FormSet::theorem2(theta("cbrt:2"));
    CHECK_FALSE(irr.exact().has_value());
}

TEST_CASE("integer relation refuter", "[forms]") {
    RealCtx ctx(256);

    // sqrt(2) as theta: theta^2 - 2 = 0 is a small exact relation
    auto quad = FormSet::theorem2(theta("poly:[-2,0,1]@1"));
    auto hits = quad.refute_independence(ctx, 8);
    REQUIRE_FALSE(hits.empty());
    bool found = false;
    for (const auto &m : hits)
        found = found || (m == IntVec(2, 0, -1) || m == IntVec(-2, 0, 1));
    CHECK(found);

    // dec:0.5 has the relation 1 - 2 theta = 0
    auto half = FormSet::theorem2(theta("dec:0.5"));
    auto hits2 = half.refute_independence(ctx, 8);
    REQUIRE_FALSE(hits2.empty());

    // cbrt(2) passes (no small relation exists for a cubic irrational)
    auto good = FormSet::theorem2(theta("cbrt:2"));
    CHECK(good.refute_independence(ctx, 8).empty());
}
