#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <random>

#include "diophant/structure.hpp"

using namespace diophant;

namespace {

MinimalPointRecord synth_record(size_t nu, IntVec x, const mpq_class &l, const mpq_class &p,
                                const mpq_class &f) {
    RealCtx ctx(128);
    MinimalPointRecord r;
    r.nu = nu;
    r.norm_key = x.euclid_sq();
    r.x = std::move(x);
    r.X = sqrt(BigReal(r.norm_key, ctx), ctx);
    r.L_val = BigReal(l, ctx);
    r.P_val = BigReal(p, ctx);
    r.F_val = BigReal(f, ctx);
    return r;
}

// records whose values are the coordinate forms L=x0, P=x1, F=x2
MinimalSequence coordinate_sequence(const std::vector<IntVec> &xs) {
    MinimalSequence s;
    s.precision_bits = 128;
    size_t nu = 1;
    for (const auto &x : xs)
        s.records.push_back(
            synth_record(nu++, x, mpq_class(x.x0), mpq_class(x.x1), mpq_class(x.x2)));
    return s;
}

MinimalSequence real_sequence(const std::string &theta, long T) {
    auto fs = std::make_shared<const FormSet>(
        FormSet::theorem2(std::make_shared<ThetaValue>(theta)));
    return enumerate_minimal_points(fs, NormKind::euclid, T, RealCtx(256));
}

} // namespace

TEST_CASE("classify: unit vectors independent, constructed recursion dependent", "[structure]") {
    MinimalSequence unit = coordinate_sequence({IntVec(1, 0, 0), IntVec(0, 1, 0), IntVec(0, 0, 1)});
    auto cls = classify_triples(unit);
    REQUIRE(cls.size() == 1);
    CHECK(cls[0].independent);
    CHECK(abs(cls[0].det3) == 1);
    CHECK_FALSE(cls[0].t.has_value());

    IntVec a(3, -1, 2), b(5, 2, -7);
    IntVec c = mpz_class(3) * b + a;
    MinimalSequence dep = coordinate_sequence({a, b, c});
    auto cls2 = classify_triples(dep);
    REQUIRE(cls2.size() == 1);
    CHECK_FALSE(cls2[0].independent);
    CHECK(cls2[0].det3 == 0);
    REQUIRE(cls2[0].t.has_value());
    CHECK(*cls2[0].t == 3);
}

TEST_CASE("segment_runs on synthetic shapes", "[structure]") {
    // all triples independent: every run degenerates to k = nu + 1
    MinimalSequence unit = coordinate_sequence(
        {IntVec(1, 0, 0), IntVec(0, 1, 0), IntVec(0, 0, 1), IntVec(1, 1, 1), IntVec(2, -1, 3)});
    auto cls = classify_triples(unit);
    bool all_indep = true;
    for (const auto &c : cls)
        all_indep = all_indep && c.independent;
    REQUIRE(all_indep);
    auto runs = segment_runs(unit, cls);
    for (const auto &r : runs)
        CHECK(r.k == r.nu + 1);

    // Fibonacci-style recursion between two independent boundary triples
    std::vector<IntVec> xs{IntVec(1, 0, 0), IntVec(0, 1, 0), IntVec(0, 0, 1)};
    for (int i = 0; i < 5; ++i) {
        IntVec next = xs[xs.size() - 1] + xs[xs.size() - 2];
        xs.push_back(next);
    }
    xs.push_back(IntVec(1, 2, 3) + xs.back()); // leaves the plane: independent end
    MinimalSequence fib = coordinate_sequence(xs);
    auto cls2 = classify_triples(fib);
    auto runs2 = segment_runs(fib, cls2);
    REQUIRE(runs2.size() == 1);
    CHECK(runs2[0].nu == 2);
    CHECK(runs2[0].k == xs.size() - 1);
}

TEST_CASE("delta on synthetic coordinate forms", "[structure]") {
    RealCtx ctx(128);
    MinimalSequence unit = coordinate_sequence({IntVec(1, 0, 0), IntVec(0, 1, 0), IntVec(0, 0, 1)});
    auto [dval, dz] = delta(unit, 2, ctx);
    CHECK(dz == 1);
    CHECK(contains_exact(dval, mpq_class(1)));
    // with coordinate forms, A = det of the identity = 1
    CHECK(delta_identity_holds(dval, BigReal(1, ctx), dz, ctx));

    // dependent triple: both the interval and the integer path see rank loss
    IntVec a(3, -1, 2), b(5, 2, -7);
    MinimalSequence dep = coordinate_sequence({a, b, mpz_class(3) * b + a});
    auto [dval2, dz2] = delta(dep, 2, ctx);
    CHECK(dz2 == 0);
    CHECK(dval2.contains_zero());
}

TEST_CASE("wronskian: exact rational replay of the recursion", "[structure]") {
    // |W| is conserved and the sign alternates under L_{j+1} = t L_j + L_{j-1}
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<long> ts(-9, 9);
    for (int rep = 0; rep < 50; ++rep) {
        mpq_class L0(ts(rng), 7), L1(ts(rng), 11);
        mpq_class P0(ts(rng), 5), P1(ts(rng), 13);
        L0.canonicalize();
        L1.canonicalize();
        P0.canonicalize();
        P1.canonicalize();
        mpq_class W = L0 * P1 - L1 * P0;
        if (W == 0)
            continue;
        for (int step = 0; step < 12; ++step) {
            mpq_class t(ts(rng));
            mpq_class L2 = t * L1 + L0;
            mpq_class P2 = t * P1 + P0;
            mpq_class W2 = L1 * P2 - L2 * P1;
            REQUIRE(W2 == -W);
            L0 = L1;
            L1 = L2;
            P0 = P1;
            P1 = P2;
            W = W2;
        }
    }
}

TEST_CASE("structure of a real cbrt2 sequence", "[structure]") {
    RealCtx ctx(256);
    MinimalSequence s = real_sequence("cbrt:2", 3000);
    REQUIRE(s.records.size() >= 8);
    auto cls = classify_triples(s);

    size_t indep = 0;
    for (const auto &c : cls)
        indep += c.independent;
    CHECK(indep >= 2); // Lemma 2 empirically

    // delta identity at every triple index; A = 1 for the Theorem-2 pair
    BigReal A = s.forms->A(ctx);
    for (const auto &c : cls) {
        auto [dval, dz] = delta(s, c.j, ctx);
        REQUIRE(dz == c.det3);
        REQUIRE(delta_identity_holds(dval, A, dz, ctx));
        if (!dval.contains_zero())
            REQUIRE(dz != 0); // certified-nonzero interval forces independence
        if (!c.independent)
            REQUIRE(dval.contains_zero());
    }

    // runs partition the interior and conserve |W| with alternating sign
    auto runs = segment_runs(s, cls);
    for (const auto &r : runs) {
        for (size_t j = r.nu + 1; j + 1 <= r.k; ++j) {
            BigReal wj = wronskian(s, j, ctx);
            BigReal wp = wronskian(s, j - 1, ctx);
            REQUIRE(add(wj, wp, ctx).contains_zero()); // W_j = -W_{j-1}
            if (!wj.contains_zero() && !wp.contains_zero())
                REQUIRE(wj.definitely_positive() == wp.definitely_negative());
        }
        BigReal wa = abs_enclosure(wronskian(s, r.nu, ctx));
        BigReal wb = abs_enclosure(wronskian(s, r.k - 1, ctx));
        REQUIRE(sub(wa, wb, ctx).contains_zero());
    }

    auto jr = jarnik_report(s, cls);
    for (const auto &row : jr)
        CHECK(row.growth >= 1.0);
}

TEST_CASE("jarnik ratios on a constructed geometric sequence", "[structure]") {
    // X_j = 2^(2^j), L_j = X_{j+1}^(-2): growth 2, decay 4 at every j
    RealCtx ctx(128);
    MinimalSequence s;
    s.precision_bits = 128;
    std::vector<IntVec> xs{IntVec(1, 0, 0), IntVec(0, 1, 0), IntVec(0, 0, 1), IntVec(1, 1, 0),
                           IntVec(1, 0, 1), IntVec(0, 1, 1), IntVec(1, 1, 1), IntVec(2, 1, 1)};
    for (size_t j = 0; j < xs.size(); ++j) {
        MinimalPointRecord r;
        r.nu = j + 1;
        r.x = xs[j];
        r.norm_key = xs[j].euclid_sq();
        long p2 = 1L << (j + 1); // 2^(j+1)
        r.X = mul_2exp(BigReal(1, ctx), p2);
        r.L_val = mul_2exp(BigReal(1, ctx), -4 * p2); // X_{j+1}^{-2} = 2^{-2*2^{j+2}}... see below
        r.P_val = BigReal(1, ctx);
        r.F_val = BigReal(1, ctx);
        s.records.push_back(std::move(r));
    }
    // fix L: L_j = X_{j+1}^{-2} with X_{j+1} = 2^(2^(j+2)) in 1-based nu terms
    for (size_t j = 0; j + 1 < s.records.size(); ++j) {
        long e = 1L << (j + 2);
        s.records[j].L_val = mul_2exp(BigReal(1, ctx), -2 * e);
    }
    std::vector<TripleClass> cls;
    for (size_t j = 2; j + 1 <= s.records.size(); ++j) {
        TripleClass c;
        c.j = j;
        c.independent = true;
        c.det3 = 1;
        cls.push_back(c);
    }
    auto jr = jarnik_report(s, cls, 3);
    REQUIRE_FALSE(jr.empty());
    for (const auto &row : jr) {
        CHECK(row.growth == Catch::Approx(2.0).epsilon(1e-9));
        CHECK(row.decay == Catch::Approx(4.0).epsilon(1e-9));
    }
}
