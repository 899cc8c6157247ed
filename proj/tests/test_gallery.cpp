#include <catch2/catch_amalgamated.hpp>

#include "diophant/forms.hpp"
#include "diophant/gallery.hpp"

using namespace diophant;

TEST_CASE("builtin gallery entries", "[gallery]") {
    auto g = builtin_gallery();
    REQUIRE(g.size() == 5);
    CHECK(gallery_lookup("cbrt2").spec_text == "cbrt:2");
    CHECK(gallery_lookup("fib_cf_40").spec_text == "cf-fib:40");
    CHECK(gallery_lookup("rand_1").spec_text == "rand:1");
    CHECK_THROWS_AS(gallery_lookup("nope"), config_error);

    // names unique, specs round-trip through the grammar
    for (const auto &e : g) {
        size_t count = 0;
        for (const auto &o : g)
            count += (o.name == e.name);
        REQUIRE(count == 1);
        ThetaSpec s = ThetaSpec::parse(e.spec_text);
        CHECK(s.text() == e.spec_text);
    }
}

TEST_CASE("gallery: prefix resolution", "[gallery]") {
    CHECK(resolve_theta_text("gallery:fib_cf_40") == "cf-fib:40");
    CHECK(resolve_theta_text("cbrt:2") == "cbrt:2");
    CHECK_THROWS_AS(resolve_theta_text("gallery:unknown"), config_error);
}

TEST_CASE("limit expectations carry provenance", "[gallery]") {
    auto fib = gallery_lookup("fib_cf_40");
    bool has_limit = false, has_band = false;
    for (const auto &e : fib.expected) {
        has_limit = has_limit || e.is_limit;
        has_band = has_band || !e.is_limit;
    }
    CHECK(has_limit);
    CHECK(has_band);
}

TEST_CASE("every gallery theta passes the relation refuter", "[gallery]") {
    RealCtx ctx(256);
    for (const auto &e : builtin_gallery()) {
        INFO(e.name);
        auto fs = FormSet::theorem2(std::make_shared<ThetaValue>(e.spec_text));
        CHECK(fs.refute_independence(ctx, 8).empty());
    }
}

TEST_CASE("gallery regeneration is bit-identical", "[gallery]") {
    RealCtx ctx(256);
    for (const auto &e : builtin_gallery()) {
        ThetaValue a(e.spec_text), b(e.spec_text);
        BigReal va = a.eval(ctx), vb = b.eval(ctx);
        REQUIRE(mpfr_equal_p(va.mid(), vb.mid()));
        REQUIRE(mpfr_equal_p(va.rad(), vb.rad()));
    }
}
