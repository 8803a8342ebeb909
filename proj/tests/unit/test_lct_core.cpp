#include <doctest.h>

#include <random>

#include "lct/errors.hpp"
#include "lct/lct_core.hpp"
#include "oracles.hpp"

using namespace lct;

namespace {

ExtRational q(std::int64_t n, std::int64_t d)
{
    return ExtRational(n, d);
}

// Keeps the terms of a separated sum of monomials with total degree <= k;
// nullptr if nothing survives.
SpecPtr truncate(const SpecPtr& spec, std::uint64_t k)
{
    if (const auto* m = std::get_if<PrincipalMonomial>(&spec->node)) {
        std::uint64_t degree = 0;
        for (auto e : m->exponents)
            degree += e;
        return degree <= k ? spec : nullptr;
    }
    const auto& s = std::get<SeparatedSum>(spec->node);
    auto l = truncate(s.left, k);
    auto r = truncate(s.right, k);
    if (l && r)
        return make_separated_sum(l, r);
    return l ? l : r;
}

}  // namespace

TEST_CASE("lct_from_resolution examples")
{
    CHECK(lct_from_resolution({{{0, 2, true}, {1, 3, true}}}) == q(1, 2));
    // blow-up of a point in the plane: codimension 2 gives exponent 2
    CHECK(lct_from_resolution({{{1, 1, true}}}) == ExtRational(2));
    for (std::uint64_t m = 1; m <= 9; ++m)
        CHECK(lct_from_resolution({{{0, m, true}}}) == q(1, static_cast<std::int64_t>(m)));
    CHECK(lct_from_resolution({{{5, 7, false}}}).is_infinite());
    // b = 0 never constrains
    CHECK(lct_from_resolution({{{4, 0, true}, {1, 1, true}}}) == ExtRational(2));
    CHECK(lct_from_resolution({{{4, 0, true}}}).is_infinite());
}

TEST_CASE("lct_from_resolution rejects bad data")
{
    CHECK_THROWS_AS(lct_from_resolution({}), InvalidInput);
    CHECK_THROWS_AS(lct_from_resolution({{{0, 0, true}}}), InvalidInput);
}

TEST_CASE("resolution JSON")
{
    const auto data = load_resolution_json(LCT_TEST_DATA_DIR "/mixed.json");
    REQUIRE(data.divisors.size() == 4);
    CHECK(data.divisors[2] == DivisorRecord{4, 0, true});
    CHECK(lct_from_resolution(data) == q(1, 2));
    CHECK(lct_from_resolution(load_resolution_json(LCT_TEST_DATA_DIR "/blowup_point.json")) == ExtRational(2));

    CHECK_THROWS_AS(parse_resolution_json("{"), InvalidInput);
    CHECK_THROWS_AS(parse_resolution_json(R"({"divisors":[]})"), InvalidInput);
    CHECK_THROWS_AS(parse_resolution_json(R"({"divisors":[{"a":-1,"b":2,"meets_k":true}]})"), InvalidInput);
    CHECK_THROWS_AS(parse_resolution_json(R"({"divisors":[{"a":1,"b":2}]})"), InvalidInput);
    CHECK_THROWS_AS(parse_resolution_json(R"({"items":[]})"), InvalidInput);
    CHECK_THROWS_AS(load_resolution_json("/nonexistent/file.json"), InvalidInput);
}

TEST_CASE("resolution minimum matches a naive cross-multiplication scan")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const auto data = testing::random_resolution(rng);
        const auto expected = testing::naive_resolution_min(data);
        const auto got = lct_from_resolution(data);
        if (!expected) {
            CHECK(got.is_infinite());
        } else {
            REQUIRE(got.is_finite());
            const Rational e(BigInt(static_cast<std::uint64_t>(expected->first)),
                             BigInt(static_cast<std::uint64_t>(expected->second)));
            CHECK(got.value() == e);
        }
    }
}

TEST_CASE("lct_monomial examples")
{
    CHECK(lct_monomial(*parse_spec("diag:2,3")) == q(5, 6));
    CHECK(lct_monomial(*parse_spec("mono:3,2")) == q(1, 3));
    CHECK(lct_monomial(*parse_spec("ssum(mono:2;mono:2)")) == ExtRational(1));
    CHECK(lct_monomial(*parse_spec("dsum(diag:2;diag:3)")) == q(5, 6));
    CHECK(lct_monomial(*parse_spec("mono:0,4,1")) == q(1, 4));
    CHECK(lct_monomial(*parse_spec("ssum(mono:3;mono:3)")) == q(2, 3));
    CHECK(lct_monomial(*parse_spec("diag:1,1,1")) == ExtRational(3));
}

TEST_CASE("spec parser")
{
    CHECK(parse_spec("dsum(mono:1,2;ssum(mono:2;diag:3))")->str() == "dsum(mono:1,2;ssum(mono:2;diag:3))");
    CHECK(parse_spec("dsum(mono:1,2;diag:3,4)")->variable_count() == 4);

    CHECK_THROWS_WITH_AS(parse_spec("diag:0,3"), doctest::Contains("order must be >= 1"), InvalidInput);
    CHECK_THROWS_WITH_AS(parse_spec("mono:0,0"), doctest::Contains("positive exponent"), InvalidInput);
    CHECK_THROWS_AS(parse_spec("mono:"), InvalidInput);
    CHECK_THROWS_AS(parse_spec("mono:1,"), InvalidInput);
    CHECK_THROWS_AS(parse_spec("poly:1"), InvalidInput);
    CHECK_THROWS_AS(parse_spec("dsum(mono:1;mono:2"), InvalidInput);
    CHECK_THROWS_AS(parse_spec("dsum(mono:1,mono:2)"), InvalidInput);
    CHECK_THROWS_AS(parse_spec("mono:1 "), InvalidInput);
    CHECK_THROWS_AS(parse_spec("mono:99999999999999999999"), InvalidInput);
    CHECK_THROWS_WITH_AS(parse_spec("ssum(diag:2,3;mono:1)"), doctest::Contains("single functions"), InvalidInput);
}

TEST_CASE("str and parse_spec round-trip on random specs")
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        const auto spec = testing::random_spec(rng);
        const auto again = parse_spec(spec->str());
        CHECK(again->str() == spec->str());
        CHECK(lct_monomial(*again) == lct_monomial(*spec));
    }
}

TEST_CASE("separated sum of z^m and w^p agrees with the diagonal ideal capped at 1")
{
    // c_0(alpha z^m + beta w^p) is the same for every nonzero alpha, beta and
    // equals min(1, c_0(z^m, w^p)).
    for (std::uint64_t m = 1; m <= 12; ++m)
        for (std::uint64_t p = 1; p <= 12; ++p) {
            const auto sum = lct_monomial(*make_separated_sum(make_monomial({m}), make_monomial({p})));
            const auto ideal = lct_monomial(*make_diagonal({m, p}));
            CHECK(sum == min(ExtRational(1), ideal));
        }
}

TEST_CASE("codimension cap for diagonal ideals")
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
        const std::size_t p = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        auto orders = testing::random_orders(rng, p, 4);
        const auto c = lct_monomial(*make_diagonal(orders));
        const bool all_one = std::all_of(orders.begin(), orders.end(), [](auto m) { return m == 1; });
        CHECK(c <= ExtRational(static_cast<std::int64_t>(p)));
        CHECK((c == ExtRational(static_cast<std::int64_t>(p))) == all_one);
    }
}

TEST_CASE("arnold_multiplicity")
{
    CHECK(arnold_multiplicity(q(5, 6)) == q(6, 5));
    CHECK(arnold_multiplicity(ExtRational(0)).is_infinite());
    CHECK(arnold_multiplicity(ExtRational::infinity()) == ExtRational(0));
    CHECK_THROWS_AS(arnold_multiplicity(q(-1, 2)), InvalidInput);
}

TEST_CASE("scale_arnold")
{
    CHECK(scale_arnold(q(6, 5), 2) == q(12, 5));
    CHECK(scale_arnold(q(7, 3), 1) == q(7, 3));
    // lambda(I^3) = 3 lambda(I) for I = (z1^2, z2^3)
    const auto lambda = arnold_multiplicity(lct_monomial(*parse_spec("diag:2,3")));
    CHECK(scale_arnold(lambda, 3) == q(18, 5));
    CHECK(arnold_multiplicity(lct_monomial(*parse_spec("diag:6,9"))) == q(18, 5));
    CHECK(scale_arnold(ExtRational::infinity(), 0) == ExtRational(0));
    CHECK(scale_arnold(ExtRational::infinity(), 2).is_infinite());
    CHECK_THROWS_AS(scale_arnold(q(1, 2), -1), InvalidInput);
}

TEST_CASE("truncation_gap_bound")
{
    CHECK(truncation_gap_bound(2, 3) == q(1, 2));
    CHECK(truncation_gap_bound(1, 0) == ExtRational(1));
    CHECK_THROWS_AS(truncation_gap_bound(0, 3), InvalidInput);

    // z1^2 z2 has degree 3; every truncation with k >= 3 is f itself
    const auto f = parse_spec("mono:2,1");
    for (std::uint64_t k = 3; k < 10; ++k) {
        const auto pk = truncate(f, k);
        REQUIRE(pk);
        const ExtRational gap(lct_monomial(*f).value() - lct_monomial(*pk).value());
        CHECK(gap == ExtRational(0));
        CHECK(gap <= truncation_gap_bound(2, k));
    }

    // z1^2 + z2^5: dropping z2^5 moves the exponent from 7/10 to 1/2
    const auto g = parse_spec("ssum(mono:2;mono:5)");
    for (std::uint64_t k = 2; k < 8; ++k) {
        const auto pk = truncate(g, k);
        REQUIRE(pk);
        Rational gap = lct_monomial(*g).value() - lct_monomial(*pk).value();
        if (gap < 0)
            gap = -gap;
        CHECK(ExtRational(gap) <= truncation_gap_bound(2, k));
    }
}

TEST_CASE("lelong_sandwich")
{
    auto e = lelong_sandwich(3, 2);
    CHECK(e.lower == q(3, 2));
    CHECK(e.upper == ExtRational(3));
    e = lelong_sandwich(0, 5);
    CHECK(e.lower == ExtRational(0));
    CHECK(e.upper == ExtRational(0));
    CHECK_THROWS_AS(lelong_sandwich(-1, 2), InvalidInput);

    // z1^2 z2^2: nu = 4, lambda = 1/lct = 2 lies in [4/2, 4]
    const auto lambda = arnold_multiplicity(lct_monomial(*parse_spec("mono:2,2")));
    e = lelong_sandwich(4, 2);
    CHECK(lambda == ExtRational(2));
    CHECK(e.lower <= lambda);
    CHECK(lambda <= e.upper);
}

TEST_CASE("Arnold multiplicity of random monomials lies in the Lelong enclosure")
{
    std::mt19937_64 rng(17);
    for (int i = 0; i < 500; ++i) {
        const auto spec = testing::random_monomial(rng);
        const auto& e = std::get<PrincipalMonomial>(spec->node).exponents;
        std::uint64_t nu = 0;
        for (auto x : e)
            nu += x;
        const auto enclosure = lelong_sandwich(Rational(BigInt(nu)), e.size());
        const auto lambda = arnold_multiplicity(lct_monomial(*spec));
        CHECK(enclosure.lower <= lambda);
        CHECK(lambda <= enclosure.upper);
    }
}
