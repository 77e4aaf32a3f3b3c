#include <doctest.h>

#include <random>

#include "nsctl/bell.hpp"
#include "nsctl/catalog.hpp"
#include "nsctl/polytope.hpp"
#include "test_util.hpp"

using namespace nsctl;

namespace {

// Independent oracle: expand the correlator sum term by term over all 16
// outcome/context combinations.
Rational chsh_oracle(const Strategy& s, const ChshVariant& v) {
    Rational total = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) {
                    int sign = v.sign(a, b) * ((x + y) % 2 ? -1 : 1);
                    total += s.at(a, b, x, y) * sign;
                }
    return total;
}

}  // namespace

TEST_CASE("correlators of binary2") {
    auto s = get_example("binary2").strategy;
    CHECK(correlator(s, 0, 0) == Rational(1, 3));
    CHECK(correlator(s, 0, 1) == 1);
    CHECK(correlator(s, 1, 0) == Rational(1, 3));
    CHECK(correlator(s, 1, 1) == -1);
}

TEST_CASE("chsh_value of binary2 on the classic variant is 8/3") {
    auto s = get_example("binary2").strategy;
    CHECK(chsh_value(s, ChshVariant{0, 0, 0}) == Rational(8, 3));
    CHECK(chsh_oracle(s, ChshVariant{0, 0, 0}) == Rational(8, 3));
}

TEST_CASE("chsh_value of the PR box is 4") {
    auto pr = get_example("pr-box").strategy;
    CHECK(chsh_value(pr, ChshVariant{0, 0, 0}) == 4);
    CHECK(chsh_oracle(pr, ChshVariant{0, 0, 0}) == 4);
}

TEST_CASE("chsh_value of the all-zeros point mass is 2") {
    Alphabets al{2, 2, 2, 2};
    auto s = induce_deterministic(al, {{0, 0}, {0, 0}});
    CHECK(chsh_value(s, ChshVariant{0, 0, 0}) == 2);
}

TEST_CASE("non-binary strategies are rejected") {
    auto s = get_example("ab3").strategy;
    CHECK_THROWS_AS(correlator(s, 0, 0), NotBinary);
    CHECK_THROWS_AS(chsh_value(s, ChshVariant{}), NotBinary);
    CHECK_THROWS_AS(max_chsh_violation(s), NotBinary);
}

TEST_CASE("max_chsh_violation picks the classic variant for binary2") {
    auto [v, val] = max_chsh_violation(get_example("binary2").strategy);
    CHECK(v == ChshVariant{0, 0, 0});
    CHECK(val == Rational(8, 3));
}

TEST_CASE("each non-local vertex attains 4 on its matched variant") {
    for (const auto& nl : binary_nonlocal_vertices()) {
        ChshVariant matched{nl.alpha, nl.beta, nl.gamma};
        CHECK(chsh_value(nl.strategy, matched) == 4);
        auto [v, val] = max_chsh_violation(nl.strategy);
        CHECK(v == matched);
        CHECK(val == 4);
        for (const auto& other : all_chsh_variants())
            CHECK(chsh_value(nl.strategy, other) == chsh_oracle(nl.strategy, other));
    }
}

TEST_CASE("uniform strategy: all variants 0, lexicographic tiebreak") {
    auto [v, val] = max_chsh_violation(get_example("uniform").strategy);
    CHECK(v == ChshVariant{0, 0, 0});
    CHECK(val == 0);
}

TEST_CASE("all 16 local vertices satisfy every variant <= 2") {
    for (const auto& lv : binary_local_vertices())
        for (const auto& v : all_chsh_variants()) CHECK(chsh_value(lv.strategy, v) <= 2);
}

TEST_CASE("chsh_functional evaluates like chsh_value; PR box separates") {
    auto pr = get_example("pr-box").strategy;
    auto c = chsh_functional(ChshVariant{0, 0, 0}, pr);
    CHECK(c.value_on_strategy == 4);
    CHECK(c.max_on_local == 2);
    CHECK(evaluate_functional(c, pr) == 4);
    CHECK(evaluate_functional(c, get_example("binary2").strategy) == Rational(8, 3));
}

TEST_CASE("property: local mixtures obey CHSH, all strategies stay in [-4,4]") {
    std::mt19937 rng(86420);
    Alphabets al{2, 2, 2, 2};
    auto locals = enumerate_deterministic(al);
    std::uniform_int_distribution<std::size_t> pick(0, locals.size() - 1);
    for (int iter = 0; iter < 1000; ++iter) {
        // convex mixture of deterministic locals
        auto weights = testutil::random_distribution(rng, 4);
        std::vector<Rational> t(al.cells(), Rational(0));
        for (int i = 0; i < 4; ++i) {
            const auto& d = locals[pick(rng)];
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) t[al.index(a, b, d.f[a], d.g[b])] += weights[i];
        }
        auto s = Strategy::validate(al, std::move(t));
        for (const auto& v : all_chsh_variants()) {
            Rational val = chsh_value(s, v);
            CHECK(val <= 2);
            CHECK(val == chsh_oracle(s, v));
        }
    }
    for (int iter = 0; iter < 200; ++iter) {
        auto s = testutil::random_strategy(rng, al);
        for (const auto& v : all_chsh_variants()) {
            Rational val = chsh_value(s, v);
            CHECK(val >= -4);
            CHECK(val <= 4);
        }
    }
}

TEST_CASE("CHSH violation implies LP infeasibility") {
    std::mt19937 rng(13579);
    Alphabets al{2, 2, 2, 2};
    int violations_seen = 0;
    for (int iter = 0; iter < 200; ++iter) {
        auto s = testutil::random_strategy(rng, al);
        auto [v, val] = max_chsh_violation(s);
        if (val > 2) {
            ++violations_seen;
            CHECK_FALSE(local_membership(s).feasible);
        }
    }
    // the named violators definitely count
    CHECK_FALSE(local_membership(get_example("binary2").strategy).feasible);
    CHECK_FALSE(local_membership(get_example("pr-box").strategy).feasible);
}
