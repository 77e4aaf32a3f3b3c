#include <doctest.h>

#include <cmath>
#include <random>

#include "nsctl/catalog.hpp"
#include "nsctl/mechanisms.hpp"
#include "nsctl/nosignaling.hpp"
#include "test_util.hpp"

using namespace nsctl;

namespace {

// Brute-force Bayes oracle over the full joint: checks P(a|b,y) = P(a|b)
// and P(b|a,x) = P(b|a) by direct summation, independent of check_posterior.
bool posterior_holds_oracle(const Strategy& s, const ObservationPrior& p) {
    const Alphabets& al = s.alphabets();
    auto j = joint_from_prior(s, p);
    auto sum_over = [&](auto pred) {
        Rational total = 0;
        for (int a = 0; a < al.na; ++a)
            for (int b = 0; b < al.nb; ++b)
                for (int x = 0; x < al.nx; ++x)
                    for (int y = 0; y < al.ny; ++y)
                        if (pred(x, y, a, b)) total += j.at(x, y, a, b);
        return total;
    };
    for (int b = 0; b < al.nb; ++b)
        for (int y = 0; y < al.ny; ++y) {
            Rational pby = sum_over([&](int, int yy, int, int bb) { return bb == b && yy == y; });
            if (pby == 0) continue;
            Rational pb = sum_over([&](int, int, int, int bb) { return bb == b; });
            for (int a = 0; a < al.na; ++a) {
                Rational paby =
                    sum_over([&](int, int yy, int aa, int bb) { return aa == a && bb == b && yy == y; });
                Rational pab = sum_over([&](int, int, int aa, int bb) { return aa == a && bb == b; });
                if (paby * pb != pab * pby) return false;
            }
        }
    for (int a = 0; a < al.na; ++a)
        for (int x = 0; x < al.nx; ++x) {
            Rational pax = sum_over([&](int xx, int, int aa, int) { return aa == a && xx == x; });
            if (pax == 0) continue;
            Rational pa = sum_over([&](int, int, int aa, int) { return aa == a; });
            for (int b = 0; b < al.nb; ++b) {
                Rational pabx =
                    sum_over([&](int xx, int, int aa, int bb) { return aa == a && bb == b && xx == x; });
                Rational pab = sum_over([&](int, int, int aa, int bb) { return aa == a && bb == b; });
                if (pabx * pa != pab * pax) return false;
            }
        }
    return true;
}

Strategy copy_b_strategy() {
    // x = b deterministically, y = 0: venkat's marginal depends on b
    Alphabets al{2, 2, 2, 2};
    std::vector<Rational> t(al.cells(), Rational(0));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) t[al.index(a, b, b, 0)] = 1;
    return Strategy::validate(al, std::move(t));
}

}  // namespace

TEST_CASE("no-signaling holds on both catalog counterexamples") {
    CHECK(check_no_signaling(get_example("ab3").strategy).holds);
    CHECK(check_no_signaling(get_example("binary2").strategy).holds);
}

TEST_CASE("signaling strategy is caught on the venkat side") {
    auto rep = check_no_signaling(copy_b_strategy());
    CHECK_FALSE(rep.holds);
    REQUIRE_FALSE(rep.violations.empty());
    bool venkat_side = false;
    for (const auto& v : rep.violations)
        if (v.side == Side::venkat) {
            venkat_side = true;
            CHECK(v.lhs != v.rhs);
        }
    CHECK(venkat_side);
}

TEST_CASE("posterior condition holds for binary2 under the uniform prior") {
    auto ex = get_example("binary2");
    CHECK(check_posterior(ex.strategy, ex.prior).holds);
    CHECK(posterior_holds_oracle(ex.strategy, ex.prior));
}

TEST_CASE("posterior condition fails for the signaling strategy") {
    auto p = ObservationPrior::uniform(Alphabets{2, 2, 2, 2});
    CHECK_FALSE(check_posterior(copy_b_strategy(), p).holds);
    CHECK_FALSE(posterior_holds_oracle(copy_b_strategy(), p));
}

TEST_CASE("point-mass prior raises DegeneratePrior") {
    auto s = get_example("binary2").strategy;
    Alphabets al = s.alphabets();
    std::vector<Rational> pt(al.contexts(), Rational(0));
    pt[0] = 1;
    auto p = ObservationPrior::validate(al, pt);
    CHECK_THROWS_AS(check_posterior(s, p), DegeneratePrior);
    CHECK_THROWS_AS(posterior_iff_ns(s, p), DegeneratePrior);
}

TEST_CASE("posterior_iff_ns on the named instances") {
    auto ex = get_example("binary2");
    CHECK(posterior_iff_ns(ex.strategy, ex.prior));
    auto p = ObservationPrior::uniform(Alphabets{2, 2, 2, 2});
    CHECK(posterior_iff_ns(copy_b_strategy(), p));
}

TEST_CASE("property: posterior holds iff NS holds, vs brute-force Bayes") {
    std::mt19937 rng(777);
    for (int iter = 0; iter < 300; ++iter) {
        Alphabets al{1 + int(rng() % 3), 1 + int(rng() % 3), 1 + int(rng() % 3),
                     1 + int(rng() % 3)};
        auto s = testutil::random_strategy(rng, al);
        auto p = testutil::random_full_support_prior(rng, al);
        CHECK(posterior_iff_ns(s, p));
        CHECK(check_posterior(s, p).holds == posterior_holds_oracle(s, p));
    }
}

TEST_CASE("CMI is zero for binary2 and matches exact factorization") {
    auto ex = get_example("binary2");
    auto j = joint_from_prior(ex.strategy, ex.prior);
    CHECK(exact_factorization(j, CmiKind::x_b_given_a));
    CHECK(exact_factorization(j, CmiKind::y_a_given_b));
    CHECK(std::abs(conditional_mutual_information(j, CmiKind::x_b_given_a)) < 1e-12);
    CHECK(std::abs(conditional_mutual_information(j, CmiKind::y_a_given_b)) < 1e-12);
}

TEST_CASE("CMI is zero under full independence") {
    Alphabets al{2, 2, 2, 2};
    std::vector<Rational> t(al.cells(), Rational(1, 4));
    auto s = Strategy::validate(al, std::move(t));
    auto j = joint_from_prior(s, ObservationPrior::uniform(al));
    CHECK(std::abs(conditional_mutual_information(j, CmiKind::x_b_given_a)) < 1e-12);
}

TEST_CASE("CMI of a copied bit is ln 2") {
    // x = b deterministically, uniform everything else: I(X;B|A) = ln 2
    auto j = joint_from_prior(copy_b_strategy(), ObservationPrior::uniform(Alphabets{2, 2, 2, 2}));
    CHECK(conditional_mutual_information(j, CmiKind::x_b_given_a) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK_FALSE(exact_factorization(j, CmiKind::x_b_given_a));
}

TEST_CASE("property: CMI matches factorization and NS side-by-side") {
    std::mt19937 rng(4242);
    for (int iter = 0; iter < 200; ++iter) {
        Alphabets al{1 + int(rng() % 3), 1 + int(rng() % 3), 1 + int(rng() % 3),
                     1 + int(rng() % 3)};
        auto s = testutil::random_strategy(rng, al);
        auto p = testutil::random_full_support_prior(rng, al);
        auto j = joint_from_prior(s, p);
        auto ns = check_no_signaling(s);
        bool venkat_ok = true, vivek_ok = true;
        for (const auto& v : ns.violations)
            (v.side == Side::venkat ? venkat_ok : vivek_ok) = false;
        CHECK(exact_factorization(j, CmiKind::x_b_given_a) == venkat_ok);
        CHECK(exact_factorization(j, CmiKind::y_a_given_b) == vivek_ok);
        double cmi_x = conditional_mutual_information(j, CmiKind::x_b_given_a);
        double cmi_y = conditional_mutual_information(j, CmiKind::y_a_given_b);
        CHECK(cmi_x >= -1e-12);
        CHECK(cmi_y >= -1e-12);
        if (venkat_ok) CHECK(std::abs(cmi_x) < 1e-12);
        if (vivek_ok) CHECK(std::abs(cmi_y) < 1e-12);
    }
}

TEST_CASE("is_passive: product joint is passive") {
    Alphabets al{2, 2, 2, 2};
    std::vector<Rational> t(std::size_t(3) * 4, Rational(1, 12));
    CHECK(is_passive(WJoint(3, al, std::move(t))).passive);
}

TEST_CASE("is_passive: nW=1 is always passive") {
    Alphabets al{2, 2, 2, 2};
    std::vector<Rational> t{Rational(1, 2), Rational(1, 6), Rational(1, 6), Rational(1, 6)};
    CHECK(is_passive(WJoint(1, al, std::move(t))).passive);
}

TEST_CASE("is_passive: the active construction's W joint is active") {
    auto m = paper_active_mechanism();
    auto wj = wjoint_from_active(m, ObservationPrior::uniform(m.alphabets));
    auto res = is_passive(wj);
    CHECK_FALSE(res.passive);
    CHECK(res.worst.has_value());
    CHECK(res.worst_gap > 0);
}

TEST_CASE("induced passive strategies always satisfy no-signaling") {
    std::mt19937 rng(991);
    for (int iter = 0; iter < 1000; ++iter) {
        Alphabets al{1 + int(rng() % 2), 1 + int(rng() % 2), 1 + int(rng() % 3),
                     1 + int(rng() % 3)};
        auto m = testutil::random_passive_mechanism(rng, al);
        CHECK(check_no_signaling(induce_passive(m)).holds);
    }
}
