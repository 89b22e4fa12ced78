#include <doctest.h>

#include <cmath>

#include "racl/credal.hpp"
#include "racl/error.hpp"
#include "test_support.hpp"

using namespace racl;

TEST_CASE("elicit_possibility rule") {
    CHECK(elicit_possibility(0, ProbDist({0.2, 0.7, 0.1}), 0.6, 0.3).values() ==
          std::vector<double>{1.0, 1.0, 0.3});
    CHECK(elicit_possibility(1, ProbDist({0.1, 0.8, 0.1}), 0.95, 0.0).values() ==
          std::vector<double>{0.0, 1.0, 0.0});
    const ProbDist uniform({1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(elicit_possibility(2, uniform, 0.2, 0.5).values() ==
          std::vector<double>{1.0, 1.0, 1.0});
    CHECK_THROWS_AS(elicit_possibility(3, uniform, 0.5, 0.3), invalid_input);
    CHECK_THROWS_AS(elicit_possibility(0, uniform, 0.5, 1.0), invalid_input);
}

TEST_CASE("elicit_possibility keeps the observed label fully plausible") {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(6));
        const ProbDist p = test::random_simplex_point(rng, k);
        const int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
        const PossibilityDist pi =
            elicit_possibility(y, p, rng.uniform(), rng.uniform() * 0.99);
        CHECK(pi[y] == 1.0);
    }
}

TEST_CASE("beta_at endpoints and midpoint") {
    const BetaSchedule s(0.75, 0.55, 10);
    CHECK(beta_at(s, 0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(beta_at(s, 10) == doctest::Approx(0.55).epsilon(1e-15));
    CHECK(beta_at(s, 5) == doctest::Approx(0.65).epsilon(1e-15));
    CHECK_THROWS_AS(beta_at(s, 11), invalid_input);
    CHECK_THROWS_AS(beta_at(s, -1), invalid_input);
    CHECK_THROWS_AS(BetaSchedule(0.5, 0.7, 10), invalid_input);
}

TEST_CASE("beta_at is monotone non-increasing") {
    const BetaSchedule s(0.9, 0.1, 37);
    double prev = beta_at(s, 0);
    for (int t = 1; t <= 37; ++t) {
        const double cur = beta_at(s, t);
        CHECK(cur <= prev + 1e-15);
        prev = cur;
    }
}

TEST_CASE("contains level-set examples") {
    const CredalSet q(PossibilityDist({1.0, 0.3, 0.3}));
    CHECK(contains(q, ProbDist({0.75, 0.15, 0.10})));
    CHECK_FALSE(contains(q, ProbDist({0.6, 0.25, 0.15})));
    const CredalSet all_one(PossibilityDist({1.0, 1.0, 1.0}));
    CHECK(contains(all_one, ProbDist({0.6, 0.25, 0.15})));
    CHECK_THROWS_AS(contains(q, ProbDist({0.5, 0.5})), dimension_mismatch);
}

TEST_CASE("contains_bruteforce matches the examples and rejects K > 16") {
    const CredalSet q(PossibilityDist({1.0, 0.3, 0.3}));
    CHECK(contains_bruteforce(q, ProbDist({0.75, 0.15, 0.10})));
    CHECK_FALSE(contains_bruteforce(q, ProbDist({0.6, 0.25, 0.15})));

    std::vector<double> big(17, 0.1);
    big[0] = 1.0;
    std::vector<double> p(17, 1.0 / 17.0);
    CHECK_THROWS_AS(contains_bruteforce(CredalSet(PossibilityDist(big)), ProbDist(p)),
                    invalid_input);
}

TEST_CASE("level-set membership agrees with the exhaustive oracle") {
    Rng rng(5);
    for (int k = 2; k <= 8; ++k) {
        for (int trial = 0; trial < 250; ++trial) {
            const CredalSet q(test::random_possibility(rng, k));
            const ProbDist p = test::random_simplex_point(rng, k);
            CHECK(contains(q, p) == contains_bruteforce(q, p));
        }
    }
}

TEST_CASE("two-level membership closed form") {
    Rng rng(9);
    for (int trial = 0; trial < 500; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(5));
        const ProbDist p = test::random_simplex_point(rng, k);
        const double alpha = rng.uniform() * 0.95;
        const int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
        const PossibilityDist pi = elicit_possibility(y, p, rng.uniform(), alpha);
        const ProbDist probe = test::random_simplex_point(rng, k);
        double s_alpha = 0.0;
        for (int i = 0; i < k; ++i)
            if (pi[i] != 1.0) s_alpha += probe[i];
        const bool closed_form = s_alpha <= alpha + kMembershipTol;
        CHECK(contains(CredalSet(pi), probe) == closed_form);
        CHECK(contains_bruteforce(CredalSet(pi), probe) == closed_form);
    }
}

TEST_CASE("project hand example") {
    const ProbDist r =
        project(ProbDist({0.5, 0.3, 0.2}), PossibilityDist({1.0, 0.3, 0.3}), 0.3);
    CHECK(r[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(r[1] == doctest::Approx(0.18).epsilon(1e-12));
    CHECK(r[2] == doctest::Approx(0.12).epsilon(1e-12));
    CHECK(contains_bruteforce(CredalSet(PossibilityDist({1.0, 0.3, 0.3})), r));
}

TEST_CASE("project degenerate cases") {
    const ProbDist p({0.5, 0.3, 0.2});
    CHECK(project(p, PossibilityDist({1.0, 1.0, 1.0}), 0.4).values() == p.values());
    CHECK(project(p, PossibilityDist({1.0, 0.0, 0.0}), 0.0).values() ==
          std::vector<double>{1.0, 0.0, 0.0});
    CHECK_THROWS_AS(project(p, PossibilityDist({1.0, 0.5, 0.3}), 0.3), invalid_input);
}

TEST_CASE("project falls back to uniform on a zero-mass side") {
    // all p_hat mass on the alpha side except none on one pi==1 class pair
    const ProbDist p({0.0, 0.0, 1.0});
    const PossibilityDist pi({1.0, 1.0, 0.25});
    const ProbDist r = project(p, pi, 0.25);
    CHECK(r[0] == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(r[1] == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(r[2] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("project output is feasible and normalized") {
    Rng rng(17);
    for (int trial = 0; trial < 500; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(7));
        const ProbDist p = test::random_simplex_point(rng, k);
        const double alpha = rng.uniform() * 0.9;
        const int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
        const PossibilityDist pi = elicit_possibility(y, p, rng.uniform(), alpha);
        const ProbDist r = project(p, pi, alpha);
        CHECK(contains_bruteforce(CredalSet(pi), r));
        double sum = 0.0;
        for (int i = 0; i < k; ++i) sum += r[i];
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("PossibilityDist requires max exactly 1") {
    CHECK_THROWS_AS(PossibilityDist({0.9, 0.3}), invalid_input);
    CHECK_THROWS_AS(PossibilityDist({1.0, 1.2}), invalid_input);
}
