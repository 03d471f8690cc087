#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <temper/model.hpp>
#include <temper/solver.hpp>

using namespace temper;

namespace {

const ConstraintSystem kMiracleSystem{
    {{3, -1, 6}, {5, -3, -7}, {7, -3, -2}, {9, -2, 12}, {11, -2, 15}},
    KeyboardDims{3, 22}};

}  // namespace

TEST_CASE("two-constraint balance has a closed form") {
    const LinearConstraint c1 = constraint_from_spec({3, 0, 12});
    const LinearConstraint c2 = constraint_from_spec({5, 0, 20});
    CHECK(c1.x_intercept == doctest::Approx(158.496250072116).epsilon(1e-12));
    CHECK(c2.x_intercept == doctest::Approx(139.315685693242).epsilon(1e-12));

    const MinimaxSolution sol = solve_pair(c1, c2);
    CHECK(sol.x == doctest::Approx(146.508397335319444).epsilon(1e-12));
    CHECK(sol.deviation == doctest::Approx(143.854232841554222).epsilon(1e-12));
    REQUIRE(sol.per_harmonic.size() == 2);
    // Both constraints sit at the common deviation with opposite signs.
    CHECK(std::abs(std::abs(sol.per_harmonic[0]) - sol.deviation) < 1e-9);
    CHECK(std::abs(std::abs(sol.per_harmonic[1]) - sol.deviation) < 1e-9);
    CHECK(sol.per_harmonic[0] * sol.per_harmonic[1] < 0.0);

    // Argument order is immaterial.
    const MinimaxSolution swapped = solve_pair(c2, c1);
    CHECK(swapped.x == sol.x);
    CHECK(swapped.deviation == sol.deviation);

    // Coincident intercepts: zero deviation at the shared intercept.
    const MinimaxSolution same = solve_pair(c1, c1);
    CHECK(same.deviation == 0.0);
    CHECK(same.x == doctest::Approx(c1.x_intercept).epsilon(1e-12));
}

TEST_CASE("the pair balance is exactly the 32nd root of 15") {
    const ConstraintSystem sys{{{3, 0, 12}, {5, 0, 20}}, std::nullopt};
    MinimaxSolution sol = solve_system(sys);
    CHECK(sol.x == doctest::Approx(146.508397335319444).epsilon(1e-12));
    sol.exact = exact_form(sol, sys);
    REQUIRE(sol.exact.has_value());
    CHECK(*sol.exact == ExactGenerator{15, 1, 32});
    CHECK(sol.exact->cents_value() == doctest::Approx(sol.x).epsilon(1e-12));
}

TEST_CASE("five-constraint system of Secor's keyboard") {
    const MinimaxSolution sol = solve_system(kMiracleSystem);
    CHECK(sol.x == doctest::Approx(116.715594098207376).epsilon(1e-13));
    CHECK(sol.deviation == doctest::Approx(3.322872552286242).epsilon(1e-13));
    REQUIRE(sol.per_harmonic.size() == 5);
    const double want[5] = {-1.661436276143036, -3.322872552286242,
                            -2.257094665539768, -3.322872552286071,
                            -0.584030891646137};
    for (int i = 0; i < 5; ++i)
        CHECK(sol.per_harmonic[i] == doctest::Approx(want[i]).epsilon(1e-12));
    REQUIRE(sol.active_pair.has_value());
    CHECK(sol.active_pair->first == 1);
    CHECK(sol.active_pair->second == 3);

    const ExactGenerator exact = exact_form(sol, kMiracleSystem);
    CHECK(exact == ExactGenerator{18, 5, 19});
    CHECK(exact.cents_value() == doctest::Approx(sol.x).epsilon(1e-12));
}

TEST_CASE("single-constraint systems are solved at their intercept") {
    const ConstraintSystem sys{{{3, -1, 6}}, std::nullopt};
    MinimaxSolution sol = solve_system(sys);
    CHECK(sol.deviation == 0.0);
    CHECK(sol.x == doctest::Approx(116.992500144231215).epsilon(1e-12));
    CHECK_FALSE(sol.active_pair.has_value());
    sol.exact = exact_form(sol, sys);
    CHECK(*sol.exact == ExactGenerator{3, 2, 6});
    CHECK(sol.exact->cents_value() == doctest::Approx(sol.x).epsilon(1e-12));
}

TEST_CASE("system validation") {
    CHECK_THROWS_AS(solve_system(ConstraintSystem{}), std::invalid_argument);
    const ConstraintSystem dup{{{3, -1, 6}, {3, -1, 7}}, std::nullopt};
    CHECK_THROWS_AS(solve_system(dup), std::invalid_argument);
}

TEST_CASE("envelope minimum lands on a candidate inside (0, octave]") {
    // A single decreasing line whose intercept is above the octave would pull
    // the minimum out of the domain; the octave endpoint must win instead.
    const double slope[2] = {1.0, -1.0};
    const double x0[2] = {100.0, 2300.0};
    const detail::EnvelopeMin m = detail::min_envelope(slope, x0, 2);
    CHECK(m.x == doctest::Approx(1200.0).epsilon(1e-12));
    CHECK(m.deviation == doctest::Approx(1100.0).epsilon(1e-12));
}

TEST_CASE("adding a constraint never shrinks the minimax deviation") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> pick_rows(1, 6);
    std::uniform_int_distribution<int> pick_cols(2, 40);
    for (int iter = 0; iter < 10000; ++iter) {
        const KeyboardDims dims{pick_rows(rng), pick_cols(rng)};
        std::array<std::vector<ConstraintSpec>, 5> fams;
        for (int i = 0; i < 5; ++i) fams[i] = enumerate_family(kHarmonics[i], dims);

        std::array<int, 5> order{0, 1, 2, 3, 4};
        std::shuffle(order.begin(), order.end(), rng);
        std::uniform_int_distribution<int> pick_count(1, 4);
        const int base_count = pick_count(rng);

        ConstraintSystem sys;
        bool bail = false;
        for (int i = 0; i <= base_count && !bail; ++i) {
            const auto& fam = fams[order[static_cast<std::size_t>(i)]];
            if (fam.empty()) {
                bail = true;
                break;
            }
            std::uniform_int_distribution<std::size_t> pick(0, fam.size() - 1);
            sys.specs.push_back(fam[pick(rng)]);
        }
        if (bail) continue;

        ConstraintSystem grown = sys;
        sys.specs.pop_back();
        const double before = solve_system(sys).deviation;
        const double after = solve_system(grown).deviation;
        CHECK(after >= before - 1e-9);
    }
}

TEST_CASE("minimax optimum stays within the generator domain") {
    std::mt19937 rng(777);
    std::uniform_int_distribution<int> pick_rows(1, 5);
    std::uniform_int_distribution<int> pick_cols(2, 30);
    for (int iter = 0; iter < 2000; ++iter) {
        const KeyboardDims dims{pick_rows(rng), pick_cols(rng)};
        ConstraintSystem sys;
        for (int i = 0; i < 5; ++i) {
            const auto fam = enumerate_family(kHarmonics[i], dims);
            if (fam.empty()) continue;
            std::uniform_int_distribution<std::size_t> pick(0, fam.size() - 1);
            sys.specs.push_back(fam[pick(rng)]);
        }
        if (sys.specs.empty()) continue;
        const MinimaxSolution sol = solve_system(sys);
        CHECK(sol.x > 0.0);
        CHECK(sol.x <= 1200.0 + 1e-12);
        CHECK(sol.deviation >= 0.0);
        // The reported deviation really is attained: recompute the envelope.
        double worst = 0.0;
        for (const ConstraintSpec& s : sys.specs)
            worst = std::max(worst,
                             std::abs(deviation_at(constraint_from_spec(s), sol.x)));
        CHECK(worst == doctest::Approx(sol.deviation).epsilon(1e-9));
    }
}
