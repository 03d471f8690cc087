#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include <temper/model.hpp>
#include <temper/oracle.hpp>

using namespace temper;

TEST_CASE("distance to the nearest integer") {
    CHECK(nint_distance(0.0) == 0.0);
    CHECK(nint_distance(7.0) == 0.0);
    CHECK(nint_distance(0.3) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(nint_distance(0.6) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(nint_distance(-0.2) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(nint_distance(3.5) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("row-unbounded objective at known generators") {
    const double r_secor = std::log2(18.0 / 5.0) / 19.0;
    CHECK(1200.0 * objective(r_secor, 22) ==
          doctest::Approx(3.3228725522860714).epsilon(1e-12));
    // A 100-cent generator reproduces the 12-TET worst case (harmonic 11).
    CHECK(1200.0 * objective(100.0 / 1200.0, 20) ==
          doctest::Approx(48.682057635243225).epsilon(1e-12));
    // A full-octave generator leaves only the octave grid.
    CHECK(objective(1.0, 5) == doctest::Approx(0.4594316186372964).epsilon(1e-12));
}

TEST_CASE("objective never grows when the keyboard widens") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> pick(0.01, 1.0);
    for (int iter = 0; iter < 2000; ++iter) {
        const double r = pick(rng);
        const int w = 2 + static_cast<int>(iter % 60);
        CHECK(objective(r, w + 1) <= objective(r, w) + 1e-15);
    }
}

TEST_CASE("rows needed to realize a generator's best approximations") {
    const double r_secor = std::log2(18.0 / 5.0) / 19.0;
    CHECK(rows_needed(r_secor, 22) == 3);
    CHECK(rows_needed(26.213415 / 1200.0, 75) == 2);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> pick(0.05, 1.0);
    for (int iter = 0; iter < 500; ++iter)
        CHECK(rows_needed(pick(rng), 2 + iter % 40) >= 1);
}

TEST_CASE("search interval lower endpoint") {
    CHECK(oracle_interval_lo(2) ==
          doctest::Approx(0.8744691179161411).epsilon(1e-14));
    CHECK(1200.0 * oracle_interval_lo(2) ==
          doctest::Approx(1049.3629414993693).epsilon(1e-10));
    CHECK(oracle_interval_lo(22) ==
          doctest::Approx(0.041641386567435).epsilon(1e-10));
    // Wider keyboards may search further down.
    for (int w = 2; w < 60; ++w)
        CHECK(oracle_interval_lo(w + 1) <= oracle_interval_lo(w) + 1e-15);
    CHECK_THROWS_AS(oracle_interval_lo(1), std::domain_error);
}

TEST_CASE("continuous optimum for Secor's 22-column width") {
    const OracleResult o = optimize(22);
    CHECK(o.width == 22);
    CHECK(o.r_star == doctest::Approx(0.263954344955494).epsilon(1e-9));
    CHECK(o.deviation == doctest::Approx(2.9674352432053297).epsilon(1e-9));
    CHECK(o.rows_needed == 12);
    CHECK(o.accuracy > 0.0);
    CHECK(o.accuracy < 1e-4);
    CHECK(o.interval_lo == doctest::Approx(0.041641386567435).epsilon(1e-10));
    CHECK(o.interval_hi == 1.0);
    // The reported deviation is the objective at the reported generator.
    CHECK(1200.0 * objective(o.r_star, 22) ==
          doctest::Approx(o.deviation).epsilon(1e-12));
    // Honest near-optimality: no sampled generator beats it by more than the
    // reported accuracy.
    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> pick(o.interval_lo, 1.0);
    for (int iter = 0; iter < 5000; ++iter) {
        const double r = pick(rng);
        CHECK(o.deviation <= 1200.0 * objective(r, 22) + o.accuracy + 1e-9);
    }
}

TEST_CASE("continuous optimum for the narrowest keyboard") {
    const OracleResult o = optimize(2);
    CHECK(o.r_star == doctest::Approx(0.874469118).epsilon(1e-8));
    CHECK(o.deviation == doctest::Approx(250.044).epsilon(1e-5));
    CHECK(o.rows_needed == 4);
    CHECK(o.interval_lo == doctest::Approx(0.8744691179161411).epsilon(1e-12));
}

TEST_CASE("explicit scan resolution is honored") {
    const OracleResult fine = optimize(8);
    const OracleResult coarse = optimize(8, 1e-4);
    // Same optimum within the coarser run's accuracy budget.
    CHECK(std::abs(fine.deviation - coarse.deviation) <=
          fine.accuracy + coarse.accuracy + 1e-9);
    CHECK(coarse.accuracy > 0.0);
    CHECK_THROWS_AS(optimize(1), std::domain_error);
}
