#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include <temper/analysis.hpp>
#include <temper/model.hpp>
#include <temper/search.hpp>
#include <temper/solver.hpp>

using namespace temper;

namespace {

SweepGrid seven_by_25() {
    SweepOptions opt;
    opt.parallelism = 4;
    return sweep(IntRange{1, 7}, IntRange{12, 36}, opt);
}

SweepGrid empty_grid(IntRange rows, IntRange cols) {
    SweepGrid g;
    g.row_range = rows;
    g.col_range = cols;
    g.cells.resize(static_cast<std::size_t>(rows.size()) *
                   static_cast<std::size_t>(cols.size()));
    return g;
}

void put_cell(SweepGrid& g, int rows, int cols, const ExactGenerator& exact,
              double deviation) {
    SearchResult r;
    r.dims = {rows, cols};
    MinimaxSolution sol;
    sol.x = exact.cents_value();
    sol.deviation = deviation;
    sol.exact = exact;
    r.best = sol;
    g.cells[g.index_of(rows, cols)] = std::move(r);
}

}  // namespace

TEST_CASE("regions of the 1..7 x 12..36 grid") {
    const SweepGrid grid = seven_by_25();
    const std::vector<Region> regions = extract_regions(grid);
    REQUIRE(regions.size() == 27);

    const struct {
        int r, c;
        std::size_t cells;
        RegionShape shape;
    } want[] = {
        {1, 12, 1, RegionShape::rectangle},  {1, 13, 1, RegionShape::rectangle},
        {1, 14, 1, RegionShape::rectangle},  {1, 15, 3, RegionShape::rectangle},
        {1, 18, 5, RegionShape::rectangle},  {1, 23, 2, RegionShape::rectangle},
        {1, 25, 3, RegionShape::rectangle},  {1, 28, 5, RegionShape::rectangle},
        {1, 33, 4, RegionShape::rectangle},  {2, 12, 19, RegionShape::irregular},
        {2, 18, 2, RegionShape::rectangle},  {2, 20, 13, RegionShape::gamma},
        {2, 29, 6, RegionShape::rectangle},  {2, 35, 1, RegionShape::rectangle},
        {2, 36, 4, RegionShape::rectangle},  {3, 16, 4, RegionShape::rectangle},
        {3, 21, 5, RegionShape::rectangle},  {3, 22, 62, RegionShape::irregular},
        {4, 15, 1, RegionShape::rectangle},  {4, 16, 6, RegionShape::gamma},
        {5, 14, 6, RegionShape::rectangle},  {5, 17, 9, RegionShape::rectangle},
        {5, 35, 1, RegionShape::rectangle},  {6, 35, 4, RegionShape::rectangle},
        {7, 16, 1, RegionShape::rectangle},  {7, 20, 1, RegionShape::rectangle},
        {7, 30, 5, RegionShape::rectangle},
    };
    std::size_t covered = 0;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const Region& g = regions[i];
        CHECK(g.corner.first == want[i].r);
        CHECK(g.corner.second == want[i].c);
        CHECK(g.cells.size() == want[i].cells);
        CHECK(g.shape == want[i].shape);
        if (g.shape != RegionShape::irregular) CHECK(g.diagnostic.empty());
        covered += g.cells.size();
        REQUIRE_FALSE(g.cells.empty());
        if (g.shape != RegionShape::irregular)
            CHECK(g.cells.front() == g.corner);
    }
    CHECK(covered == grid.cells.size());

    const Region& miracle = regions[17];
    CHECK(miracle.temperament == ExactGenerator{18, 5, 19});
    CHECK(miracle.deviation == doctest::Approx(3.322872552286242).epsilon(1e-12));
    CHECK(miracle.cells.front() == std::pair{3, 22});
    CHECK(miracle.diagnostic.find("not a rectangle") != std::string::npos);

    const Region& tall = regions[9];
    CHECK(tall.temperament == ExactGenerator{28, 9, 12});
    CHECK(tall.diagnostic.find("not a rectangle") != std::string::npos);

    CHECK(regions[11].temperament == ExactGenerator{55, 8, 38});
}

TEST_CASE("standout temperaments of the 1..7 x 12..36 grid") {
    const SweepGrid grid = seven_by_25();
    const std::vector<MiracleCandidate> got =
        detect_miracle_family(grid, {2, 8});
    REQUIRE(got.size() == 3);

    CHECK(got[0].dims.rows == 2);
    CHECK(got[0].dims.cols == 36);
    REQUIRE(got[0].improvement_gap.has_value());
    CHECK(*got[0].improvement_gap == std::pair{4, 0});

    CHECK(got[1].dims.rows == 3);
    CHECK(got[1].dims.cols == 22);
    CHECK(got[1].solution.deviation ==
          doctest::Approx(3.322872552286242).epsilon(1e-12));
    CHECK(*got[1].solution.exact == ExactGenerator{18, 5, 19});
    REQUIRE(got[1].improvement_gap.has_value());
    CHECK(*got[1].improvement_gap == std::pair{4, 8});

    CHECK(got[2].dims.rows == 6);
    CHECK(got[2].dims.cols == 35);
    CHECK_FALSE(got[2].improvement_gap.has_value());

    // A looser gap keeps at least these three.
    const auto loose = detect_miracle_family(grid, {1, 1});
    bool has_miracle = false;
    for (const MiracleCandidate& c : loose)
        if (c.dims.rows == 3 && c.dims.cols == 22) has_miracle = true;
    CHECK(has_miracle);
    CHECK(loose.size() >= 3);

    // A gap no keyboard in range can satisfy leaves only the grid optimum.
    const auto strict = detect_miracle_family(grid, {100, 100});
    REQUIRE(strict.size() == 1);
    CHECK(strict[0].dims.rows == 6);
    CHECK(strict[0].dims.cols == 35);
}

TEST_CASE("region shapes on crafted grids") {
    const ExactGenerator a{3, 2, 6};
    const ExactGenerator b{18, 5, 19};

    SweepGrid uniform = empty_grid({1, 2}, {12, 13});
    for (int r = 1; r <= 2; ++r)
        for (int c = 12; c <= 13; ++c) put_cell(uniform, r, c, a, 10.0);
    const auto uni = extract_regions(uniform);
    REQUIRE(uni.size() == 1);
    CHECK(uni[0].shape == RegionShape::rectangle);
    CHECK(uni[0].cells.size() == 4);
    CHECK(uni[0].corner == std::pair{1, 12});

    SweepGrid bent = empty_grid({1, 2}, {12, 13});
    put_cell(bent, 1, 12, a, 10.0);
    put_cell(bent, 1, 13, a, 10.0);
    put_cell(bent, 2, 12, a, 10.0);
    put_cell(bent, 2, 13, b, 8.0);
    const auto two = extract_regions(bent);
    REQUIRE(two.size() == 2);
    CHECK(two[0].corner == std::pair{1, 12});
    CHECK(two[0].shape == RegionShape::gamma);
    CHECK(two[1].corner == std::pair{2, 13});
    CHECK(two[1].shape == RegionShape::rectangle);

    SweepGrid checker = empty_grid({1, 2}, {12, 13});
    put_cell(checker, 1, 12, b, 8.0);
    put_cell(checker, 2, 13, b, 8.0);
    put_cell(checker, 1, 13, a, 10.0);
    put_cell(checker, 2, 12, a, 10.0);
    const auto diag = extract_regions(checker);
    REQUIRE(diag.size() == 2);
    // One pair owns no corner cell; the other has its corner but splits into
    // two patches. Both are irregular.
    CHECK(diag[0].shape == RegionShape::irregular);
    CHECK(diag[1].shape == RegionShape::irregular);
    const std::string both = diag[0].diagnostic + " | " + diag[1].diagnostic;
    CHECK(both.find("no corner cell") != std::string::npos);
    CHECK(both.find("2 disconnected patches") != std::string::npos);
}

TEST_CASE("incomplete grids are rejected") {
    SweepGrid partial = empty_grid({1, 2}, {12, 13});
    put_cell(partial, 1, 12, ExactGenerator{3, 2, 6}, 10.0);
    CHECK_THROWS_AS(extract_regions(partial), std::invalid_argument);
    CHECK_THROWS_AS(detect_miracle_family(partial, {2, 8}),
                    std::invalid_argument);
}
