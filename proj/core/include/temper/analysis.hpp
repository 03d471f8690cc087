#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "temper/search.hpp"

namespace temper {

enum class RegionShape {
    rectangle,
    gamma,      ///< a rectangle minus a rectangular bite at one of its corners
    irregular,  ///< anything else; carries a diagnostic
};

/// Maximal set of grid cells sharing one optimal temperament (same exact
/// generator form).
struct Region {
    ExactGenerator temperament;
    double deviation = 0.0;                      ///< at the corner cell, cents
    std::pair<int, int> corner;                  ///< minimal (rows, cols) of the region
    std::vector<std::pair<int, int>> cells;      ///< sorted (rows, cols)
    RegionShape shape = RegionShape::rectangle;
    std::string diagnostic;                      ///< nonempty iff irregular
};

/// A corner whose temperament beats every smaller-or-equal keyboard.
struct MiracleCandidate {
    KeyboardDims dims;
    MinimaxSolution solution;
    /// (rows, cols) growth needed to reach the nearest strictly better
    /// region corner; absent when no better temperament exists in the grid.
    std::optional<std::pair<int, int>> improvement_gap;
};

/// Partition a complete grid into per-temperament regions with shape
/// classification. Requires grid.complete().
std::vector<Region> extract_regions(const SweepGrid& grid);

/// Corners whose deviation is strictly below every cell with componentwise
/// smaller-or-equal dims, filtered so that every strictly better region
/// corner needs at least min_gap.first extra rows or min_gap.second extra
/// columns. min_gap (0,0) returns all such corners.
std::vector<MiracleCandidate> detect_miracle_family(const SweepGrid& grid,
                                                    std::pair<int, int> min_gap);

}  // namespace temper
