#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "temper/pruning.hpp"
#include "temper/solver.hpp"

namespace temper {

/// Raised when a harmonic admits no realizable spec on the given keyboard.
struct FamilyEmptyError : std::runtime_error {
    FamilyEmptyError(int harmonic_, const std::string& msg)
        : std::runtime_error(msg), harmonic(harmonic_) {}
    int harmonic;
};

/// Raised when brute force would exceed its system budget.
struct BudgetExceededError : std::runtime_error {
    BudgetExceededError(double estimate_, const std::string& msg)
        : std::runtime_error(msg), estimate(estimate_) {}
    double estimate;  ///< product of family sizes
};

struct SearchResult {
    KeyboardDims dims;
    /// Absent when initial_bound (minus ties) excluded every system; the
    /// search then reports no improvement rather than a wrong optimum.
    std::optional<MinimaxSolution> best;
    ConstraintSystem best_specs;  ///< five specs when `best` is present
    std::uint64_t nodes_visited = 0;
    std::uint64_t nodes_pruned = 0;

    bool improved() const { return best.has_value(); }
};

struct SearchOptions {
    double initial_bound = std::numeric_limits<double>::infinity();
    PruneConfig prune{};
    /// Prime the incumbent with a feasible system found by a coarse generator
    /// scan. Never changes the result, only the node counts.
    bool greedy_seed = true;
};

/// Depth-first search over the five constraint families with incumbent-based
/// pruning. Equivalent to brute force (same optimum, same tie-break).
SearchResult backtracking_search(const KeyboardDims& dims, const SearchOptions& opt);
SearchResult backtracking_search(
    const KeyboardDims& dims,
    double initial_bound = std::numeric_limits<double>::infinity());

struct BruteForceOptions {
    /// Refuse when the product of family sizes exceeds this many systems.
    std::uint64_t budget = 100'000'000;
};

/// Exhaustive reference search: solves every five-spec combination that fits
/// the keyboard, with no deviation-based pruning. Tie-break identical to
/// backtracking_search.
SearchResult brute_force_search(const KeyboardDims& dims, const BruteForceOptions& opt);
SearchResult brute_force_search(const KeyboardDims& dims);

/// Inclusive integer range.
struct IntRange {
    int lo = 0;
    int hi = 0;

    int size() const { return hi >= lo ? hi - lo + 1 : 0; }
    bool contains(int v) const { return v >= lo && v <= hi; }
    friend bool operator==(const IntRange&, const IntRange&) = default;
};

/// Per-dimension grid of search results. Cells may be absent while a sweep
/// is still in progress.
struct SweepGrid {
    IntRange row_range;
    IntRange col_range;
    std::vector<std::optional<SearchResult>> cells;  ///< row-major

    std::size_t index_of(int rows, int cols) const;
    bool has(int rows, int cols) const;
    const SearchResult& at(int rows, int cols) const;
    bool complete() const;
};

struct SweepOptions {
    /// Seed each cell's incumbent with the better of its (rows-1, cols) and
    /// (rows, cols-1) neighbors. Sound because enlarging a keyboard cannot
    /// worsen the optimum; results are identical with it on or off.
    bool warm_start = true;
    /// Worker threads per anti-diagonal wavefront. Any value yields
    /// bit-identical results.
    int parallelism = 1;
    PruneConfig prune{};
    /// Cells already solved elsewhere (e.g. a resume cache). Consulted before
    /// computing a cell; a returned result is stored verbatim.
    std::function<std::optional<SearchResult>(KeyboardDims)> preset;
    /// Called after each newly computed cell, in deterministic cell order.
    std::function<void(const SearchResult&)> on_cell;
    /// Stop after computing this many new cells (the grid stays partial).
    std::uint64_t max_new_cells = std::numeric_limits<std::uint64_t>::max();
};

/// Solve every cell of the dimension grid. Cells are processed in wavefronts
/// of constant rows+cols so warm-start dependencies are always complete, and
/// in deterministic order within each wavefront. A completed grid is checked
/// for deviation monotonicity along both axes.
SweepGrid sweep(IntRange row_range, IntRange col_range, const SweepOptions& opt);
SweepGrid sweep(IntRange row_range, IntRange col_range, bool warm_start = true);

}  // namespace temper
