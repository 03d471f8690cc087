#pragma once

#include <limits>

#include "temper/model.hpp"

namespace temper {

/// Parameters of the pair-pruning rules.
struct PruneConfig {
    /// The subinterval-gap rule is only trusted for pairs whose smaller
    /// subinterval index is at most this (the certified enumeration range).
    int max_subinterval = 100;
    /// Minimum subinterval gap for the gap rule.
    int gap_cutoff = 4;
    /// Certified lower bound on the pair deviation at gap_cutoff within the
    /// certified range; see verify_fact_constant.
    double cutoff_deviation = 4.268;
    /// Current incumbent deviation (cents); +inf before any system is solved.
    double best_known = std::numeric_limits<double>::infinity();
};

/// Least slope magnitude usable at intercept x0: steps of size <= x0 must
/// reach the nearest pitch-class representative, at least 203.910 cents away,
/// so |slope| >= ceil(203.910.../x0). Tolerant of inputs rounded to a few
/// decimals. Throws std::domain_error outside (0, 1200].
int slope_lower_bound(double x0);

/// Lower bound on the minimax deviation of two constraints lying k
/// subintervals apart, the nearer in subinterval j, with slopes m1, m2:
/// 1200 * (|m1||m2|/(|m1|+|m2|)) * (k-1)/((j+1)(j+k)). Zero for k <= 1.
double pair_deviation_lower_bound(int j, int k, int m1, int m2);

/// Recompute the certified gap-rule constant: the minimum exact pair
/// deviation over all realizable constraint pairs (distinct harmonics, the
/// 15x100 enumeration universe) whose subinterval gap is at least 4 and whose
/// nearer subinterval index is at most max_j. Must come out >= 4.268 for
/// max_j = 100.
double verify_fact_constant(int max_j);

/// True when the pair provably cannot beat cfg.best_known: either by the
/// subinterval-gap rule (only applied while the incumbent is below
/// cfg.cutoff_deviation and the pair is inside the certified range), or
/// because the pair's exact minimax deviation already exceeds the incumbent.
bool should_prune_pair(const ConstraintSpec& s1, const ConstraintSpec& s2,
                       const PruneConfig& cfg);

namespace detail {

/// Exact minimax deviation of two constraints (the closed form used by
/// solve_pair): |m1||m2||x01 - x02| / (|m1|+|m2|).
double exact_pair_deviation(double m1, double x01, double m2, double x02);

/// should_prune_pair on precomputed per-spec data (search hot path).
bool prune_pair_cached(int j1, double m1, double x01, int j2, double m2,
                       double x02, const PruneConfig& cfg);

}  // namespace detail

}  // namespace temper
