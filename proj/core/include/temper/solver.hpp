#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "temper/model.hpp"

namespace temper {

/// A set of 1..5 constraint specs, at most one per harmonic, kept in
/// kHarmonics order. `dims` records which keyboard the system was built for.
struct ConstraintSystem {
    std::vector<ConstraintSpec> specs;
    std::optional<KeyboardDims> dims;
};

/// Result of minimizing F(x) = max_i |slope_i * (x - intercept_i)| over
/// x in (0, 1200].
struct MinimaxSolution {
    double x = 0.0;              ///< optimal generator, cents
    double deviation = 0.0;      ///< minimax value F(x), cents
    std::vector<double> per_harmonic;  ///< signed deviation of each constraint at x
    /// Indices (into the system) of two constraints attaining the optimum;
    /// absent for single-constraint systems.
    std::optional<std::pair<int, int>> active_pair;
    std::optional<ExactGenerator> exact;
};

/// Closed-form minimax of two constraints. Coincident intercepts give that
/// intercept with deviation zero.
MinimaxSolution solve_pair(const LinearConstraint& c1, const LinearConstraint& c2);

/// Global minimax of a 1..5 constraint system. The objective is convex and
/// piecewise linear, so the optimum lies at a pairwise balance point, at an
/// intercept, or at the octave boundary; all candidates are enumerated.
/// Throws std::invalid_argument for an empty system.
MinimaxSolution solve_system(const ConstraintSystem& sys);

/// Exact closed form of the optimal generator, derived from the active pair:
/// x = 1200*log2(Q)/(s1 - sigma*s2) with Q built from the two specs' harmonic
/// ratios, canonicalized via reduced_generator. Single-constraint systems
/// yield the intercept's own ratio.
ExactGenerator exact_form(const MinimaxSolution& sol, const ConstraintSystem& sys);

namespace detail {

/// Hot-path minimax over parallel slope/intercept arrays (no allocation).
struct EnvelopeMin {
    double x = 0.0;
    double deviation = 0.0;
};
EnvelopeMin min_envelope(const double* slope, const double* x0, int n);

}  // namespace detail

}  // namespace temper
