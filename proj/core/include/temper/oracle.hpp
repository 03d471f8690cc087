#pragma once

namespace temper {

/// Optimum of the width-constrained, row-unbounded objective.
struct OracleResult {
    int width = 2;            ///< keyboard width n
    double r_star = 0.0;      ///< normalized generator (octave = 1)
    double deviation = 0.0;   ///< cents
    int rows_needed = 1;      ///< rows required to realize r_star's approximations
    double accuracy = 0.0;    ///< guaranteed bound on the deviation error, cents
    double interval_lo = 0.0; ///< search interval in normalized units
    double interval_hi = 1.0;
};

/// Distance from t to the nearest integer, in [0, 0.5].
double nint_distance(double t);

/// Row-unbounded deviation at normalized generator r on a width-n keyboard:
/// max over harmonics of min over |k| <= width of nint_distance(log2 N - k*r),
/// in octave units (multiply by 1200 for cents).
double objective(double r, int width);

/// Octave rows spanned by the best approximations at r: for each harmonic
/// take the deviation-minimizing step count k (ties to smaller |k|, then
/// positive k) and its nearest-integer octave m; count the distinct octave
/// registers floor(log2 N) - m together with row 0.
int rows_needed(double r, int width);

/// Minimize objective(., width) over the proven interval
/// [log2(11/6)/(width-1), 1] by uniform scan plus two 100x refinements of
/// every cell that could still contain the minimum. `resolution` is the
/// initial step (<= 0 picks interval/1e6). Ties resolve to the smaller r.
/// The reported accuracy is the Lipschitz bound 1200*width*final_step.
OracleResult optimize(int width, double resolution = 0.0);

/// Lower end of the admissible normalized-generator interval for a width.
double oracle_interval_lo(int width);

}  // namespace temper
