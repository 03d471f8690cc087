#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <vector>

namespace temper {

/// The odd harmonics whose approximation quality defines a temperament,
/// in canonical (search) order. Even harmonics are redundant: harmonic 2h
/// at octave shift t sounds identical to harmonic h at shift t+1.
inline constexpr std::array<int, 5> kHarmonics{3, 5, 7, 9, 11};

/// Absolute tolerance for comparing deviations (cents).
inline constexpr double kDeviationTol = 1e-6;

/// Tolerance under which two candidate optima count as tied (cents).
inline constexpr double kTieTol = 1e-9;

bool is_valid_harmonic(int value);

/// Position of `value` in kHarmonics. Throws std::invalid_argument otherwise.
int harmonic_index(int value);

/// floor(log2(n)) for n >= 1.
int floor_log2(int n);

namespace detail {
/// The size of the octave in cents (1200). Returned by reference so test
/// harnesses can perturb it and prove the verification machinery notices.
double& octave_cents();
}  // namespace detail

/// Interval between two frequencies in cents: 1200*log2(f2/f1).
/// Throws std::domain_error for nonpositive frequencies.
double cents(double f1, double f2);

/// Cents value of the rational frequency ratio num/den.
double ratio_cents(std::int64_t num, std::int64_t den);

/// Keyboard size: `rows` octave rows by `cols` keys per row.
struct KeyboardDims {
    int rows = 1;
    int cols = 2;

    bool valid() const { return rows >= 1 && cols >= 2; }
    friend bool operator==(const KeyboardDims&, const KeyboardDims&) = default;
};

/// One choice of approximation for a harmonic: translate it by `oct` octaves,
/// then approach it with `subdiv` steps of the generator (negative = downward).
struct ConstraintSpec {
    int harmonic = 3;
    int oct = 0;
    int subdiv = 1;

    friend bool operator==(const ConstraintSpec&, const ConstraintSpec&) = default;
    friend auto operator<=>(const ConstraintSpec&, const ConstraintSpec&) = default;
};

/// The signed approximation error of a spec as a line in the generator x:
/// deviation(x) = slope * (x - x_intercept).
struct LinearConstraint {
    double slope = 0.0;
    double x_intercept = 0.0;
};

/// Octave row occupied by the spec's approximation target, relative to the
/// fundamental's row: oct + floor(log2(harmonic)).
int row_register(const ConstraintSpec& s);

/// Derive the deviation line of a spec. The intercept is
/// 1200*(log2(harmonic) + oct)/subdiv and must land in (0, 1200];
/// anything else throws std::domain_error.
LinearConstraint constraint_from_spec(const ConstraintSpec& s);

/// True when the spec's intercept lands in (0, 1200] (no throw).
bool spec_in_range(const ConstraintSpec& s);

/// Signed deviation of the constraint at generator x: slope * (x - x_intercept).
double deviation_at(const LinearConstraint& c, double x);

/// All specs for one harmonic that can be realized on `dims`:
/// |subdiv| <= cols, |oct + floor(log2 h)| <= rows-1, intercept in (0, 1200],
/// and slope magnitude at least slope_lower_bound(intercept). Sorted by
/// |subdiv| ascending, then oct ascending. Whether a *set* of specs fits the
/// keyboard jointly (combined step and row spans) is checked by the search.
std::vector<ConstraintSpec> enumerate_family(int harmonic, const KeyboardDims& dims);

/// Index j of the octave subinterval [1200/(j+1), 1200/j) containing x0;
/// x0 = 1200 maps to j = 1. Throws std::domain_error outside (0, 1200].
int subinterval_index(double x0);

struct PitchClassDistance {
    int oct = 0;
    double distance = 0.0;  // signed cents
};

/// Octave translation bringing the harmonic nearest the fundamental, and the
/// resulting signed distance (always within +-600 cents).
PitchClassDistance pitch_class_distance(int harmonic);

/// A generator expressed exactly as (base_num/base_den)^(1/root), always
/// canonical: the ratio is reduced and > 1, root > 0, and perfect-power
/// content is folded into the root (e.g. 8^(1/6) is stored as 2^(1/2)).
struct ExactGenerator {
    std::int64_t base_num = 2;
    std::int64_t base_den = 1;
    std::int64_t root = 1;

    double cents_value() const;
    friend bool operator==(const ExactGenerator&, const ExactGenerator&) = default;
    friend auto operator<=>(const ExactGenerator&, const ExactGenerator&) = default;
};

/// Canonicalize (num/den)^(1/root). A negative root inverts the ratio.
/// Throws std::domain_error when the value would be <= 1 (cents value <= 0).
ExactGenerator reduced_generator(std::int64_t num, std::int64_t den, std::int64_t root);

}  // namespace temper
