#include "temper/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "temper/pruning.hpp"

namespace temper {

namespace detail {

double& octave_cents() {
    static double octave = 1200.0;
    return octave;
}

}  // namespace detail

bool is_valid_harmonic(int value) {
    return value >= 3 && value <= 11 && value % 2 == 1;
}

int harmonic_index(int value) {
    for (std::size_t i = 0; i < kHarmonics.size(); ++i) {
        if (kHarmonics[i] == value) return static_cast<int>(i);
    }
    throw std::invalid_argument("harmonic must be odd and in [3, 11], got " +
                                std::to_string(value));
}

int floor_log2(int n) {
    if (n < 1) throw std::domain_error("floor_log2 needs n >= 1");
    int r = 0;
    while (n >= 2) {
        n >>= 1;
        ++r;
    }
    return r;
}

double cents(double f1, double f2) {
    if (!(f1 > 0.0) || !(f2 > 0.0))
        throw std::domain_error("frequencies must be positive");
    return detail::octave_cents() * std::log2(f2 / f1);
}

double ratio_cents(std::int64_t num, std::int64_t den) {
    if (num <= 0 || den <= 0)
        throw std::domain_error("ratio terms must be positive");
    return detail::octave_cents() *
           std::log2(static_cast<double>(num) / static_cast<double>(den));
}

int row_register(const ConstraintSpec& s) {
    return s.oct + floor_log2(s.harmonic);
}

namespace {

double intercept_of(int harmonic, int oct, int subdiv) {
    return detail::octave_cents() *
           (std::log2(static_cast<double>(harmonic)) + oct) / subdiv;
}

}  // namespace

LinearConstraint constraint_from_spec(const ConstraintSpec& s) {
    harmonic_index(s.harmonic);
    if (s.subdiv == 0) throw std::domain_error("subdiv must be nonzero");
    const double x0 = intercept_of(s.harmonic, s.oct, s.subdiv);
    if (!(x0 > 0.0) || x0 > detail::octave_cents())
        throw std::domain_error("spec intercept " + std::to_string(x0) +
                                " outside (0, 1200]");
    return {static_cast<double>(s.subdiv), x0};
}

bool spec_in_range(const ConstraintSpec& s) {
    if (!is_valid_harmonic(s.harmonic) || s.subdiv == 0) return false;
    const double x0 = intercept_of(s.harmonic, s.oct, s.subdiv);
    return x0 > 0.0 && x0 <= detail::octave_cents();
}

double deviation_at(const LinearConstraint& c, double x) {
    return c.slope * (x - c.x_intercept);
}

std::vector<ConstraintSpec> enumerate_family(int harmonic, const KeyboardDims& dims) {
    harmonic_index(harmonic);
    std::vector<ConstraintSpec> out;
    if (!dims.valid()) return out;
    const int flog = floor_log2(harmonic);
    // |oct + flog| <= rows-1 keeps the approximation within reach of the rows.
    for (int oct = -(dims.rows - 1) - flog; oct <= dims.rows - 1 - flog; ++oct) {
        for (int subdiv = -dims.cols; subdiv <= dims.cols; ++subdiv) {
            if (subdiv == 0) continue;
            ConstraintSpec s{harmonic, oct, subdiv};
            if (!spec_in_range(s)) continue;
            const double x0 = intercept_of(harmonic, oct, subdiv);
            if (std::abs(subdiv) < slope_lower_bound(x0)) continue;
            out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end(), [](const ConstraintSpec& a, const ConstraintSpec& b) {
        const int aa = std::abs(a.subdiv), ab = std::abs(b.subdiv);
        if (aa != ab) return aa < ab;
        return a.oct < b.oct;
    });
    return out;
}

int subinterval_index(double x0) {
    const double octave = detail::octave_cents();
    if (!(x0 > 0.0) || x0 > octave)
        throw std::domain_error("subinterval_index needs x0 in (0, 1200]");
    // j < 1200/x0 <= j+1; the epsilon keeps exact divisions (x0 = 1200/q)
    // from drifting up a slot.
    const int j = static_cast<int>(std::ceil(octave / x0 - 1e-9)) - 1;
    return std::max(j, 1);
}

PitchClassDistance pitch_class_distance(int harmonic) {
    harmonic_index(harmonic);
    const double l2 = std::log2(static_cast<double>(harmonic));
    const int oct = -static_cast<int>(std::llround(l2));
    return {oct, detail::octave_cents() * (l2 + oct)};
}

double ExactGenerator::cents_value() const {
    return detail::octave_cents() *
           std::log2(static_cast<double>(base_num) / static_cast<double>(base_den)) /
           static_cast<double>(root);
}

namespace {

// Largest integer a with a^r == v, assuming v is a perfect r-th power.
std::int64_t exact_iroot(std::int64_t v, std::int64_t r) {
    if (r == 1 || v == 1) return v;
    auto ipow = [](std::int64_t b, std::int64_t e) {
        std::int64_t acc = 1;
        while (e-- > 0) acc *= b;
        return acc;
    };
    std::int64_t a = static_cast<std::int64_t>(
        std::llround(std::pow(static_cast<double>(v), 1.0 / static_cast<double>(r))));
    if (a < 1) a = 1;
    while (ipow(a, r) < v) ++a;
    while (ipow(a, r) > v) --a;
    return a;
}

// gcd of all prime exponents of n (0 for n == 1).
std::int64_t exponent_gcd(std::int64_t n, std::int64_t acc) {
    int e2 = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++e2;
    }
    if (e2 > 0) acc = std::gcd(acc, static_cast<std::int64_t>(e2));
    for (std::int64_t p = 3; p * p <= n; p += 2) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0) acc = std::gcd(acc, static_cast<std::int64_t>(e));
        if (acc == 1) return 1;
    }
    if (n > 1) acc = std::gcd(acc, std::int64_t{1});
    return acc;
}

}  // namespace

ExactGenerator reduced_generator(std::int64_t num, std::int64_t den, std::int64_t root) {
    if (num <= 0 || den <= 0 || root == 0)
        throw std::domain_error("generator ratio terms must be positive, root nonzero");
    const std::int64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
    if (root < 0) {
        std::swap(num, den);
        root = -root;
    }
    if (num <= den)
        throw std::domain_error("generator ratio must exceed 1 after normalization");
    // Fold perfect-power content of the ratio into the root.
    std::int64_t s0 = exponent_gcd(num, 0);
    s0 = exponent_gcd(den, s0);
    if (s0 == 0) s0 = 1;
    const std::int64_t shared = std::gcd(s0, root);
    if (shared > 1) {
        const std::int64_t a = exact_iroot(num, s0);
        const std::int64_t b = exact_iroot(den, s0);
        const std::int64_t e = s0 / shared;
        auto ipow = [](std::int64_t v, std::int64_t k) {
            std::int64_t acc = 1;
            while (k-- > 0) acc *= v;
            return acc;
        };
        num = ipow(a, e);
        den = ipow(b, e);
        root /= shared;
    }
    return {num, den, root};
}

}  // namespace temper
