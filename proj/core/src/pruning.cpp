#include "temper/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace temper {

int slope_lower_bound(double x0) {
    const double octave = detail::octave_cents();
    if (!(x0 > 0.0) || x0 > octave)
        throw std::domain_error("slope_lower_bound needs x0 in (0, 1200]");
    const double min_step = octave * std::log2(9.0 / 8.0);
    // The 1e-7 slack keeps exact divisions stable and accepts intercepts that
    // were rounded to a few decimals before being passed in.
    const int b = static_cast<int>(std::ceil(min_step / x0 - 1e-7));
    return std::max(b, 1);
}

double pair_deviation_lower_bound(int j, int k, int m1, int m2) {
    if (j < 1) throw std::domain_error("subinterval index must be >= 1");
    if (m1 == 0 || m2 == 0) throw std::domain_error("slopes must be nonzero");
    if (k <= 1) return 0.0;
    const double u1 = std::abs(m1), u2 = std::abs(m2);
    const double harmonic_mean_half = u1 * u2 / (u1 + u2);
    return detail::octave_cents() * harmonic_mean_half * (k - 1) /
           (static_cast<double>(j + 1) * (j + k));
}

namespace detail {

double exact_pair_deviation(double m1, double x01, double m2, double x02) {
    const double u1 = std::abs(m1), u2 = std::abs(m2);
    return u1 * u2 * std::abs(x01 - x02) / (u1 + u2);
}

bool prune_pair_cached(int j1, double m1, double x01, int j2, double m2,
                       double x02, const PruneConfig& cfg) {
    const int gap = std::abs(j1 - j2);
    if (cfg.best_known < cfg.cutoff_deviation &&
        std::min(j1, j2) <= cfg.max_subinterval && gap >= cfg.gap_cutoff) {
        return true;
    }
    return exact_pair_deviation(m1, x01, m2, x02) > cfg.best_known;
}

}  // namespace detail

bool should_prune_pair(const ConstraintSpec& s1, const ConstraintSpec& s2,
                       const PruneConfig& cfg) {
    const LinearConstraint c1 = constraint_from_spec(s1);
    const LinearConstraint c2 = constraint_from_spec(s2);
    return detail::prune_pair_cached(subinterval_index(c1.x_intercept), c1.slope,
                                     c1.x_intercept, subinterval_index(c2.x_intercept),
                                     c2.slope, c2.x_intercept, cfg);
}

double verify_fact_constant(int max_j) {
    if (max_j < 1) throw std::domain_error("max_j must be >= 1");
    const PruneConfig defaults{};
    // The constant certifies pairs drawn from the full enumeration universe,
    // the 15x100 keyboard.
    const KeyboardDims universe{15, 100};
    struct Entry {
        double slope;
        double x0;
        int j;
        int harmonic;
    };
    std::vector<Entry> entries;
    for (int h : kHarmonics) {
        for (const ConstraintSpec& s : enumerate_family(h, universe)) {
            const double x0 = constraint_from_spec(s).x_intercept;
            entries.push_back({static_cast<double>(s.subdiv), x0,
                               subinterval_index(x0), h});
        }
    }
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = entries.size();
    for (std::size_t a = 0; a < n; ++a) {
        const Entry& ea = entries[a];
        for (std::size_t b = a + 1; b < n; ++b) {
            const Entry& eb = entries[b];
            if (ea.harmonic == eb.harmonic) continue;
            if (std::min(ea.j, eb.j) > max_j) continue;
            if (std::abs(ea.j - eb.j) < defaults.gap_cutoff) continue;
            const double dev =
                detail::exact_pair_deviation(ea.slope, ea.x0, eb.slope, eb.x0);
            if (dev < best) best = dev;
        }
    }
    return best;
}

}  // namespace temper
