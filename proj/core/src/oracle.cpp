#include "temper/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "temper/model.hpp"

namespace temper {

double nint_distance(double t) { return std::abs(t - std::round(t)); }

namespace {

void check_width(int width) {
    if (width < 1) throw std::domain_error("width must be >= 1");
}

}  // namespace

double objective(double r, int width) {
    check_width(width);
    double worst = 0.0;
    for (const int h : kHarmonics) {
        const double l2 = std::log2(static_cast<double>(h));
        double best = nint_distance(l2);
        for (int k = 1; k <= width; ++k) {
            best = std::min(best, nint_distance(l2 - k * r));
            best = std::min(best, nint_distance(l2 + k * r));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

int rows_needed(double r, int width) {
    check_width(width);
    int reg_lo = 0, reg_hi = 0;
    for (const int h : kHarmonics) {
        const double l2 = std::log2(static_cast<double>(h));
        // Scan k by growing magnitude, positive first, keeping the first
        // strict improvement, so ties go to the fewest (then upward) steps.
        double best = nint_distance(l2);
        int best_k = 0;
        for (int a = 1; a <= width; ++a) {
            for (const int k : {a, -a}) {
                const double d = nint_distance(l2 - k * r);
                if (d < best - 1e-15) {
                    best = d;
                    best_k = k;
                }
            }
        }
        const long long m = std::llround(l2 - best_k * r);
        const int reg = floor_log2(h) - static_cast<int>(m);
        reg_lo = std::min(reg_lo, reg);
        reg_hi = std::max(reg_hi, reg);
    }
    return reg_hi - reg_lo + 1;
}

double oracle_interval_lo(int width) {
    if (width < 2) throw std::domain_error("interval needs width >= 2");
    // The optimal generator must stretch the widest pitch-class spread
    // (from harmonic 3 down to harmonic 11 up, log2(11/6) octaves) across at
    // most width-1 step increments.
    return std::log2(11.0 / 6.0) / (width - 1);
}

OracleResult optimize(int width, double resolution) {
    if (width < 2) throw std::domain_error("optimize needs width >= 2");
    const double lo = oracle_interval_lo(width);
    const double hi = 1.0;
    double step = resolution > 0.0 ? resolution : (hi - lo) / 1e6;
    std::vector<std::pair<double, double>> windows{{lo, hi}};
    std::vector<double> xs, vs;
    for (int stage = 0; stage < 3; ++stage) {
        if (stage > 0) step /= 100.0;
        double total = 0.0;
        for (const auto& [a, b] : windows) total += b - a;
        // Work cap; enlarging the step here only loosens the reported
        // accuracy, never the containment guarantee.
        if (total / step > 5e6) step = total / 5e6;
        xs.clear();
        vs.clear();
        for (const auto& [a, b] : windows) {
            const long long n = std::max<long long>(
                8, static_cast<long long>(std::ceil((b - a) / step)) + 1);
            for (long long i = 0; i < n; ++i) {
                const double x =
                    a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
                xs.push_back(x);
                vs.push_back(objective(x, width));
            }
        }
        if (stage == 2) break;
        // The objective is width-Lipschitz, so the minimum lies within step
        // of some sample no worse than vmin + width*step; keep every such
        // sample's neighborhood, merging near neighbors into windows.
        const double vmin = *std::min_element(vs.begin(), vs.end());
        const double keep_below = vmin + width * step;
        windows.clear();
        double start = 0.0, prev = 0.0;
        bool open = false;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (vs[i] > keep_below) continue;
            if (!open) {
                start = prev = xs[i];
                open = true;
                continue;
            }
            if (xs[i] - prev > 2.5 * step) {
                windows.emplace_back(std::max(lo, start - step),
                                     std::min(hi, prev + step));
                start = xs[i];
            }
            prev = xs[i];
        }
        windows.emplace_back(std::max(lo, start - step), std::min(hi, prev + step));
    }
    const double vmin = *std::min_element(vs.begin(), vs.end());
    std::size_t pick = 0;
    while (vs[pick] > vmin + 1e-15) ++pick;  // samples ascend in r
    OracleResult res;
    res.width = width;
    res.r_star = xs[pick];
    res.deviation = detail::octave_cents() * vs[pick];
    res.rows_needed = rows_needed(xs[pick], width);
    res.accuracy = detail::octave_cents() * width * step;
    res.interval_lo = lo;
    res.interval_hi = hi;
    return res;
}

}  // namespace temper
