#include "temper/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace temper {

namespace detail {

EnvelopeMin min_envelope(const double* slope, const double* x0, int n) {
    const double octave = octave_cents();
    // Candidates: the octave boundary, every intercept, and every pairwise
    // balance point (|m1| x1 + |m2| x2)/(|m1| + |m2|), which is where two
    // reflected lines cross between their intercepts. Convexity puts the
    // global minimum at one of these.
    double cand[17];
    int nc = 0;
    cand[nc++] = octave;
    for (int i = 0; i < n; ++i) cand[nc++] = x0[i];
    for (int i = 0; i < n; ++i) {
        const double a1 = std::abs(slope[i]);
        for (int j = i + 1; j < n; ++j) {
            const double a2 = std::abs(slope[j]);
            cand[nc++] = (a1 * x0[i] + a2 * x0[j]) / (a1 + a2);
        }
    }
    auto eval = [&](double x) {
        double f = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = std::abs(slope[i] * (x - x0[i]));
            if (d > f) f = d;
        }
        return f;
    };
    double best_f = std::numeric_limits<double>::infinity();
    double best_x = octave;
    for (int i = 0; i < nc; ++i) {
        const double x = cand[i];
        if (!(x > 0.0) || x > octave) continue;
        const double f = eval(x);
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
    }
    // Nonzero slopes make the envelope strictly V-shaped at its minimum, so
    // flat optimal segments cannot occur; the midpoint rule below is a
    // defensive tie-break only.
    double lo = best_x, hi = best_x;
    for (int i = 0; i < nc; ++i) {
        const double x = cand[i];
        if (!(x > 0.0) || x > octave) continue;
        if (eval(x) <= best_f + 1e-12) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    if (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = eval(mid);
        if (fm <= best_f + 1e-12) return {mid, fm};
    }
    return {best_x, best_f};
}

}  // namespace detail

namespace {

MinimaxSolution finish_solution(const double* slope, const double* x0, int n,
                                detail::EnvelopeMin m) {
    MinimaxSolution sol;
    sol.x = m.x;
    sol.deviation = m.deviation;
    sol.per_harmonic.resize(n);
    for (int i = 0; i < n; ++i) sol.per_harmonic[i] = slope[i] * (m.x - x0[i]);
    if (n >= 2) {
        int first = -1, second = -1;
        for (int i = 0; i < n; ++i) {
            if (std::abs(std::abs(sol.per_harmonic[i]) - m.deviation) < 1e-7) {
                if (first < 0) {
                    first = i;
                } else if (second < 0) {
                    second = i;
                }
            }
        }
        if (first >= 0 && second >= 0) sol.active_pair = {first, second};
    }
    return sol;
}

}  // namespace

MinimaxSolution solve_pair(const LinearConstraint& c1, const LinearConstraint& c2) {
    const double slope[2] = {c1.slope, c2.slope};
    const double x0[2] = {c1.x_intercept, c2.x_intercept};
    return finish_solution(slope, x0, 2, detail::min_envelope(slope, x0, 2));
}

MinimaxSolution solve_system(const ConstraintSystem& sys) {
    const int n = static_cast<int>(sys.specs.size());
    if (n == 0) throw std::invalid_argument("cannot solve an empty system");
    if (n > 5) throw std::invalid_argument("at most one spec per harmonic");
    double slope[5], x0[5];
    int seen = 0;
    for (int i = 0; i < n; ++i) {
        const int bit = 1 << harmonic_index(sys.specs[i].harmonic);
        if (seen & bit) throw std::invalid_argument("at most one spec per harmonic");
        seen |= bit;
        const LinearConstraint c = constraint_from_spec(sys.specs[i]);
        slope[i] = c.slope;
        x0[i] = c.x_intercept;
    }
    return finish_solution(slope, x0, n, detail::min_envelope(slope, x0, n));
}

namespace {

struct Rational {
    std::int64_t num;
    std::int64_t den;
};

// harmonic * 2^oct as an exact rational.
Rational harmonic_ratio(int harmonic, int oct) {
    Rational r{harmonic, 1};
    if (oct >= 0) {
        r.num <<= oct;
    } else {
        r.den <<= -oct;
    }
    return r;
}

}  // namespace

ExactGenerator exact_form(const MinimaxSolution& sol, const ConstraintSystem& sys) {
    if (sys.specs.empty()) throw std::invalid_argument("empty system");
    if (!sol.active_pair) {
        const ConstraintSpec& s = sys.specs.front();
        const Rational r = harmonic_ratio(s.harmonic, s.oct);
        return reduced_generator(r.num, r.den, s.subdiv);
    }
    const auto [i, j] = *sol.active_pair;
    const ConstraintSpec& a = sys.specs.at(i);
    const ConstraintSpec& b = sys.specs.at(j);
    // Balance a's line against b's reflection (or itself, by slope signs):
    // s1*(x - x01) = sigma * s2*(x - x02) solves to x = 1200*log2(Q)/d.
    const int sigma = ((a.subdiv > 0) != (b.subdiv > 0)) ? 1 : -1;
    std::int64_t d = a.subdiv - static_cast<std::int64_t>(sigma) * b.subdiv;
    const Rational ra = harmonic_ratio(a.harmonic, a.oct);
    const Rational rb = harmonic_ratio(b.harmonic, b.oct);
    std::int64_t num, den;
    if (sigma > 0) {
        num = ra.num * rb.den;
        den = ra.den * rb.num;
    } else {
        num = ra.num * rb.num;
        den = ra.den * rb.den;
    }
    if (d < 0) {
        std::swap(num, den);
        d = -d;
    }
    return reduced_generator(num, den, d);
}

}  // namespace temper
