#include "temper/search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <thread>
#include <utility>

namespace temper {

namespace {

struct FamilyEntry {
    ConstraintSpec spec;
    double slope = 0.0;
    double x0 = 0.0;
    int j = 1;    ///< subinterval index of x0
    int reg = 0;  ///< octave register row of the approximation target
};

using Families = std::array<std::vector<FamilyEntry>, kHarmonics.size()>;

Families build_families(const KeyboardDims& dims) {
    if (!dims.valid())
        throw std::invalid_argument("keyboard must have rows >= 1 and cols >= 2");
    Families fams;
    for (std::size_t h = 0; h < kHarmonics.size(); ++h) {
        const int harmonic = kHarmonics[h];
        for (const ConstraintSpec& s : enumerate_family(harmonic, dims)) {
            const LinearConstraint c = constraint_from_spec(s);
            fams[h].push_back({s, c.slope, c.x_intercept,
                               subinterval_index(c.x_intercept), row_register(s)});
        }
        if (fams[h].empty())
            throw FamilyEmptyError(
                harmonic, "harmonic " + std::to_string(harmonic) +
                              " admits no spec on a " + std::to_string(dims.rows) +
                              "x" + std::to_string(dims.cols) + " keyboard");
    }
    return fams;
}

/// Tie-break key: prefer the smallest worst-case step count, then the
/// smallest octave translations, then the lexicographically least
/// (oct, subdiv) sequence in harmonic order.
struct TieKey {
    int max_subdiv = 0;
    int max_oct = 0;
    std::array<std::pair<int, int>, 5> entries{};

    friend auto operator<=>(const TieKey&, const TieKey&) = default;
};

TieKey key_of(const std::array<const FamilyEntry*, 5>& chosen) {
    TieKey k;
    for (int i = 0; i < 5; ++i) {
        const ConstraintSpec& s = chosen[i]->spec;
        k.max_subdiv = std::max(k.max_subdiv, std::abs(s.subdiv));
        k.max_oct = std::max(k.max_oct, std::abs(s.oct));
        k.entries[i] = {s.oct, s.subdiv};
    }
    return k;
}

/// Incumbent shared by both search strategies so that their tie-breaking is
/// identical by construction. `bound` is the best deviation seen so far; a
/// candidate within kTieTol of it is still examined and may replace the
/// incumbent when its key is smaller.
struct IncumbentTracker {
    struct Best {
        double deviation = 0.0;
        TieKey key;
        std::array<ConstraintSpec, 5> specs{};
        double x = 0.0;
    };

    double bound;
    std::optional<Best> best;

    explicit IncumbentTracker(double initial) : bound(initial) {}

    void offer(double dev, const TieKey& key,
               const std::array<const FamilyEntry*, 5>& chosen, double x) {
        if (dev > bound + kTieTol) return;
        if (!best || dev < best->deviation - kTieTol ||
            (std::abs(dev - best->deviation) <= kTieTol && key < best->key)) {
            Best b;
            b.deviation = dev;
            b.key = key;
            for (int i = 0; i < 5; ++i) b.specs[i] = chosen[i]->spec;
            b.x = x;
            best = b;
            bound = std::min(bound, dev);
        }
    }
};

/// Coarse scan of the generator axis: at each sample pick the closest spec of
/// every family, and keep the worst deviation whenever the five picks jointly
/// fit the keyboard. Yields an upper bound on the optimum, so seeding the
/// incumbent with it cannot change the search result.
double greedy_seed_bound(const Families& fams, const KeyboardDims& dims) {
    const double octave = detail::octave_cents();
    double best = std::numeric_limits<double>::infinity();
    for (double x = 0.5; x <= octave; x += 0.25) {
        double worst = 0.0;
        int reg_lo = 0, reg_hi = 0, sub_lo = 0, sub_hi = 0;
        for (const std::vector<FamilyEntry>& fam : fams) {
            double closest = std::numeric_limits<double>::infinity();
            const FamilyEntry* pick = nullptr;
            for (const FamilyEntry& e : fam) {
                const double d = std::abs(e.slope * (x - e.x0));
                if (d < closest) {
                    closest = d;
                    pick = &e;
                }
            }
            reg_lo = std::min(reg_lo, pick->reg);
            reg_hi = std::max(reg_hi, pick->reg);
            sub_lo = std::min(sub_lo, pick->spec.subdiv);
            sub_hi = std::max(sub_hi, pick->spec.subdiv);
            worst = std::max(worst, closest);
        }
        if (reg_hi - reg_lo <= dims.rows - 1 && sub_hi - sub_lo <= dims.cols &&
            worst < best)
            best = worst;
    }
    return best;
}

struct Searcher {
    const Families& fams;
    KeyboardDims dims;
    PruneConfig cfg;
    IncumbentTracker inc;
    std::uint64_t visited = 0;
    std::uint64_t pruned = 0;
    std::array<const FamilyEntry*, 5> chosen{};

    Searcher(const Families& f, const KeyboardDims& d, const PruneConfig& c,
             double initial_bound)
        : fams(f), dims(d), cfg(c), inc(initial_bound) {}

    void solve_leaf() {
        double slope[5], x0[5];
        for (int i = 0; i < 5; ++i) {
            slope[i] = chosen[i]->slope;
            x0[i] = chosen[i]->x0;
        }
        const detail::EnvelopeMin m = detail::min_envelope(slope, x0, 5);
        inc.offer(m.deviation, key_of(chosen), chosen, m.x);
    }

    /// Depth-first over families in harmonic order. [lo, hi] is the window of
    /// generators on which every chosen spec stays within the incumbent bound;
    /// intersecting it per spec is the partial minimax test in O(1).
    void dfs(int d, double lo, double hi, int reg_lo, int reg_hi, int sub_lo,
             int sub_hi) {
        for (const FamilyEntry& e : fams[d]) {
            const int nreg_lo = std::min(reg_lo, e.reg);
            const int nreg_hi = std::max(reg_hi, e.reg);
            if (nreg_hi - nreg_lo > dims.rows - 1) {
                ++pruned;
                continue;
            }
            const int nsub_lo = std::min(sub_lo, e.spec.subdiv);
            const int nsub_hi = std::max(sub_hi, e.spec.subdiv);
            if (nsub_hi - nsub_lo > dims.cols) {
                ++pruned;
                continue;
            }
            cfg.best_known = inc.bound + kTieTol;
            bool cut = false;
            for (int k = 0; k < d; ++k) {
                const FamilyEntry* c = chosen[k];
                if (detail::prune_pair_cached(c->j, c->slope, c->x0, e.j, e.slope,
                                              e.x0, cfg)) {
                    cut = true;
                    break;
                }
            }
            if (cut) {
                ++pruned;
                continue;
            }
            const double w = cfg.best_known / std::abs(e.slope);
            const double nlo = std::max(lo, e.x0 - w);
            const double nhi = std::min(hi, e.x0 + w);
            if (nlo > nhi) {
                ++pruned;
                continue;
            }
            ++visited;
            chosen[d] = &e;
            if (d == 4) {
                solve_leaf();
            } else {
                dfs(d + 1, nlo, nhi, nreg_lo, nreg_hi, nsub_lo, nsub_hi);
            }
        }
    }

    /// Exhaustive nested loops; only the structural keyboard-fit checks, no
    /// deviation-based cuts of any kind.
    void brute(int d, int reg_lo, int reg_hi, int sub_lo, int sub_hi) {
        for (const FamilyEntry& e : fams[d]) {
            const int nreg_lo = std::min(reg_lo, e.reg);
            const int nreg_hi = std::max(reg_hi, e.reg);
            if (nreg_hi - nreg_lo > dims.rows - 1) {
                ++pruned;
                continue;
            }
            const int nsub_lo = std::min(sub_lo, e.spec.subdiv);
            const int nsub_hi = std::max(sub_hi, e.spec.subdiv);
            if (nsub_hi - nsub_lo > dims.cols) {
                ++pruned;
                continue;
            }
            ++visited;
            chosen[d] = &e;
            if (d == 4) {
                solve_leaf();
            } else {
                brute(d + 1, nreg_lo, nreg_hi, nsub_lo, nsub_hi);
            }
        }
    }
};

SearchResult finish(const KeyboardDims& dims, const Searcher& s) {
    SearchResult r;
    r.dims = dims;
    r.best_specs.dims = dims;
    r.nodes_visited = s.visited;
    r.nodes_pruned = s.pruned;
    if (s.inc.best) {
        r.best_specs.specs.assign(s.inc.best->specs.begin(), s.inc.best->specs.end());
        MinimaxSolution sol = solve_system(r.best_specs);
        sol.exact = exact_form(sol, r.best_specs);
        r.best = std::move(sol);
    }
    return r;
}

}  // namespace

SearchResult backtracking_search(const KeyboardDims& dims, const SearchOptions& opt) {
    const Families fams = build_families(dims);
    double initial = opt.initial_bound;
    if (opt.greedy_seed)
        initial = std::min(initial, greedy_seed_bound(fams, dims));
    Searcher s(fams, dims, opt.prune, initial);
    s.dfs(0, 0.0, detail::octave_cents(), 0, 0, 0, 0);
    return finish(dims, s);
}

SearchResult backtracking_search(const KeyboardDims& dims, double initial_bound) {
    SearchOptions opt;
    opt.initial_bound = initial_bound;
    return backtracking_search(dims, opt);
}

SearchResult brute_force_search(const KeyboardDims& dims,
                                const BruteForceOptions& opt) {
    const Families fams = build_families(dims);
    double estimate = 1.0;
    for (const std::vector<FamilyEntry>& fam : fams)
        estimate *= static_cast<double>(fam.size());
    if (estimate > static_cast<double>(opt.budget)) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "brute force would solve about %.3g systems, over the "
                      "budget of %llu",
                      estimate, static_cast<unsigned long long>(opt.budget));
        throw BudgetExceededError(estimate, msg);
    }
    Searcher s(fams, dims, PruneConfig{},
               std::numeric_limits<double>::infinity());
    s.brute(0, 0, 0, 0, 0);
    return finish(dims, s);
}

SearchResult brute_force_search(const KeyboardDims& dims) {
    return brute_force_search(dims, BruteForceOptions{});
}

std::size_t SweepGrid::index_of(int rows, int cols) const {
    if (!row_range.contains(rows) || !col_range.contains(cols))
        throw std::out_of_range("cell " + std::to_string(rows) + "x" +
                                std::to_string(cols) + " outside the sweep grid");
    return static_cast<std::size_t>(rows - row_range.lo) *
               static_cast<std::size_t>(col_range.size()) +
           static_cast<std::size_t>(cols - col_range.lo);
}

bool SweepGrid::has(int rows, int cols) const {
    if (!row_range.contains(rows) || !col_range.contains(cols)) return false;
    return cells[index_of(rows, cols)].has_value();
}

const SearchResult& SweepGrid::at(int rows, int cols) const {
    const std::optional<SearchResult>& cell = cells[index_of(rows, cols)];
    if (!cell)
        throw std::out_of_range("cell " + std::to_string(rows) + "x" +
                                std::to_string(cols) + " not computed yet");
    return *cell;
}

bool SweepGrid::complete() const {
    for (const std::optional<SearchResult>& c : cells)
        if (!c) return false;
    return true;
}

namespace {

double warm_bound_from_neighbors(const SweepGrid& grid, const KeyboardDims& dims) {
    double bound = std::numeric_limits<double>::infinity();
    if (grid.has(dims.rows - 1, dims.cols)) {
        const SearchResult& up = grid.at(dims.rows - 1, dims.cols);
        if (up.best) bound = std::min(bound, up.best->deviation);
    }
    if (grid.has(dims.rows, dims.cols - 1)) {
        const SearchResult& left = grid.at(dims.rows, dims.cols - 1);
        if (left.best) bound = std::min(bound, left.best->deviation);
    }
    return bound;
}

void check_monotonic(const SweepGrid& grid) {
    for (int r = grid.row_range.lo; r <= grid.row_range.hi; ++r) {
        for (int c = grid.col_range.lo; c <= grid.col_range.hi; ++c) {
            const SearchResult& cell = grid.at(r, c);
            if (!cell.best) continue;
            for (const auto& [nr, nc] :
                 {std::pair{r - 1, c}, std::pair{r, c - 1}}) {
                if (!grid.has(nr, nc)) continue;
                const SearchResult& smaller = grid.at(nr, nc);
                if (!smaller.best) continue;
                if (cell.best->deviation >
                    smaller.best->deviation + kDeviationTol) {
                    char msg[160];
                    std::snprintf(msg, sizeof msg,
                                  "deviation grew from %.9g at %dx%d to %.9g "
                                  "at %dx%d; a larger keyboard can never do "
                                  "worse",
                                  smaller.best->deviation, nr, nc,
                                  cell.best->deviation, r, c);
                    throw std::logic_error(msg);
                }
            }
        }
    }
}

}  // namespace

SweepGrid sweep(IntRange row_range, IntRange col_range, const SweepOptions& opt) {
    if (row_range.size() < 1 || col_range.size() < 1)
        throw std::invalid_argument("sweep ranges must be nonempty");
    if (row_range.lo < 1 || col_range.lo < 2)
        throw std::invalid_argument("sweep needs rows >= 1 and cols >= 2");
    SweepGrid grid;
    grid.row_range = row_range;
    grid.col_range = col_range;
    grid.cells.assign(static_cast<std::size_t>(row_range.size()) *
                          static_cast<std::size_t>(col_range.size()),
                      std::nullopt);

    std::uint64_t remaining = opt.max_new_cells;
    bool out_of_quota = false;
    // Anti-diagonal wavefronts: every cell's up and left neighbors lie on the
    // previous wavefront, so warm starts never race with in-flight work and
    // any thread count gives identical results.
    for (int diag = row_range.lo + col_range.lo;
         diag <= row_range.hi + col_range.hi && !out_of_quota; ++diag) {
        std::vector<KeyboardDims> todo;
        for (int r = row_range.lo; r <= row_range.hi; ++r) {
            const int c = diag - r;
            if (!col_range.contains(c)) continue;
            const KeyboardDims dims{r, c};
            if (opt.preset) {
                if (std::optional<SearchResult> pre = opt.preset(dims)) {
                    grid.cells[grid.index_of(r, c)] = std::move(*pre);
                    continue;
                }
            }
            todo.push_back(dims);
        }
        if (todo.size() > remaining) {
            todo.resize(static_cast<std::size_t>(remaining));
            out_of_quota = true;
        }
        remaining -= todo.size();
        if (todo.empty()) continue;

        std::vector<SearchResult> results(todo.size());
        auto run_chunk = [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                SearchOptions cell_opt;
                cell_opt.prune = opt.prune;
                if (opt.warm_start)
                    cell_opt.initial_bound = warm_bound_from_neighbors(grid, todo[i]);
                results[i] = backtracking_search(todo[i], cell_opt);
            }
        };
        const int workers =
            std::clamp(opt.parallelism, 1, static_cast<int>(todo.size()));
        if (workers <= 1) {
            run_chunk(0, todo.size());
        } else {
            std::vector<std::thread> pool;
            const std::size_t per = (todo.size() + workers - 1) / workers;
            for (int w = 0; w < workers; ++w) {
                const std::size_t b = static_cast<std::size_t>(w) * per;
                const std::size_t e = std::min(todo.size(), b + per);
                if (b >= e) break;
                pool.emplace_back(run_chunk, b, e);
            }
            for (std::thread& t : pool) t.join();
        }
        for (std::size_t i = 0; i < todo.size(); ++i) {
            const KeyboardDims dims = todo[i];
            grid.cells[grid.index_of(dims.rows, dims.cols)] = std::move(results[i]);
            if (opt.on_cell) opt.on_cell(grid.at(dims.rows, dims.cols));
        }
    }

    if (grid.complete()) check_monotonic(grid);
    return grid;
}

SweepGrid sweep(IntRange row_range, IntRange col_range, bool warm_start) {
    SweepOptions opt;
    opt.warm_start = warm_start;
    return sweep(row_range, col_range, opt);
}

}  // namespace temper
