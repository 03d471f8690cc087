#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "record_io.hpp"

#include <temper/analysis.hpp>
#include <temper/model.hpp>
#include <temper/oracle.hpp>
#include <temper/pruning.hpp>
#include <temper/search.hpp>
#include <temper/solver.hpp>
#include <temper/version.hpp>

namespace {

using nlohmann::json;
using namespace temper;

// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

void fail(const std::string& msg) {
    std::fprintf(stderr, "error: %s\n", msg.c_str());
}

bool parse_range(const std::string& text, IntRange& out) {
    const std::size_t colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            out.lo = out.hi = std::stoi(text);
        } else {
            out.lo = std::stoi(text.substr(0, colon));
            out.hi = std::stoi(text.substr(colon + 1));
        }
    } catch (const std::exception&) {
        return false;
    }
    return out.hi >= out.lo;
}

json specs_to_json(const std::vector<ConstraintSpec>& specs) {
    json arr = json::array();
    for (const ConstraintSpec& s : specs)
        arr.push_back({s.harmonic, s.oct, s.subdiv});
    return arr;
}

// ---------------------------------------------------------------- solve ----

int cmd_solve(int rows, int cols, bool as_json) {
    SearchResult r;
    try {
        r = backtracking_search(KeyboardDims{rows, cols});
    } catch (const FamilyEmptyError& e) {
        fail(e.what());
        return kExitVerification;
    }
    const MinimaxSolution& sol = *r.best;
    const std::string exact = io::exact_form_text(*sol.exact);
    if (as_json) {
        json doc;
        doc["rows"] = rows;
        doc["cols"] = cols;
        doc["deviation_cents"] = sol.deviation;
        doc["generator_cents"] = sol.x;
        doc["exact_num"] = sol.exact->base_num;
        doc["exact_den"] = sol.exact->base_den;
        doc["exact_root"] = sol.exact->root;
        doc["exact_text"] = exact;
        doc["specs"] = specs_to_json(r.best_specs.specs);
        doc["per_harmonic"] = sol.per_harmonic;
        doc["engine_version"] = std::string(kEngineVersion);
        doc["nodes_visited"] = r.nodes_visited;
        doc["nodes_pruned"] = r.nodes_pruned;
        std::printf("%s\n", doc.dump(2).c_str());
        return kExitOk;
    }
    std::printf("keyboard %dx%d\n", rows, cols);
    std::printf("generator %.3f cents = %s\n", sol.x, exact.c_str());
    std::printf("deviation %.3f cents\n\n", sol.deviation);
    std::printf("harmonic   oct  subdiv  intercept  deviation\n");
    for (std::size_t i = 0; i < r.best_specs.specs.size(); ++i) {
        const ConstraintSpec& s = r.best_specs.specs[i];
        const LinearConstraint c = constraint_from_spec(s);
        std::printf("%8d  %4d  %6d  %9.3f  %9.3f\n", s.harmonic, s.oct, s.subdiv,
                    c.x_intercept, sol.per_harmonic[i]);
    }
    std::printf("\nnodes visited %llu, pruned %llu\n",
                static_cast<unsigned long long>(r.nodes_visited),
                static_cast<unsigned long long>(r.nodes_pruned));
    return kExitOk;
}

// ---------------------------------------------------------------- sweep ----

int cmd_sweep(const std::string& rows_text, const std::string& cols_text,
              const std::string& out_path, const std::string& cache_path,
              int parallel, std::uint64_t limit_cells, bool warm_start) {
    IntRange rows, cols;
    if (!parse_range(rows_text, rows) || rows.lo < 1) {
        fail("--rows must be N or A:B with 1 <= A <= B");
        return kExitUsage;
    }
    if (!parse_range(cols_text, cols) || cols.lo < 2) {
        fail("--cols must be N or A:B with 2 <= A <= B");
        return kExitUsage;
    }

    const std::string fingerprint = io::config_fingerprint(PruneConfig{});
    io::SweepCache cache;
    cache.fingerprint = fingerprint;
    cache.row_range = rows;
    cache.col_range = cols;
    std::map<std::pair<int, int>, SearchResult> done;
    if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
        std::string text;
        try {
            text = io::read_file(cache_path);
        } catch (const std::runtime_error& e) {
            fail(e.what());
            return kExitIo;
        }
        io::SweepCache loaded;
        try {
            loaded = io::cache_from_json(text);
        } catch (const std::runtime_error& e) {
            fail(e.what());
            return kExitIo;
        }
        if (loaded.fingerprint != fingerprint) {
            fail("cache '" + cache_path + "' was written under config " +
                 loaded.fingerprint + " but the current config is " +
                 fingerprint + "; refusing to resume");
            return kExitVerification;
        }
        if (!(loaded.row_range == rows) || !(loaded.col_range == cols)) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "cache covers rows %d:%d cols %d:%d, not the "
                          "requested rows %d:%d cols %d:%d",
                          loaded.row_range.lo, loaded.row_range.hi,
                          loaded.col_range.lo, loaded.col_range.hi, rows.lo,
                          rows.hi, cols.lo, cols.hi);
            fail(msg);
            return kExitVerification;
        }
        for (const io::ResultRecord& rec : loaded.cells) {
            try {
                done.emplace(std::pair{rec.rows, rec.cols},
                             io::result_from_record(rec));
            } catch (const std::runtime_error& e) {
                fail(e.what());
                return kExitVerification;
            }
        }
        cache = std::move(loaded);
    }

    SweepOptions opt;
    opt.warm_start = warm_start;
    opt.parallelism = parallel;
    if (limit_cells > 0) opt.max_new_cells = limit_cells;
    if (!done.empty())
        opt.preset = [&done](KeyboardDims d) -> std::optional<SearchResult> {
            const auto it = done.find({d.rows, d.cols});
            if (it == done.end()) return std::nullopt;
            return it->second;
        };
    std::string write_error;
    if (!cache_path.empty())
        opt.on_cell = [&](const SearchResult& r) {
            cache.cells.push_back(io::record_from_result(r));
            if (!write_error.empty()) return;
            try {
                io::atomic_write_file(cache_path, io::cache_to_json(cache));
            } catch (const std::runtime_error& e) {
                write_error = e.what();
            }
        };

    SweepGrid grid;
    try {
        grid = sweep(rows, cols, opt);
    } catch (const std::logic_error& e) {
        fail(e.what());
        return kExitVerification;
    }
    if (!write_error.empty()) {
        fail(write_error);
        return kExitIo;
    }
    if (!grid.complete()) {
        std::size_t missing = 0;
        for (const auto& cell : grid.cells)
            if (!cell) ++missing;
        std::fprintf(stderr,
                     "cell quota reached; %zu of %zu cells still missing — "
                     "rerun with the same --cache to continue\n",
                     missing, grid.cells.size());
        return kExitOk;
    }
    const std::string csv = io::grid_to_csv(grid);
    if (out_path.empty()) {
        std::fwrite(csv.data(), 1, csv.size(), stdout);
    } else {
        try {
            io::atomic_write_file(out_path, csv);
        } catch (const std::runtime_error& e) {
            fail(e.what());
            return kExitIo;
        }
    }
    return kExitOk;
}

// --------------------------------------------------------------- oracle ----

int cmd_oracle(int width, double resolution, bool as_json) {
    const OracleResult o = optimize(width, resolution);
    if (as_json) {
        json doc;
        doc["width"] = o.width;
        doc["r_star"] = o.r_star;
        doc["generator_cents"] = o.r_star * detail::octave_cents();
        doc["deviation_cents"] = o.deviation;
        doc["accuracy_cents"] = o.accuracy;
        doc["rows_needed"] = o.rows_needed;
        doc["interval_lo"] = o.interval_lo;
        doc["interval_hi"] = o.interval_hi;
        std::printf("%s\n", doc.dump(2).c_str());
        return kExitOk;
    }
    std::printf("width %d\n", o.width);
    std::printf("interval [%.3f, %.3f] normalized\n", o.interval_lo, o.interval_hi);
    std::printf("generator r* %.9f = %.3f cents\n", o.r_star,
                o.r_star * detail::octave_cents());
    std::printf("deviation %.3f cents (accuracy %.3g)\n", o.deviation, o.accuracy);
    std::printf("rows needed %d\n", o.rows_needed);
    return kExitOk;
}

// -------------------------------------------------------------- regions ----

const char* shape_name(RegionShape s) {
    switch (s) {
        case RegionShape::rectangle: return "rectangle";
        case RegionShape::gamma: return "gamma";
        case RegionShape::irregular: return "irregular";
    }
    return "?";
}

int cmd_regions(const std::string& in_path, int gap_rows, int gap_cols,
                bool as_json) {
    std::string text;
    try {
        text = io::read_file(in_path);
    } catch (const std::runtime_error& e) {
        fail(e.what());
        return kExitIo;
    }
    SweepGrid grid;
    std::vector<Region> regions;
    std::vector<MiracleCandidate> candidates;
    try {
        grid = io::grid_from_records(io::parse_csv(text));
        regions = extract_regions(grid);
        candidates = detect_miracle_family(grid, {gap_rows, gap_cols});
    } catch (const std::runtime_error& e) {
        fail(e.what());
        return kExitVerification;
    }

    if (as_json) {
        json doc;
        doc["row_lo"] = grid.row_range.lo;
        doc["row_hi"] = grid.row_range.hi;
        doc["col_lo"] = grid.col_range.lo;
        doc["col_hi"] = grid.col_range.hi;
        json regs = json::array();
        for (const Region& g : regions) {
            json one;
            one["corner"] = {g.corner.first, g.corner.second};
            one["cells"] = g.cells.size();
            one["shape"] = shape_name(g.shape);
            one["deviation_cents"] = g.deviation;
            one["generator_cents"] = g.temperament.cents_value();
            one["exact"] = {g.temperament.base_num, g.temperament.base_den,
                            g.temperament.root};
            if (!g.diagnostic.empty()) one["diagnostic"] = g.diagnostic;
            regs.push_back(std::move(one));
        }
        doc["regions"] = std::move(regs);
        json cands = json::array();
        for (const MiracleCandidate& c : candidates) {
            json one;
            one["rows"] = c.dims.rows;
            one["cols"] = c.dims.cols;
            one["deviation_cents"] = c.solution.deviation;
            one["generator_cents"] = c.solution.x;
            one["exact"] = {c.solution.exact->base_num, c.solution.exact->base_den,
                            c.solution.exact->root};
            if (c.improvement_gap)
                one["improvement_gap"] = {c.improvement_gap->first,
                                          c.improvement_gap->second};
            else
                one["improvement_gap"] = nullptr;
            cands.push_back(std::move(one));
        }
        doc["candidates"] = std::move(cands);
        std::printf("%s\n", doc.dump(2).c_str());
        return kExitOk;
    }

    std::printf("grid rows %d:%d cols %d:%d — %zu cells, %zu regions\n\n",
                grid.row_range.lo, grid.row_range.hi, grid.col_range.lo,
                grid.col_range.hi, grid.cells.size(), regions.size());
    std::printf("corner     cells  shape       deviation  generator  exact form\n");
    for (const Region& g : regions) {
        char corner[16];
        std::snprintf(corner, sizeof corner, "%dx%d", g.corner.first,
                      g.corner.second);
        std::printf("%-9s  %5zu  %-10s  %9.3f  %9.3f  %s%s%s\n", corner,
                    g.cells.size(), shape_name(g.shape), g.deviation,
                    g.temperament.cents_value(),
                    io::exact_form_text(g.temperament).c_str(),
                    g.diagnostic.empty() ? "" : "  — ",
                    g.diagnostic.c_str());
    }
    std::printf("\ncandidates (every better temperament >= %d rows or >= %d cols away):\n",
                gap_rows, gap_cols);
    if (candidates.empty()) std::printf("  none\n");
    for (const MiracleCandidate& c : candidates) {
        std::printf("  %dx%d  deviation %.3f  generator %.3f = %s", c.dims.rows,
                    c.dims.cols, c.solution.deviation, c.solution.x,
                    io::exact_form_text(*c.solution.exact).c_str());
        if (c.improvement_gap)
            std::printf("  — next better after +%d rows / +%d cols\n",
                        c.improvement_gap->first, c.improvement_gap->second);
        else
            std::printf("  — nothing better in this grid\n");
    }
    return kExitOk;
}

// --------------------------------------------------------- verify-paper ----

struct Verifier {
    int passed = 0;
    int failed = 0;

    void line(bool ok, const char* name, const std::string& detail) {
        std::printf("%s  %-42s %s\n", ok ? "ok  " : "FAIL", name, detail.c_str());
        (ok ? passed : failed) += 1;
    }

    void value(const char* name, double got, double want, double tol) {
        char detail[96];
        std::snprintf(detail, sizeof detail, "got %.6f, want %.3f +- %.3g", got,
                      want, tol);
        line(std::abs(got - want) <= tol, name, detail);
    }

    void count(const char* name, long long got, long long want) {
        char detail[64];
        std::snprintf(detail, sizeof detail, "got %lld, want %lld", got, want);
        line(got == want, name, detail);
    }

    void boolean(const char* name, bool ok, const std::string& detail) {
        line(ok, name, detail);
    }
};

void check_table5_row(Verifier& v, int rows, int cols, double want_dev,
                      double want_x, const ExactGenerator& want_exact) {
    const SearchResult r = backtracking_search(KeyboardDims{rows, cols});
    char name[64];
    std::snprintf(name, sizeof name, "%dx%d deviation", rows, cols);
    v.value(name, r.best->deviation, want_dev, 1e-3);
    std::snprintf(name, sizeof name, "%dx%d generator", rows, cols);
    v.value(name, r.best->x, want_x, 1e-3);
    std::snprintf(name, sizeof name, "%dx%d exact form", rows, cols);
    v.boolean(name, *r.best->exact == want_exact,
              io::exact_form_text(*r.best->exact));
}

int cmd_verify(bool long_suite, bool perturb) {
    if (perturb) {
        detail::octave_cents() = 1200.001;
        std::printf("octave perturbed to %.3f cents — expect named failures\n",
                    detail::octave_cents());
    }
    Verifier v;

    // Pitch-class distances of the five harmonics.
    const struct {
        int harmonic;
        int oct;
        double dist;
    } pc[] = {{3, -2, -498.045},
              {5, -2, 386.314},
              {7, -3, -231.174},
              {9, -3, 203.910},
              {11, -3, 551.318}};
    for (const auto& e : pc) {
        const PitchClassDistance got = pitch_class_distance(e.harmonic);
        char name[48];
        std::snprintf(name, sizeof name, "pitch-class distance of %d", e.harmonic);
        v.value(name, got.distance, e.dist, 1e-3);
        std::snprintf(name, sizeof name, "pitch-class octave of %d", e.harmonic);
        v.count(name, got.oct, e.oct);
    }

    // Interval arithmetic on known intervals.
    v.value("octave of 220Hz vs 440Hz", cents(220.0, 440.0), 1200.0, 1e-3);
    v.value("pure twelfth 3/1", ratio_cents(3, 1), 1901.955, 1e-3);
    v.value("pure fifth 3/2", ratio_cents(3, 2), 701.955, 1e-3);

    // 12-TET: the natural harmonic approximations at a 100-cent generator.
    const struct {
        int harmonic;
        int subdiv;
        double dev;
    } tet[] = {{3, 19, -1.955},
               {5, 28, 13.686},
               {7, 34, 31.174},
               {9, 38, -3.910},
               {11, 42, 48.682}};
    for (const auto& e : tet) {
        const LinearConstraint c =
            constraint_from_spec({e.harmonic, 0, e.subdiv});
        char name[48];
        std::snprintf(name, sizeof name, "12-TET deviation of %d", e.harmonic);
        v.value(name, deviation_at(c, 100.0), e.dev, 1e-3);
    }

    // Two-constraint balance between the 12-step third approximation of 3
    // and the 20-step approximation of 5.
    {
        const MinimaxSolution sol =
            solve_pair(constraint_from_spec({3, 0, 12}),
                       constraint_from_spec({5, 0, 20}));
        v.value("pair balance generator", sol.x, 146.508, 1e-3);
        v.value("pair balance deviation", sol.deviation, 143.854, 1e-3);
    }

    // Secor's 3x22 keyboard: the Miracle temperament.
    {
        const SearchResult r = backtracking_search(KeyboardDims{3, 22});
        v.value("Miracle generator", r.best->x, 116.716, 1e-3);
        v.value("Miracle deviation", r.best->deviation, 3.322, 1e-3);
        v.boolean("Miracle exact form",
                  *r.best->exact == ExactGenerator{18, 5, 19},
                  io::exact_form_text(*r.best->exact));
        v.boolean("Miracle generator matches exact form",
                  std::abs(r.best->x - r.best->exact->cents_value()) <= 1e-6,
                  "closed form and solver agree");
        const double want_x0[5] = {116.992, 116.241, 115.587, 116.993, 116.755};
        const double want_dev[5] = {-1.658, -3.322, -2.257, -3.322, -0.591};
        for (int i = 0; i < 5; ++i) {
            const ConstraintSpec& s = r.best_specs.specs[i];
            char name[48];
            std::snprintf(name, sizeof name, "Miracle intercept of %d", s.harmonic);
            v.value(name, constraint_from_spec(s).x_intercept, want_x0[i], 1e-3);
            std::snprintf(name, sizeof name, "Miracle deviation of %d", s.harmonic);
            v.value(name, r.best->per_harmonic[i], want_dev[i], 1e-3);
        }
    }

    check_table5_row(v, 7, 40, 1.586, 193.823, ExactGenerator{3168, 1, 72});

    // Width-constrained continuous relaxation at Secor's generator.
    {
        const double r_secor = std::log2(18.0 / 5.0) / 19.0;
        v.value("octave-normalized interval floor",
                oracle_interval_lo(2) * detail::octave_cents(), 1049.363, 1e-3);
        v.value("row-unbounded deviation at Miracle generator",
                1200.0 * objective(r_secor, 22), 3.322, 1e-3);
        v.count("rows needed at Miracle generator", rows_needed(r_secor, 22), 3);
    }

    // Gap-rule certification constant.
    {
        const double c = verify_fact_constant(100);
        char detail[64];
        std::snprintf(detail, sizeof detail, "recomputed %.6f >= 4.268", c);
        v.boolean("pair-gap certification constant", c >= 4.268, detail);
    }

    if (long_suite) {
        check_table5_row(v, 10, 61, 1.116, 183.400, ExactGenerator{880, 1, 64});
        check_table5_row(v, 2, 75, 1.070, 26.213, ExactGenerator{14, 5, 68});
        check_table5_row(v, 7, 84, 0.984, 83.296, ExactGenerator{8192, 15, 131});
        check_table5_row(v, 4, 98, 0.384, 38.593, ExactGenerator{10, 7, 16});
    }

    std::printf("summary: %d of %d vectors pass\n", v.passed,
                v.passed + v.failed);
    return v.failed == 0 ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal two-dimensional temperaments for rectangular keyboards"};
    app.require_subcommand(1);

    int rows = 0, cols = 0;
    bool as_json = false;
    CLI::App* solve = app.add_subcommand(
        "solve", "find the optimal generator for one keyboard");
    solve->add_option("--rows", rows, "octave rows")
        ->required()
        ->check(CLI::Range(1, 1000000));
    solve->add_option("--cols", cols, "keys per row")
        ->required()
        ->check(CLI::Range(2, 1000000));
    solve->add_flag("--json", as_json, "machine-readable output");

    std::string rows_text, cols_text, out_path, cache_path;
    int parallel = 1;
    std::uint64_t limit_cells = 0;
    bool no_warm = false;
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "solve a grid of keyboard sizes and emit CSV");
    sweep_cmd->add_option("--rows", rows_text, "row range, N or A:B")->required();
    sweep_cmd->add_option("--cols", cols_text, "column range, N or A:B")->required();
    sweep_cmd->add_option("--out", out_path, "CSV output path (default stdout)");
    sweep_cmd->add_option("--cache", cache_path,
                          "resumable cache path (JSON, updated per cell)");
    sweep_cmd->add_option("--parallel", parallel, "worker threads")
        ->check(CLI::Range(1, 4096));
    sweep_cmd->add_option("--limit-cells", limit_cells,
                          "stop after this many new cells (0 = no limit)");
    sweep_cmd->add_flag("--no-warm-start", no_warm,
                        "do not seed cells from their neighbors");

    int width = 0;
    double resolution = 0.0;
    bool oracle_json = false;
    CLI::App* oracle_cmd = app.add_subcommand(
        "oracle", "row-unbounded optimum for a keyboard width");
    oracle_cmd->add_option("--cols", width, "keyboard width")
        ->required()
        ->check(CLI::Range(2, 1000000));
    oracle_cmd->add_option("--resolution", resolution,
                           "initial scan step (normalized; 0 = auto)");
    oracle_cmd->add_flag("--json", oracle_json, "machine-readable output");

    std::string in_path;
    int gap_rows = 2, gap_cols = 8;
    bool regions_json = false;
    CLI::App* regions_cmd = app.add_subcommand(
        "regions", "group a sweep CSV into temperament regions");
    regions_cmd->add_option("--in", in_path, "sweep CSV to analyze")->required();
    regions_cmd->add_option("--min-gap-rows", gap_rows,
                            "rows a better temperament must be away");
    regions_cmd->add_option("--min-gap-cols", gap_cols,
                            "columns a better temperament must be away");
    regions_cmd->add_flag("--json", regions_json, "machine-readable output");

    bool long_suite = false, perturb = false;
    CLI::App* verify_cmd = app.add_subcommand(
        "verify-paper", "check the engine against published reference values");
    verify_cmd->add_flag("--long", long_suite,
                         "include the large keyboards (minutes of runtime)");
    verify_cmd->add_flag("--perturb", perturb)->group("");  // harness hook

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(rows, cols, as_json);
        if (sweep_cmd->parsed())
            return cmd_sweep(rows_text, cols_text, out_path, cache_path,
                             parallel, limit_cells, !no_warm);
        if (oracle_cmd->parsed()) return cmd_oracle(width, resolution, oracle_json);
        if (regions_cmd->parsed())
            return cmd_regions(in_path, gap_rows, gap_cols, regions_json);
        if (verify_cmd->parsed()) return cmd_verify(long_suite, perturb);
    } catch (const std::exception& e) {
        fail(e.what());
        return kExitVerification;
    }
    return kExitUsage;
}
