#include "record_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include <temper/version.hpp>

#include "json.hpp"

namespace temper::io {

namespace {

using nlohmann::json;

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

[[noreturn]] void bad_input(const std::string& what) {
    throw std::runtime_error(what);
}

std::int64_t parse_int(std::string_view field, const char* name) {
    std::int64_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        bad_input(std::string("bad integer for ") + name + ": '" +
                  std::string(field) + "'");
    return value;
}

double parse_real(std::string_view field, const char* name) {
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        bad_input(std::string("bad real for ") + name + ": '" +
                  std::string(field) + "'");
    return value;
}

}  // namespace

std::string csv_header() {
    return "rows,cols,deviation_cents,generator_cents,exact_num,exact_den,"
           "exact_root,spec3_oct,spec3_subdiv,spec5_oct,spec5_subdiv,"
           "spec7_oct,spec7_subdiv,spec9_oct,spec9_subdiv,spec11_oct,"
           "spec11_subdiv";
}

ResultRecord record_from_result(const SearchResult& r) {
    if (!r.best || !r.best->exact)
        bad_input("cannot persist a search result without a solution");
    ResultRecord rec;
    rec.rows = r.dims.rows;
    rec.cols = r.dims.cols;
    rec.deviation_cents = r.best->deviation;
    rec.generator_cents = r.best->x;
    rec.exact_num = r.best->exact->base_num;
    rec.exact_den = r.best->exact->base_den;
    rec.exact_root = r.best->exact->root;
    rec.specs = r.best_specs.specs;
    rec.engine_version = std::string(kEngineVersion);
    rec.nodes_visited = r.nodes_visited;
    rec.nodes_pruned = r.nodes_pruned;
    return rec;
}

SearchResult result_from_record(const ResultRecord& rec) {
    if (rec.specs.size() != kHarmonics.size())
        bad_input("record needs one spec per harmonic");
    for (std::size_t i = 0; i < kHarmonics.size(); ++i)
        if (rec.specs[i].harmonic != kHarmonics[i])
            bad_input("record specs out of harmonic order");
    SearchResult r;
    r.dims = KeyboardDims{rec.rows, rec.cols};
    r.best_specs.specs = rec.specs;
    r.best_specs.dims = r.dims;
    MinimaxSolution sol = solve_system(r.best_specs);
    sol.exact = exact_form(sol, r.best_specs);
    if (std::abs(sol.deviation - rec.deviation_cents) > 1e-6) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "record %dx%d does not re-verify: stored deviation %.9g, "
                      "re-solved %.9g",
                      rec.rows, rec.cols, rec.deviation_cents, sol.deviation);
        bad_input(msg);
    }
    r.best = std::move(sol);
    r.nodes_visited = rec.nodes_visited;
    r.nodes_pruned = rec.nodes_pruned;
    return r;
}

std::string csv_row(const ResultRecord& rec) {
    if (rec.specs.size() != kHarmonics.size())
        bad_input("record needs one spec per harmonic");
    std::string out;
    out += std::to_string(rec.rows);
    out += ',';
    out += std::to_string(rec.cols);
    out += ',';
    out += format_real(rec.deviation_cents);
    out += ',';
    out += format_real(rec.generator_cents);
    out += ',';
    out += std::to_string(rec.exact_num);
    out += ',';
    out += std::to_string(rec.exact_den);
    out += ',';
    out += std::to_string(rec.exact_root);
    for (const ConstraintSpec& s : rec.specs) {
        out += ',';
        out += std::to_string(s.oct);
        out += ',';
        out += std::to_string(s.subdiv);
    }
    return out;
}

std::string grid_to_csv(const SweepGrid& grid) {
    if (!grid.complete()) bad_input("cannot emit CSV for a partial grid");
    std::string out = csv_header();
    out += '\n';
    for (int r = grid.row_range.lo; r <= grid.row_range.hi; ++r) {
        for (int c = grid.col_range.lo; c <= grid.col_range.hi; ++c) {
            out += csv_row(record_from_result(grid.at(r, c)));
            out += '\n';
        }
    }
    return out;
}

std::vector<ResultRecord> parse_csv(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (const char ch : text) {
        if (ch == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    if (lines.empty()) bad_input("empty CSV document");
    if (lines.front() != csv_header())
        bad_input("unrecognized CSV header: '" + lines.front() + "'");
    std::vector<ResultRecord> records;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::string& line = lines[li];
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                fields.emplace_back(line.data() + start, i - start);
                start = i + 1;
            }
        }
        if (fields.size() != 17)
            bad_input("CSV line " + std::to_string(li + 1) + " has " +
                      std::to_string(fields.size()) + " fields, expected 17");
        ResultRecord rec;
        rec.rows = static_cast<int>(parse_int(fields[0], "rows"));
        rec.cols = static_cast<int>(parse_int(fields[1], "cols"));
        rec.deviation_cents = parse_real(fields[2], "deviation_cents");
        rec.generator_cents = parse_real(fields[3], "generator_cents");
        rec.exact_num = parse_int(fields[4], "exact_num");
        rec.exact_den = parse_int(fields[5], "exact_den");
        rec.exact_root = parse_int(fields[6], "exact_root");
        for (std::size_t h = 0; h < kHarmonics.size(); ++h) {
            ConstraintSpec s;
            s.harmonic = kHarmonics[h];
            s.oct = static_cast<int>(parse_int(fields[7 + 2 * h], "oct"));
            s.subdiv = static_cast<int>(parse_int(fields[8 + 2 * h], "subdiv"));
            rec.specs.push_back(s);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

SweepGrid grid_from_records(const std::vector<ResultRecord>& records) {
    if (records.empty()) bad_input("no records to assemble into a grid");
    int r_lo = records.front().rows, r_hi = r_lo;
    int c_lo = records.front().cols, c_hi = c_lo;
    for (const ResultRecord& rec : records) {
        r_lo = std::min(r_lo, rec.rows);
        r_hi = std::max(r_hi, rec.rows);
        c_lo = std::min(c_lo, rec.cols);
        c_hi = std::max(c_hi, rec.cols);
    }
    SweepGrid grid;
    grid.row_range = {r_lo, r_hi};
    grid.col_range = {c_lo, c_hi};
    grid.cells.assign(static_cast<std::size_t>(grid.row_range.size()) *
                          static_cast<std::size_t>(grid.col_range.size()),
                      std::nullopt);
    for (const ResultRecord& rec : records) {
        std::optional<SearchResult>& slot =
            grid.cells[grid.index_of(rec.rows, rec.cols)];
        if (slot)
            bad_input("duplicate record for " + std::to_string(rec.rows) + "x" +
                      std::to_string(rec.cols));
        slot = result_from_record(rec);
    }
    if (!grid.complete())
        bad_input("records do not tile the full " + std::to_string(r_lo) + ":" +
                  std::to_string(r_hi) + " x " + std::to_string(c_lo) + ":" +
                  std::to_string(c_hi) + " rectangle");
    return grid;
}

std::string config_fingerprint(const PruneConfig& prune) {
    char canonical[512];
    std::snprintf(
        canonical, sizeof canonical,
        "engine=%s;octave=%.17g;harmonics=3,5,7,9,11;domain=(0,octave];"
        "bounds=|subdiv|<=cols,|register|<=rows-1,joint-spans;"
        "slope_floor=ceil(min_step/x0);tie=max_subdiv,max_oct,lex;"
        "prune.max_subinterval=%d;prune.gap_cutoff=%d;prune.cutoff=%.17g;"
        "tie_tol=%.17g;dev_tol=%.17g",
        std::string(kEngineVersion).c_str(), detail::octave_cents(),
        prune.max_subinterval, prune.gap_cutoff, prune.cutoff_deviation,
        kTieTol, kDeviationTol);
    std::uint64_t hash = 14695981039346656037ULL;
    for (const char* p = canonical; *p; ++p) {
        hash ^= static_cast<unsigned char>(*p);
        hash *= 1099511628211ULL;
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(hash));
    return hex;
}

std::string cache_to_json(const SweepCache& cache) {
    json doc;
    doc["fingerprint"] = cache.fingerprint;
    doc["row_lo"] = cache.row_range.lo;
    doc["row_hi"] = cache.row_range.hi;
    doc["col_lo"] = cache.col_range.lo;
    doc["col_hi"] = cache.col_range.hi;
    json cells = json::array();
    for (const ResultRecord& rec : cache.cells) {
        json cell;
        cell["rows"] = rec.rows;
        cell["cols"] = rec.cols;
        cell["deviation"] = rec.deviation_cents;
        cell["generator"] = rec.generator_cents;
        cell["exact"] = {rec.exact_num, rec.exact_den, rec.exact_root};
        json specs = json::array();
        for (const ConstraintSpec& s : rec.specs)
            specs.push_back({s.harmonic, s.oct, s.subdiv});
        cell["specs"] = std::move(specs);
        cell["engine"] = rec.engine_version;
        cell["visited"] = rec.nodes_visited;
        cell["pruned"] = rec.nodes_pruned;
        cells.push_back(std::move(cell));
    }
    doc["cells"] = std::move(cells);
    return doc.dump();
}

SweepCache cache_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        bad_input(std::string("cache is not valid JSON: ") + e.what());
    }
    SweepCache cache;
    try {
        cache.fingerprint = doc.at("fingerprint").get<std::string>();
        cache.row_range = {doc.at("row_lo").get<int>(), doc.at("row_hi").get<int>()};
        cache.col_range = {doc.at("col_lo").get<int>(), doc.at("col_hi").get<int>()};
        for (const json& cell : doc.at("cells")) {
            ResultRecord rec;
            rec.rows = cell.at("rows").get<int>();
            rec.cols = cell.at("cols").get<int>();
            rec.deviation_cents = cell.at("deviation").get<double>();
            rec.generator_cents = cell.at("generator").get<double>();
            rec.exact_num = cell.at("exact").at(0).get<std::int64_t>();
            rec.exact_den = cell.at("exact").at(1).get<std::int64_t>();
            rec.exact_root = cell.at("exact").at(2).get<std::int64_t>();
            for (const json& s : cell.at("specs")) {
                ConstraintSpec spec;
                spec.harmonic = s.at(0).get<int>();
                spec.oct = s.at(1).get<int>();
                spec.subdiv = s.at(2).get<int>();
                rec.specs.push_back(spec);
            }
            rec.engine_version = cell.at("engine").get<std::string>();
            rec.nodes_visited = cell.at("visited").get<std::uint64_t>();
            rec.nodes_pruned = cell.at("pruned").get<std::uint64_t>();
            cache.cells.push_back(std::move(rec));
        }
    } catch (const json::exception& e) {
        bad_input(std::string("cache JSON is missing fields: ") + e.what());
    }
    return cache;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) bad_input("cannot open '" + tmp + "' for writing");
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        if (!out) bad_input("short write to '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        bad_input("cannot move '" + tmp + "' into place at '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad_input("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) bad_input("error while reading '" + path + "'");
    return buf.str();
}

std::string exact_form_text(const ExactGenerator& g) {
    std::string out;
    if (g.base_den == 1) {
        out = std::to_string(g.base_num);
    } else {
        out = "(" + std::to_string(g.base_num) + "/" +
              std::to_string(g.base_den) + ")";
    }
    out += "^(1/" + std::to_string(g.root) + ")";
    return out;
}

}  // namespace temper::io
