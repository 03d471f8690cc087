#include "temper/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

namespace temper {

namespace {

using Cell = std::pair<int, int>;

int patch_count(const std::set<Cell>& cells) {
    std::set<Cell> seen;
    int patches = 0;
    for (const Cell& start : cells) {
        if (seen.count(start)) continue;
        ++patches;
        std::vector<Cell> stack{start};
        seen.insert(start);
        while (!stack.empty()) {
            const Cell cur = stack.back();
            stack.pop_back();
            const Cell next[4] = {{cur.first - 1, cur.second},
                                  {cur.first + 1, cur.second},
                                  {cur.first, cur.second - 1},
                                  {cur.first, cur.second + 1}};
            for (const Cell& nb : next) {
                if (cells.count(nb) && !seen.count(nb)) {
                    seen.insert(nb);
                    stack.push_back(nb);
                }
            }
        }
    }
    return patches;
}

void classify(Region& g, const SweepGrid& grid) {
    int r_lo = g.cells.front().first, r_hi = r_lo;
    int c_lo = g.cells.front().second, c_hi = c_lo;
    for (const Cell& cell : g.cells) {
        r_lo = std::min(r_lo, cell.first);
        r_hi = std::max(r_hi, cell.first);
        c_lo = std::min(c_lo, cell.second);
        c_hi = std::max(c_hi, cell.second);
    }
    const Cell corner{r_lo, c_lo};
    if (!std::binary_search(g.cells.begin(), g.cells.end(), corner)) {
        // No cell is componentwise minimal, so the region has no dominating
        // corner at all.
        g.corner = g.cells.front();
        g.deviation = grid.at(g.corner.first, g.corner.second).best->deviation;
        g.shape = RegionShape::irregular;
        char msg[96];
        std::snprintf(msg, sizeof msg,
                      "no corner cell: %dx%d is missing from the region",
                      r_lo, c_lo);
        g.diagnostic = msg;
        return;
    }
    g.corner = corner;
    g.deviation = grid.at(r_lo, c_lo).best->deviation;

    const long long area =
        static_cast<long long>(r_hi - r_lo + 1) * (c_hi - c_lo + 1);
    if (static_cast<long long>(g.cells.size()) == area) {
        g.shape = RegionShape::rectangle;
        return;
    }

    const std::set<Cell> cellset(g.cells.begin(), g.cells.end());
    std::vector<Cell> comp;
    for (int r = r_lo; r <= r_hi; ++r)
        for (int c = c_lo; c <= c_hi; ++c)
            if (!cellset.count({r, c})) comp.emplace_back(r, c);
    int br_lo = comp.front().first, br_hi = br_lo;
    int bc_lo = comp.front().second, bc_hi = bc_lo;
    for (const Cell& cell : comp) {
        br_lo = std::min(br_lo, cell.first);
        br_hi = std::max(br_hi, cell.first);
        bc_lo = std::min(bc_lo, cell.second);
        bc_hi = std::max(bc_hi, cell.second);
    }
    const long long comp_area =
        static_cast<long long>(br_hi - br_lo + 1) * (bc_hi - bc_lo + 1);
    const bool comp_is_rect = static_cast<long long>(comp.size()) == comp_area;
    const bool at_box_corner = (br_lo == r_lo || br_hi == r_hi) &&
                               (bc_lo == c_lo || bc_hi == c_hi) &&
                               ((br_lo == r_lo && bc_lo == c_lo) ||
                                (br_lo == r_lo && bc_hi == c_hi) ||
                                (br_hi == r_hi && bc_lo == c_lo) ||
                                (br_hi == r_hi && bc_hi == c_hi));
    if (comp_is_rect && at_box_corner) {
        g.shape = RegionShape::gamma;
        return;
    }

    g.shape = RegionShape::irregular;
    char msg[112];
    const int patches = patch_count(cellset);
    if (patches > 1) {
        std::snprintf(msg, sizeof msg, "%d disconnected patches", patches);
    } else {
        std::snprintf(msg, sizeof msg,
                      "bounding-box complement (%zu cells) is not a rectangle "
                      "at a box corner",
                      comp.size());
    }
    g.diagnostic = msg;
}

}  // namespace

std::vector<Region> extract_regions(const SweepGrid& grid) {
    if (!grid.complete())
        throw std::invalid_argument("region extraction needs a complete grid");
    std::map<ExactGenerator, Region> groups;
    for (int r = grid.row_range.lo; r <= grid.row_range.hi; ++r) {
        for (int c = grid.col_range.lo; c <= grid.col_range.hi; ++c) {
            const SearchResult& cell = grid.at(r, c);
            if (!cell.best || !cell.best->exact) continue;
            Region& g = groups[*cell.best->exact];
            g.temperament = *cell.best->exact;
            g.cells.emplace_back(r, c);  // row-major scan keeps cells sorted
        }
    }
    std::vector<Region> out;
    out.reserve(groups.size());
    for (auto& [gen, region] : groups) {
        classify(region, grid);
        out.push_back(std::move(region));
    }
    std::sort(out.begin(), out.end(),
              [](const Region& a, const Region& b) { return a.corner < b.corner; });
    return out;
}

std::vector<MiracleCandidate> detect_miracle_family(const SweepGrid& grid,
                                                    std::pair<int, int> min_gap) {
    const std::vector<Region> regions = extract_regions(grid);
    std::vector<MiracleCandidate> out;
    for (const Region& g : regions) {
        const int r0 = g.corner.first, c0 = g.corner.second;
        bool proper = true;
        for (const auto& [r, c] : g.cells)
            if (r < r0 || c < c0) proper = false;
        if (!proper) continue;
        // The corner must beat every keyboard it dominates (both dims <=).
        bool beats_dominated = true;
        for (int r = grid.row_range.lo; r <= r0 && beats_dominated; ++r) {
            for (int c = grid.col_range.lo; c <= c0; ++c) {
                if (r == r0 && c == c0) continue;
                const SearchResult& cell = grid.at(r, c);
                if (cell.best && !(g.deviation < cell.best->deviation - 1e-9)) {
                    beats_dominated = false;
                    break;
                }
            }
        }
        if (!beats_dominated) continue;
        // Survey strictly better regions: all must sit at least min_gap away
        // in one dimension; remember the nearest as the improvement gap.
        std::optional<std::pair<int, int>> gap;
        bool isolated = true;
        for (const Region& other : regions) {
            if (&other == &g) continue;
            if (!(other.deviation < g.deviation - 1e-9)) continue;
            const int dr = std::max(0, other.corner.first - r0);
            const int dc = std::max(0, other.corner.second - c0);
            if (dr < min_gap.first && dc < min_gap.second) {
                isolated = false;
                break;
            }
            if (!gap || dr + dc < gap->first + gap->second ||
                (dr + dc == gap->first + gap->second && dr < gap->first))
                gap = std::pair{dr, dc};
        }
        if (!isolated) continue;
        MiracleCandidate cand;
        cand.dims = KeyboardDims{r0, c0};
        cand.solution = *grid.at(r0, c0).best;
        cand.improvement_gap = gap;
        out.push_back(std::move(cand));
    }
    return out;
}

}  // namespace temper
