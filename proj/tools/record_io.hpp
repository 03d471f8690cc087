#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <temper/search.hpp>

namespace temper::io {

/// One solved keyboard as persisted in CSV and cache files.
struct ResultRecord {
    int rows = 0;
    int cols = 0;
    double deviation_cents = 0.0;
    double generator_cents = 0.0;
    std::int64_t exact_num = 0;
    std::int64_t exact_den = 1;
    std::int64_t exact_root = 1;
    std::vector<ConstraintSpec> specs;  ///< five, in harmonic order
    std::string engine_version;
    std::uint64_t nodes_visited = 0;
    std::uint64_t nodes_pruned = 0;

    friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

/// The exact CSV column set, in order.
std::string csv_header();

ResultRecord record_from_result(const SearchResult& r);

/// Rebuild the full search result from a record's specs. The solver is
/// deterministic, so this reproduces the original doubles bit for bit; the
/// record's 9-digit deviation is cross-checked to 1e-6 and a mismatch throws
/// std::runtime_error.
SearchResult result_from_record(const ResultRecord& rec);

/// Reals with 9 significant digits, integers exact.
std::string csv_row(const ResultRecord& rec);

/// Header plus one row per cell in (rows, cols) order. Requires a complete
/// grid.
std::string grid_to_csv(const SweepGrid& grid);

/// Parse a full CSV document (header validated verbatim).
std::vector<ResultRecord> parse_csv(const std::string& text);

/// Assemble parsed records into a grid; the records must exactly tile a
/// rectangle of dimensions. Throws std::runtime_error otherwise.
SweepGrid grid_from_records(const std::vector<ResultRecord>& records);

/// Hash of every parameter that influences computed values (bounds rule,
/// tie-break, pruning constants, tolerances, domain, harmonic order), as a
/// 16-digit hex string. Caches written under a different fingerprint are
/// rejected on resume.
std::string config_fingerprint(const PruneConfig& prune);

/// Resumable sweep state: ranges, fingerprint, and finished cells.
struct SweepCache {
    std::string fingerprint;
    IntRange row_range;
    IntRange col_range;
    std::vector<ResultRecord> cells;
};

std::string cache_to_json(const SweepCache& cache);
SweepCache cache_from_json(const std::string& text);

/// Write via a temporary file in the same directory plus an atomic rename,
/// so an interrupted run never leaves a half-written file.
/// Throws std::runtime_error on I/O failure.
void atomic_write_file(const std::string& path, const std::string& content);

/// Reads a whole file; throws std::runtime_error on I/O failure.
std::string read_file(const std::string& path);

/// "(p/q)^(1/root)", with the "/q" omitted for q = 1.
std::string exact_form_text(const ExactGenerator& g);

}  // namespace temper::io
