#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "skewlab/harness.hpp"

namespace skewlab {

// Results go to disk as one JSON record per cell (line-delimited), plus
// a pivot CSV of (level x balance x depth) -> macro G-Mean for direct
// bar-chart regeneration. Records carry deterministic fields only;
// wall-clock time is reported on stderr by the CLI, not stored.

std::string result_to_json_line(const ExperimentResult& result);
void write_results_jsonl(const std::filesystem::path& path,
                         std::span<const ExperimentResult> results);

// Flattened view of one results line, as used by summaries and reports.
struct ResultRow {
    std::string family;
    std::string regimen;
    int size = 0;  // backbone s; 0 for the other families
    int depth = 0;
    int level = 0;        // c, k or v
    double balance = 0;   // b, or the minority fraction
    int hidden_units = 0;
    uint64_t seed = 0;
    double gmean_macro = 0;
    bool failed = false;
};

ResultRow to_result_row(const ExperimentResult& result);

/// Throws std::runtime_error naming the line number on a corrupt line.
std::vector<ResultRow> read_results_jsonl(const std::filesystem::path& path);

struct SummaryRow {
    std::string family;
    std::string regimen;
    int size = 0;
    int depth = 0;
    int level = 0;
    double balance = 0;
    double gmean_mean = 0;
    double gmean_std = 0;  // sample std across runs; meaningful when runs >= 2
    int runs = 0;
};

/// Mean macro G-Mean per (family, regimen, size, depth, level, balance),
/// aggregated across seeds; failed cells are skipped.
std::vector<SummaryRow> summarize(std::span<const ResultRow> rows);

void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows);

/// Grouped tables: one block per (family, regimen, size, depth), rows =
/// level, columns = balance.
void print_report(std::ostream& os, std::span<const SummaryRow> rows);

/// Parses a JSON experiment config mirroring ExperimentGrid. Errors
/// carry the JSON path of the offending field ("$.depths[2]: ...").
ExperimentGrid parse_experiment_config(const std::filesystem::path& path);

}  // namespace skewlab
