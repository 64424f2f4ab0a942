#pragma once

#include "gatelens/pipeline.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gatelens {

struct ExpectTable {
    std::string csv;
};
struct ExpectReject {};

using Expected = std::variant<ExpectTable, ExpectReject>;

struct EvalRecord {
    std::string id;
    std::string query;
    std::optional<int> level; // 1..4
    std::optional<std::string> category;
    std::optional<std::string> role; // mechanical, project, software
    Expected expected;
};

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One JSON object per non-blank line:
/// `{"id", "query", "level", "category", "role",
///   "expected": {"kind": "table", "csv": "..."} | {"kind": "reject"}}`.
/// Throws EvalError naming the line on any violation.
auto parse_benchmark(std::string_view jsonl) -> std::vector<EvalRecord>;
auto load_benchmark(const std::filesystem::path& path) -> std::vector<EvalRecord>;

/// Few-shot pool in JSONL: `{"query", "ra", "note"?}` per line.
auto parse_examples(std::string_view jsonl) -> std::vector<FewShotExample>;
auto load_examples(const std::filesystem::path& path) -> std::vector<FewShotExample>;

enum class Score : std::uint8_t { TP, FP, FN };

auto to_string(Score score) -> std::string_view;

/// Answer mode (table expected): matching answer TP, other answer FP,
/// rejection or failure FN. Reject mode: rejection TP, answer FP, failure FN.
/// Tables match under results_equal; the expected CSV is read against the
/// answer's column types, and anything it cannot be read as is a mismatch.
auto score_outcome(const QueryOutcome& outcome, const Expected& expected) -> Score;

/// Percentages in [0, 100]; nullopt when undefined.
struct Metrics {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

auto metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) -> Metrics;

/// Harmonic mean of two percentages; nullopt when both are zero.
auto f1_score(double precision, double recall) -> std::optional<double>;

struct SliceMetrics {
    std::string slice; // "overall", "level=2", "category=...", "role=..."
    Metrics metrics;
};

struct MetricsReport {
    std::vector<SliceMetrics> slices; // overall first, then levels, categories, roles (sorted)
    auto find(std::string_view slice) const -> const SliceMetrics*;
};

struct ScoredRecord {
    const EvalRecord* record = nullptr;
    Score score = Score::FN;
};

auto compute_metrics(const std::vector<ScoredRecord>& scored) -> MetricsReport;

struct RecordResult {
    std::string id;
    Score score = Score::FN;
    std::string verdict;
    std::string detail;      // RA text, rejection reason or error message
    std::uint64_t calls = 0; // provider calls made for this record
};

struct BenchmarkRun {
    int shots = 0;
    MetricsReport report;
    std::vector<RecordResult> records; // benchmark order
};

struct BenchmarkOptions {
    std::vector<int> shots{0};
    std::vector<FewShotExample> example_pool; // the first n are used for n shots
    bool optimize = true;
    std::string model{kDefaultModel};
};

/// Raised when a replay fixture is missing; names the record.
class BenchmarkAborted : public std::runtime_error {
public:
    BenchmarkAborted(std::string record_id, const std::string& message)
        : std::runtime_error(message), record_id_(std::move(record_id)) {}
    auto record_id() const -> const std::string& { return record_id_; }

private:
    std::string record_id_;
};

/// One full pass per shot count. Throws std::invalid_argument when the pool
/// is too small or shares a query with the benchmark.
auto run_benchmark(const std::vector<EvalRecord>& records, const Catalog& catalog, const Database& database,
                   Provider& provider, const BenchmarkOptions& options) -> std::vector<BenchmarkRun>;

/// `shots,slice,tp,fp,fn,precision,recall,f1` with two-decimal percentages
/// and empty cells for undefined values.
auto metrics_csv(const std::vector<BenchmarkRun>& runs) -> std::string;

/// Aligned plain-text table of the same data.
auto metrics_table(const std::vector<BenchmarkRun>& runs) -> std::string;

/// Two-decimal rendering, "-" for undefined.
auto format_percent(const std::optional<double>& value) -> std::string;

} // namespace gatelens
