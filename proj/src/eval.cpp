#include "gatelens/eval.hpp"

#include "gatelens/overloaded.hpp"
#include "gatelens/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gatelens {

namespace {

using json = nlohmann::json;

auto read_file(const std::filesystem::path& path) -> std::string {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw EvalError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Calls fn(line_number, object) for each non-blank line.
template <typename F>
void for_each_json_line(std::string_view text, F&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(pos, end - pos);
        ++line_no;
        pos = end + 1;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
            continue;
        }
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            throw EvalError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!obj.is_object()) {
            throw EvalError("line " + std::to_string(line_no) + ": expected a JSON object");
        }
        try {
            fn(line_no, obj);
        } catch (const json::exception& e) {
            throw EvalError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

auto optional_string(const json& obj, const char* key) -> std::optional<std::string> {
    if (!obj.contains(key) || obj[key].is_null()) {
        return std::nullopt;
    }
    return obj[key].get<std::string>();
}

auto parse_record(std::size_t line_no, const json& obj) -> EvalRecord {
    auto fail = [&](const std::string& msg) { throw EvalError("line " + std::to_string(line_no) + ": " + msg); };
    static const std::set<std::string> known{"id", "query", "level", "category", "role", "expected"};
    for (const auto& [key, _] : obj.items()) {
        if (!known.contains(key)) {
            fail("unknown field '" + key + "'");
        }
    }
    EvalRecord r;
    if (!obj.contains("id") || !obj.contains("query") || !obj.contains("expected")) {
        fail("id, query and expected are required");
    }
    r.id = obj["id"].is_string() ? obj["id"].get<std::string>() : obj["id"].dump();
    r.query = obj["query"].get<std::string>();
    if (obj.contains("level") && !obj["level"].is_null()) {
        auto level = obj["level"].get<int>();
        if (level < 1 || level > 4) {
            fail("level must be between 1 and 4");
        }
        r.level = level;
    }
    r.category = optional_string(obj, "category");
    r.role = optional_string(obj, "role");
    if (r.role && *r.role != "mechanical" && *r.role != "project" && *r.role != "software") {
        fail("role must be mechanical, project or software");
    }
    const auto& expected = obj["expected"];
    auto kind = expected.at("kind").get<std::string>();
    if (kind == "reject") {
        r.expected = ExpectReject{};
    } else if (kind == "table") {
        auto csv = expected.at("csv").get<std::string>();
        try {
            if (read_csv_records(csv).empty()) {
                fail("expected table has no header");
            }
        } catch (const CsvError& e) {
            fail(std::string("expected table: ") + e.what());
        }
        r.expected = ExpectTable{std::move(csv)};
    } else {
        fail("expected.kind must be table or reject");
    }
    return r;
}

auto normalize_query(std::string_view q) -> std::string {
    std::string out;
    bool space = false;
    for (char c : q) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = !out.empty();
            continue;
        }
        if (space) {
            out += ' ';
            space = false;
        }
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

auto percent(std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) {
        return std::nullopt;
    }
    return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

auto parse_benchmark(std::string_view jsonl) -> std::vector<EvalRecord> {
    std::vector<EvalRecord> out;
    std::set<std::string> ids;
    for_each_json_line(jsonl, [&](std::size_t line_no, const json& obj) {
        auto r = parse_record(line_no, obj);
        if (!ids.insert(r.id).second) {
            throw EvalError("line " + std::to_string(line_no) + ": duplicate id '" + r.id + "'");
        }
        out.push_back(std::move(r));
    });
    return out;
}

auto load_benchmark(const std::filesystem::path& path) -> std::vector<EvalRecord> {
    return parse_benchmark(read_file(path));
}

auto parse_examples(std::string_view jsonl) -> std::vector<FewShotExample> {
    std::vector<FewShotExample> out;
    for_each_json_line(jsonl, [&](std::size_t, const json& obj) {
        out.push_back({obj.at("query").get<std::string>(), obj.at("ra").get<std::string>(),
                       optional_string(obj, "note").value_or("")});
    });
    return out;
}

auto load_examples(const std::filesystem::path& path) -> std::vector<FewShotExample> {
    return parse_examples(read_file(path));
}

auto to_string(Score score) -> std::string_view {
    switch (score) {
    case Score::TP: return "TP";
    case Score::FP: return "FP";
    case Score::FN: return "FN";
    }
    return "?";
}

auto score_outcome(const QueryOutcome& outcome, const Expected& expected) -> Score {
    if (std::holds_alternative<Failed>(outcome)) {
        return Score::FN;
    }
    if (std::holds_alternative<ExpectReject>(expected)) {
        return std::holds_alternative<Rejected>(outcome) ? Score::TP : Score::FP;
    }
    const auto* answer = std::get_if<Answered>(&outcome);
    if (!answer) {
        return Score::FN;
    }
    auto schema = answer->result.schema;
    for (auto& c : schema.columns) {
        c.type.nullable = true;
    }
    try {
        auto want = parse_csv(std::get<ExpectTable>(expected).csv, schema);
        return results_equal(answer->result, want, answer->ordered) ? Score::TP : Score::FP;
    } catch (const CsvError&) {
        return Score::FP;
    }
}

auto f1_score(double precision, double recall) -> std::optional<double> {
    if (precision + recall == 0.0) {
        return std::nullopt;
    }
    return 2.0 * precision * recall / (precision + recall);
}

auto metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) -> Metrics {
    Metrics m{tp, fp, fn, percent(tp, tp + fp), percent(tp, tp + fn), std::nullopt};
    if (m.precision && m.recall) {
        m.f1 = f1_score(*m.precision, *m.recall);
    }
    return m;
}

auto MetricsReport::find(std::string_view slice) const -> const SliceMetrics* {
    for (const auto& s : slices) {
        if (s.slice == slice) {
            return &s;
        }
    }
    return nullptr;
}

auto compute_metrics(const std::vector<ScoredRecord>& scored) -> MetricsReport {
    struct Counts {
        std::size_t tp = 0, fp = 0, fn = 0;
        void add(Score s) { ++(s == Score::TP ? tp : s == Score::FP ? fp : fn); }
    };
    Counts overall;
    std::map<int, Counts> levels;
    std::map<std::string, Counts> categories;
    std::map<std::string, Counts> roles;
    for (const auto& s : scored) {
        overall.add(s.score);
        if (s.record->level) {
            levels[*s.record->level].add(s.score);
        }
        if (s.record->category) {
            categories[*s.record->category].add(s.score);
        }
        if (s.record->role) {
            roles[*s.record->role].add(s.score);
        }
    }
    MetricsReport report;
    auto push = [&](std::string name, const Counts& c) {
        report.slices.push_back({std::move(name), metrics_from_counts(c.tp, c.fp, c.fn)});
    };
    push("overall", overall);
    for (const auto& [level, c] : levels) {
        push("level=" + std::to_string(level), c);
    }
    for (const auto& [category, c] : categories) {
        push("category=" + category, c);
    }
    for (const auto& [role, c] : roles) {
        push("role=" + role, c);
    }
    return report;
}

auto run_benchmark(const std::vector<EvalRecord>& records, const Catalog& catalog, const Database& database,
                   Provider& provider, const BenchmarkOptions& options) -> std::vector<BenchmarkRun> {
    std::set<std::string> queries;
    for (const auto& r : records) {
        queries.insert(normalize_query(r.query));
    }
    for (const auto& ex : options.example_pool) {
        if (queries.contains(normalize_query(ex.query))) {
            throw std::invalid_argument("example pool overlaps the benchmark: \"" + ex.query + "\"");
        }
    }

    std::vector<BenchmarkRun> runs;
    for (int shots : options.shots) {
        if (shots < 0 || static_cast<std::size_t>(shots) > options.example_pool.size()) {
            throw std::invalid_argument(std::to_string(shots) + " shots requested but the example pool has " +
                                        std::to_string(options.example_pool.size()));
        }
        PipelineOptions pipeline{{options.example_pool.begin(), options.example_pool.begin() + shots},
                                 options.optimize,
                                 options.model};
        BenchmarkRun run;
        run.shots = shots;
        std::vector<ScoredRecord> scored;
        for (const auto& record : records) {
            auto before = provider.calls();
            auto outcome = run_query(record.query, catalog, database, provider, pipeline);
            RecordResult result;
            result.id = record.id;
            result.calls = provider.calls() - before;
            result.score = score_outcome(outcome, record.expected);
            result.verdict = std::string(verdict(outcome));
            std::visit(Overloaded{
                           [&](const Answered& a) { result.detail = a.ra_text; },
                           [&](const Rejected& r) { result.detail = r.reason; },
                           [&](const Failed& f) {
                               if (f.error == to_string(LlmErrorKind::FixtureMiss)) {
                                   throw BenchmarkAborted(record.id,
                                                          "no fixture for record " + record.id + ": " + f.message);
                               }
                               result.detail = f.error + ": " + f.message;
                           },
                       },
                       outcome);
            scored.push_back({&record, result.score});
            run.records.push_back(std::move(result));
        }
        run.report = compute_metrics(scored);
        runs.push_back(std::move(run));
    }
    return runs;
}

auto format_percent(const std::optional<double>& value) -> std::string {
    if (!value) {
        return "-";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *value);
    return buf;
}

auto metrics_csv(const std::vector<BenchmarkRun>& runs) -> std::string {
    auto cell = [](const std::optional<double>& v) { return v ? format_percent(v) : std::string(); };
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) {
            return s;
        }
        std::string out = "\"";
        for (char c : s) {
            out += c;
            if (c == '"') {
                out += '"';
            }
        }
        return out + "\"";
    };
    std::string out = "shots,slice,tp,fp,fn,precision,recall,f1\n";
    for (const auto& run : runs) {
        for (const auto& s : run.report.slices) {
            const auto& m = s.metrics;
            out += std::to_string(run.shots) + "," + quote(s.slice) + "," + std::to_string(m.tp) + "," +
                   std::to_string(m.fp) + "," + std::to_string(m.fn) + "," + cell(m.precision) + "," +
                   cell(m.recall) + "," + cell(m.f1) + "\n";
        }
    }
    return out;
}

auto metrics_table(const std::vector<BenchmarkRun>& runs) -> std::string {
    std::vector<std::vector<std::string>> rows{{"shots", "slice", "TP", "FP", "FN", "P%", "R%", "F1%"}};
    for (const auto& run : runs) {
        for (const auto& s : run.report.slices) {
            const auto& m = s.metrics;
            rows.push_back({std::to_string(run.shots), s.slice, std::to_string(m.tp), std::to_string(m.fp),
                            std::to_string(m.fn), format_percent(m.precision), format_percent(m.recall),
                            format_percent(m.f1)});
        }
    }
    std::vector<std::size_t> width(rows[0].size(), 0);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            width[i] = std::max(width[i], row[i].size());
        }
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            // text columns left-aligned, numbers right-aligned
            auto pad = std::string(width[i] - row[i].size(), ' ');
            line += i == 1 ? row[i] + pad : pad + row[i];
            if (i + 1 < row.size()) {
                line += "  ";
            }
        }
        out += line + "\n";
    }
    return out;
}

} // namespace gatelens
