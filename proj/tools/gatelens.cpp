// gatelens: command-line front end and HTTP server.

#include "gatelens/eval.hpp"
#include "gatelens/overloaded.hpp"
#include "gatelens/parser.hpp"
#include "gatelens/pipeline.hpp"
#include "gatelens/service.hpp"

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace gatelens;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Globals {
    std::string catalog = "data/truck/catalog.json";
    std::string data = "data/truck";
    std::string provider = "replay";
    std::string fixtures = "fixtures";
    std::string format;
    std::string model;
    bool no_optimize = false;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

auto read_text(const std::string& path) -> std::string {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

auto model_of(const Globals& g) -> std::string {
    if (!g.model.empty()) {
        return g.model;
    }
    if (const char* env = std::getenv("GATELENS_MODEL"); env != nullptr && *env != '\0') {
        return env;
    }
    return std::string(kDefaultModel);
}

auto make_provider(const Globals& g) -> std::unique_ptr<Provider> {
    if (g.provider == "live") {
        return std::make_unique<LiveProvider>(LiveConfig::from_env());
    }
    if (g.provider == "record") {
        return std::make_unique<FixtureProvider>(g.fixtures, std::make_shared<LiveProvider>(LiveConfig::from_env()));
    }
    return std::make_unique<FixtureProvider>(g.fixtures);
}

struct World {
    Catalog catalog;
    Database database;
};

auto load_world(const Globals& g) -> World {
    World w;
    w.catalog = load_catalog(g.catalog);
    w.database = load_database(g.data, w.catalog);
    return w;
}

auto parse_shots(const std::string& text) -> std::vector<int> {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            int n = std::stoi(part, &used);
            if (used != part.size() || n < 0) {
                throw std::invalid_argument(part);
            }
            out.push_back(n);
        } catch (const std::exception&) {
            throw UsageError("--shots expects a comma-separated list of non-negative integers, got '" + text + "'");
        }
    }
    if (out.empty()) {
        throw UsageError("--shots is empty");
    }
    return out;
}

// Prints an outcome; returns the exit code.
auto report(const QueryOutcome& outcome, const std::string& format) -> int {
    if (format == "jsonl") {
        std::cout << outcome_to_json(outcome).dump() << "\n";
        return std::holds_alternative<Answered>(outcome) ? kOk : kFailure;
    }
    return std::visit(Overloaded{
                          [](const Answered& a) {
                              std::cerr << "ra: " << a.optimized_ra_text << "\n";
                              for (const auto& r : a.resolutions) {
                                  std::cerr << "resolved: " << r.requested << " -> " << r.resolved << " ("
                                            << to_string(r.method) << ")\n";
                              }
                              std::cout << to_csv(a.result);
                              return kOk;
                          },
                          [](const Rejected& r) {
                              std::cerr << "rejected at " << to_string(r.stage) << ": " << r.reason << "\n";
                              return kFailure;
                          },
                          [](const Failed& f) {
                              std::cerr << "failed at " << to_string(f.stage) << " (" << f.error << "): " << f.message
                                        << "\n";
                              return kFailure;
                          },
                      },
                      outcome);
}

auto cmd_parse(const std::string& input) -> int {
    auto text = read_text(input);
    try {
        std::cout << format_ra(parse(text)) << "\n";
        return kOk;
    } catch (const ParseError& e) {
        std::cerr << input << ":" << e.what() << "\n";
        return kFailure;
    }
}

auto cmd_exec(const Globals& g, const std::string& ra) -> int {
    auto world = load_world(g);
    return report(run_ra(ra, world.catalog, world.database, !g.no_optimize), g.format);
}

auto cmd_query(const Globals& g, const std::string& q, int shots, const std::string& examples_path) -> int {
    auto world = load_world(g);
    PipelineOptions options;
    options.optimize = !g.no_optimize;
    options.model = model_of(g);
    if (shots > 0) {
        auto pool = load_examples(examples_path);
        if (static_cast<std::size_t>(shots) > pool.size()) {
            throw UsageError("--shots " + std::to_string(shots) + " exceeds the " + std::to_string(pool.size()) +
                             " examples in " + examples_path);
        }
        options.examples.assign(pool.begin(), pool.begin() + shots);
    }
    auto provider = make_provider(g);
    return report(run_query(q, world.catalog, world.database, *provider, options), g.format);
}

auto cmd_eval(const Globals& g, const std::string& bench, const std::string& shots, const std::string& examples_path,
              const std::string& out_csv) -> int {
    auto world = load_world(g);
    auto records = load_benchmark(bench);
    BenchmarkOptions options;
    options.shots = parse_shots(shots);
    options.optimize = !g.no_optimize;
    options.model = model_of(g);
    if (std::any_of(options.shots.begin(), options.shots.end(), [](int s) { return s > 0; })) {
        options.example_pool = load_examples(examples_path);
    }
    auto provider = make_provider(g);
    std::vector<BenchmarkRun> runs;
    try {
        runs = run_benchmark(records, world.catalog, world.database, *provider, options);
    } catch (const BenchmarkAborted& e) {
        std::cerr << "aborted at record " << e.record_id() << ": " << e.what() << "\n";
        return kFailure;
    }

    if (g.format == "csv") {
        std::cout << metrics_csv(runs);
    } else if (g.format == "jsonl") {
        for (const auto& run : runs) {
            for (const auto& r : run.records) {
                std::cout << nlohmann::json{{"shots", run.shots}, {"id", r.id},         {"score", to_string(r.score)},
                                            {"verdict", r.verdict}, {"detail", r.detail}, {"calls", r.calls}}
                                 .dump()
                          << "\n";
            }
        }
    } else {
        std::cout << metrics_table(runs);
    }
    if (!out_csv.empty()) {
        std::ofstream(out_csv) << metrics_csv(runs);
    }

    std::size_t failed = 0;
    for (const auto& run : runs) {
        for (const auto& r : run.records) {
            if (r.verdict == "failed") {
                ++failed;
                std::cerr << "shots=" << run.shots << " " << r.id << ": " << r.detail << "\n";
            }
        }
    }
    // A failed outcome under replay means the fixtures or the engine are out of step.
    return failed > 0 && g.provider == "replay" ? kFailure : kOk;
}

httplib::Server* g_server = nullptr;

auto cmd_serve(const Globals& g, const std::string& host, int port, int shots, const std::string& examples_path)
    -> int {
    auto world = load_world(g);
    auto provider = make_provider(g);
    ServiceOptions options;
    options.optimize = !g.no_optimize;
    options.model = model_of(g);
    options.default_shots = shots;
    if (std::filesystem::exists(examples_path)) {
        options.example_pool = load_examples(examples_path);
    }
    if (static_cast<std::size_t>(shots) > options.example_pool.size()) {
        throw UsageError("--shots exceeds the example pool");
    }
    Service service(world.catalog, world.database, *provider, options);
    httplib::Server server;
    service.mount(server);
    g_server = &server;
    std::signal(SIGINT, [](int) { g_server->stop(); });
    std::signal(SIGTERM, [](int) { g_server->stop(); });
    std::cerr << "listening on http://" << host << ":" << port << " (provider " << g.provider << ")\n";
    if (!server.listen(host, port)) {
        std::cerr << "cannot listen on " << host << ":" << port << "\n";
        return kFailure;
    }
    return kOk;
}

// Writes the fixture each benchmark question would need if the model answered
// with the gold response, for every requested shot count.
auto cmd_record_gold(const Globals& g, const std::string& bench, const std::string& gold_path,
                     const std::string& shots, const std::string& examples_path) -> int {
    auto catalog = load_catalog(g.catalog);
    auto records = load_benchmark(bench);
    std::map<std::string, std::string> gold;
    std::istringstream lines(read_text(gold_path));
    for (std::string line; std::getline(lines, line);) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        auto obj = nlohmann::json::parse(line);
        gold[obj.at("id").get<std::string>()] = obj.at("response").get<std::string>();
    }
    auto shot_counts = parse_shots(shots);
    std::vector<FewShotExample> pool;
    if (std::any_of(shot_counts.begin(), shot_counts.end(), [](int s) { return s > 0; })) {
        pool = load_examples(examples_path);
    }
    FixtureProvider store(g.fixtures);
    std::filesystem::create_directories(g.fixtures);
    std::size_t written = 0;
    for (int n : shot_counts) {
        if (static_cast<std::size_t>(n) > pool.size()) {
            throw UsageError("--shots " + std::to_string(n) + " exceeds the example pool");
        }
        std::vector<FewShotExample> examples(pool.begin(), pool.begin() + n);
        for (const auto& r : records) {
            auto it = gold.find(r.id);
            if (it == gold.end()) {
                std::cerr << "no gold response for " << r.id << "\n";
                return kFailure;
            }
            store.store(build_interpreter_prompt(catalog, r.query, examples, model_of(g)), it->second);
            ++written;
        }
    }
    std::cerr << "wrote " << written << " fixtures to " << g.fixtures << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Natural-language questions over release-validation tables, answered through relational algebra."};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--catalog", g.catalog, "Catalog JSON")->capture_default_str();
    app.add_option("--data", g.data, "Directory with one CSV per table")->capture_default_str();
    app.add_option("--provider", g.provider, "LLM backend")
        ->check(CLI::IsMember({"live", "replay", "record"}))
        ->capture_default_str();
    app.add_option("--fixtures", g.fixtures, "Fixture directory for replay/record")->capture_default_str();
    app.add_option("--format", g.format, "Machine-readable output")->check(CLI::IsMember({"csv", "jsonl"}));
    app.add_option("--model", g.model, "Model id (default: $GATELENS_MODEL or gpt-4o)");
    app.add_flag("--no-optimize", g.no_optimize, "Run the plan exactly as written");

    std::string parse_input = "-";
    auto* parse_cmd = app.add_subcommand("parse", "Parse RA text and print its canonical form");
    parse_cmd->add_option("input", parse_input, "File, or - for stdin")->capture_default_str();

    std::string ra;
    auto* exec_cmd = app.add_subcommand("exec", "Run an RA expression against the data, no LLM");
    exec_cmd->add_option("--ra", ra, "RA expression")->required();

    std::string question;
    int shots = 0;
    std::string examples = "data/bench/examples.jsonl";
    auto* query_cmd = app.add_subcommand("query", "Answer a natural-language question");
    query_cmd->add_option("--q", question, "Question")->required();
    query_cmd->add_option("--shots", shots, "Few-shot examples to include")->check(CLI::NonNegativeNumber);
    query_cmd->add_option("--examples", examples, "Few-shot pool (JSONL)")->capture_default_str();

    std::string bench;
    std::string shot_list = "0";
    std::string out_csv;
    auto* eval_cmd = app.add_subcommand("eval", "Score a benchmark");
    eval_cmd->add_option("--bench", bench, "Benchmark JSONL")->required();
    eval_cmd->add_option("--shots", shot_list, "Comma-separated shot counts")->capture_default_str();
    eval_cmd->add_option("--examples", examples, "Few-shot pool (JSONL)")->capture_default_str();
    eval_cmd->add_option("--out-csv", out_csv, "Also write the metrics CSV here");

    std::string host = "0.0.0.0";
    int port = 8080;
    auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
    serve_cmd->add_option("--host", host)->capture_default_str();
    serve_cmd->add_option("--port", port)->check(CLI::Range(1, 65535))->capture_default_str();
    serve_cmd->add_option("--shots", shots, "Default few-shot count")->check(CLI::NonNegativeNumber);
    serve_cmd->add_option("--examples", examples, "Few-shot pool (JSONL)")->capture_default_str();

    std::string gold;
    auto* gold_cmd = app.add_subcommand("record-gold", "Write fixtures that answer a benchmark with its gold responses");
    gold_cmd->add_option("--bench", bench, "Benchmark JSONL")->required();
    gold_cmd->add_option("--gold", gold, "JSONL of {id, response}")->required();
    gold_cmd->add_option("--shots", shot_list, "Comma-separated shot counts")->capture_default_str();
    gold_cmd->add_option("--examples", examples, "Few-shot pool (JSONL)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*parse_cmd) {
            return cmd_parse(parse_input);
        }
        if (*exec_cmd) {
            return cmd_exec(g, ra);
        }
        if (*query_cmd) {
            return cmd_query(g, question, shots, examples);
        }
        if (*eval_cmd) {
            return cmd_eval(g, bench, shot_list, examples, out_csv);
        }
        if (*serve_cmd) {
            return cmd_serve(g, host, port, shots, examples);
        }
        if (*gold_cmd) {
            return cmd_record_gold(g, bench, gold, shot_list, examples);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}
