#include "gatelens/pipeline.hpp"

#include "gatelens/executor.hpp"
#include "gatelens/optimizer.hpp"
#include "gatelens/parser.hpp"

#include <chrono>

namespace gatelens {

auto to_string(Stage stage) -> std::string_view {
    switch (stage) {
    case Stage::Interpreter: return "interpreter";
    case Stage::Parser: return "parser";
    case Stage::Binder: return "binder";
    case Stage::Optimizer: return "optimizer";
    case Stage::Compiler: return "compiler";
    case Stage::Executor: return "executor";
    }
    return "?";
}

auto verdict(const QueryOutcome& outcome) -> std::string_view {
    static constexpr std::string_view names[] = {"answered", "rejected", "failed"};
    return names[outcome.index()];
}

namespace {

class Stopwatch {
public:
    explicit Stopwatch(std::vector<StageTiming>& out) : out_(out) {}

    template <typename F>
    auto time(Stage stage, F&& fn) -> decltype(fn()) {
        auto start = std::chrono::steady_clock::now();
        struct Record {
            Stopwatch& sw;
            Stage stage;
            std::chrono::steady_clock::time_point start;
            ~Record() {
                std::chrono::duration<double, std::milli> d = std::chrono::steady_clock::now() - start;
                sw.out_.push_back({stage, d.count()});
            }
        } record{*this, stage, start};
        return fn();
    }

private:
    std::vector<StageTiming>& out_;
};

auto deterministic_half(std::string_view ra_text, const Catalog& catalog, const Database& database, bool optimize,
                        std::vector<StageTiming> timings) -> QueryOutcome {
    Stopwatch sw(timings);
    Stage stage = Stage::Parser;
    try {
        auto parsed = sw.time(stage, [&] { return parse(ra_text); });

        stage = Stage::Binder;
        BoundExpr bound;
        try {
            bound = sw.time(stage, [&] { return bind_and_repair(parsed, catalog); });
        } catch (const ResolveError& e) {
            return Rejected{e.what(), Stage::Binder};
        }

        stage = Stage::Compiler;
        sw.time(stage, [&] { return infer_schema(bound.expr, catalog); });

        Expr final = bound.expr;
        if (optimize) {
            stage = Stage::Optimizer;
            final = sw.time(stage, [&] { return gatelens::optimize(bound.expr, catalog); });
        }

        stage = Stage::Compiler;
        auto plan = sw.time(stage, [&] { return compile_plan(final, catalog); });

        stage = Stage::Executor;
        auto result = sw.time(stage, [&] { return execute(plan, database); });

        return Answered{std::string(ra_text), format_ra(final), std::move(bound.resolutions), std::move(result),
                        std::move(timings), is_sort(final)};
    } catch (const ParseError& e) {
        return Failed{"ParseError", e.what(), stage, e.line(), e.column()};
    } catch (const SchemaError& e) {
        return Failed{std::string(to_string(e.kind())), e.what(), stage};
    } catch (const ExecError& e) {
        return Failed{std::string(to_string(e.kind())), e.what(), stage};
    } catch (const std::exception& e) {
        return Failed{"Internal", e.what(), stage};
    }
}

} // namespace

auto run_ra(std::string_view ra_text, const Catalog& catalog, const Database& database, bool optimize)
    -> QueryOutcome {
    return deterministic_half(ra_text, catalog, database, optimize, {});
}

auto run_query(std::string_view query, const Catalog& catalog, const Database& database, Provider& provider,
               const PipelineOptions& options) -> QueryOutcome {
    std::vector<StageTiming> timings;
    InterpreterOutput interpreted;
    try {
        Stopwatch sw(timings);
        interpreted = sw.time(Stage::Interpreter, [&] {
            auto request = build_interpreter_prompt(catalog, query, options.examples, options.model);
            return parse_interpreter_output(complete(request, provider));
        });
    } catch (const LlmError& e) {
        return Failed{std::string(to_string(e.kind())), e.what(), Stage::Interpreter};
    } catch (const std::exception& e) {
        return Failed{"Internal", e.what(), Stage::Interpreter};
    }
    if (const auto* oos = std::get_if<OutOfScope>(&interpreted)) {
        return Rejected{oos->reason, Stage::Interpreter};
    }
    return deterministic_half(std::get<RaText>(interpreted).text, catalog, database, options.optimize,
                              std::move(timings));
}

} // namespace gatelens
