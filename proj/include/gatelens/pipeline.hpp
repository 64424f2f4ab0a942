#pragma once

#include "gatelens/llm.hpp"
#include "gatelens/relation.hpp"
#include "gatelens/schema_kb.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gatelens {

enum class Stage : std::uint8_t { Interpreter, Parser, Binder, Optimizer, Compiler, Executor };

auto to_string(Stage stage) -> std::string_view;

struct StageTiming {
    Stage stage = Stage::Interpreter;
    double ms = 0.0;
};

struct Answered {
    std::string ra_text;           // as produced by the interpreter (or the expert)
    std::string optimized_ra_text; // what actually ran
    std::vector<Resolution> resolutions;
    Relation result;
    std::vector<StageTiming> timings;
    bool ordered = false; // top-level sort: row order is part of the answer
};

struct Rejected {
    std::string reason;
    Stage stage = Stage::Interpreter; // Interpreter or Binder
};

struct Failed {
    std::string error; // error kind, e.g. "MalformedResponse" or "ParseError"
    std::string message;
    Stage stage = Stage::Interpreter;
    std::size_t line = 0; // parse errors only
    std::size_t column = 0;
};

using QueryOutcome = std::variant<Answered, Rejected, Failed>;

auto verdict(const QueryOutcome& outcome) -> std::string_view; // answered, rejected, failed

struct PipelineOptions {
    std::vector<FewShotExample> examples;
    bool optimize = true;
    std::string model{kDefaultModel};
};

/// Natural-language question to result table with a single interpreter call.
/// Never throws: every failure folds into Rejected or Failed.
auto run_query(std::string_view query, const Catalog& catalog, const Database& database, Provider& provider,
               const PipelineOptions& options = {}) -> QueryOutcome;

/// The deterministic half of run_query, starting from RA text. No LLM
/// involvement; used by the expert panel and the CLI.
auto run_ra(std::string_view ra_text, const Catalog& catalog, const Database& database, bool optimize = true)
    -> QueryOutcome;

} // namespace gatelens
