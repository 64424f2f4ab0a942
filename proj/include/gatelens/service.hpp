#pragma once

#include "gatelens/pipeline.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace httplib {
class Server;
}

namespace gatelens {

/// `{"columns": [...], "types": [...], "rows": [[...], ...]}`. Cells are
/// strings in the CSV rendering, null for nulls.
auto relation_to_json(const Relation& relation) -> nlohmann::ordered_json;

/// `{"verdict", ...}` plus the fields of the variant: ra_text,
/// optimized_ra_text, resolutions, columns, types, rows, ordered and timings
/// for an answer; reason and stage for a rejection; error, message, stage
/// (and line/column for parse errors) for a failure.
auto outcome_to_json(const QueryOutcome& outcome) -> nlohmann::ordered_json;

/// Tables, columns, types, descriptions and synonyms, plus the exact schema
/// text the interpreter sees. No row data.
auto catalog_to_json(const Catalog& catalog) -> nlohmann::ordered_json;

struct ServiceOptions {
    std::vector<FewShotExample> example_pool;
    int default_shots = 0;
    bool optimize = true;
    std::string model{kDefaultModel};
    std::string cors_origin = "*";
};

/// Holds the read-only state shared by all requests. The catalog, database
/// and provider must outlive the service.
class Service {
public:
    Service(const Catalog& catalog, const Database& database, Provider& provider, ServiceOptions options = {});

    /// Registers the /api routes on `server`.
    void mount(httplib::Server& server) const;

    auto pipeline_options(int shots) const -> PipelineOptions;

private:
    const Catalog& catalog_;
    const Database& database_;
    Provider& provider_;
    ServiceOptions options_;
};

/// HTTP status for an outcome of POST /api/query.
auto query_status(const QueryOutcome& outcome) -> int;

/// HTTP status for an outcome of POST /api/ra/execute, where parse and
/// type errors are the caller's fault.
auto execute_status(const QueryOutcome& outcome) -> int;

} // namespace gatelens
