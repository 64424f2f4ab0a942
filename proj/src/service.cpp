#include "gatelens/service.hpp"

#include "gatelens/overloaded.hpp"

#include <httplib.h>

namespace gatelens {

using ojson = nlohmann::ordered_json;

auto relation_to_json(const Relation& relation) -> ojson {
    ojson columns = ojson::array();
    ojson types = ojson::array();
    for (const auto& c : relation.schema.columns) {
        columns.push_back(c.name);
        types.push_back(to_string(c.type.kind));
    }
    ojson rows = ojson::array();
    for (const auto& row : relation.rows) {
        ojson cells = ojson::array();
        for (const auto& v : row) {
            if (is_null(v)) {
                cells.push_back(nullptr);
            } else {
                cells.push_back(value_to_text(v));
            }
        }
        rows.push_back(std::move(cells));
    }
    return {{"columns", std::move(columns)}, {"types", std::move(types)}, {"rows", std::move(rows)}};
}

auto outcome_to_json(const QueryOutcome& outcome) -> ojson {
    ojson out{{"verdict", verdict(outcome)}};
    std::visit(Overloaded{
                   [&](const Answered& a) {
                       out["ra_text"] = a.ra_text;
                       out["optimized_ra_text"] = a.optimized_ra_text;
                       ojson resolutions = ojson::array();
                       for (const auto& r : a.resolutions) {
                           ojson entry{{"requested", r.requested},
                                       {"resolved", r.resolved},
                                       {"method", to_string(r.method)}};
                           if (r.method == ResolutionMethod::EditDistance) {
                               entry["distance"] = r.distance;
                           }
                           resolutions.push_back(std::move(entry));
                       }
                       out["resolutions"] = std::move(resolutions);
                       auto table = relation_to_json(a.result);
                       for (auto& [key, value] : table.items()) {
                           out[key] = value;
                       }
                       out["ordered"] = a.ordered;
                       ojson timings = ojson::array();
                       for (const auto& t : a.timings) {
                           timings.push_back({{"stage", to_string(t.stage)}, {"ms", t.ms}});
                       }
                       out["timings"] = std::move(timings);
                   },
                   [&](const Rejected& r) {
                       out["reason"] = r.reason;
                       out["stage"] = to_string(r.stage);
                   },
                   [&](const Failed& f) {
                       out["error"] = f.error;
                       out["message"] = f.message;
                       out["stage"] = to_string(f.stage);
                       if (f.line > 0) {
                           out["line"] = f.line;
                           out["column"] = f.column;
                       }
                   },
               },
               outcome);
    return out;
}

auto catalog_to_json(const Catalog& catalog) -> ojson {
    ojson tables = ojson::array();
    for (const auto& t : catalog.tables()) {
        ojson columns = ojson::array();
        for (const auto& c : t.columns) {
            columns.push_back({{"name", c.name},
                               {"type", to_string(c.type.kind)},
                               {"nullable", c.type.nullable},
                               {"description", c.description},
                               {"synonyms", c.synonyms}});
        }
        tables.push_back({{"name", t.name}, {"columns", std::move(columns)}});
    }
    return {{"domain_context", catalog.domain_context()},
            {"tables", std::move(tables)},
            {"prompt", render_schema_prompt(catalog)}};
}

auto query_status(const QueryOutcome& outcome) -> int {
    static constexpr int codes[] = {200, 422, 500};
    return codes[outcome.index()];
}

auto execute_status(const QueryOutcome& outcome) -> int {
    if (const auto* f = std::get_if<Failed>(&outcome); f && (f->stage == Stage::Parser || f->stage == Stage::Compiler)) {
        return 400;
    }
    return query_status(outcome);
}

Service::Service(const Catalog& catalog, const Database& database, Provider& provider, ServiceOptions options)
    : catalog_(catalog), database_(database), provider_(provider), options_(std::move(options)) {
    if (options_.default_shots < 0 || static_cast<std::size_t>(options_.default_shots) > options_.example_pool.size()) {
        throw std::invalid_argument("default shots exceed the example pool");
    }
}

auto Service::pipeline_options(int shots) const -> PipelineOptions {
    auto n = static_cast<std::ptrdiff_t>(shots);
    return {{options_.example_pool.begin(), options_.example_pool.begin() + n}, options_.optimize, options_.model};
}

namespace {

void reply(httplib::Response& res, int status, const ojson& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void bad_request(httplib::Response& res, const std::string& message) {
    reply(res, 400, {{"error", "BadRequest"}, {"message", message}});
}

// Parses the body as a JSON object; replies 400 and returns nullopt otherwise.
auto json_body(const httplib::Request& req, httplib::Response& res) -> std::optional<nlohmann::json> {
    auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
        bad_request(res, "request body must be a JSON object");
        return std::nullopt;
    }
    return body;
}

} // namespace

void Service::mount(httplib::Server& server) const {
    auto origin = options_.cors_origin;
    server.set_default_headers({{"Access-Control-Allow-Origin", origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("ok", "text/plain");
    });

    server.Get("/api/schema", [this](const httplib::Request&, httplib::Response& res) {
        reply(res, 200, catalog_to_json(catalog_));
    });

    server.Post("/api/query", [this](const httplib::Request& req, httplib::Response& res) {
        auto body = json_body(req, res);
        if (!body) {
            return;
        }
        if (!body->contains("query") || !(*body)["query"].is_string() || (*body)["query"].get<std::string>().empty()) {
            return bad_request(res, "'query' must be a non-empty string");
        }
        int shots = options_.default_shots;
        if (body->contains("shots") && !(*body)["shots"].is_null()) {
            const auto& s = (*body)["shots"];
            if (!s.is_number_integer() || s.get<long long>() < 0 ||
                s.get<long long>() > static_cast<long long>(options_.example_pool.size())) {
                return bad_request(res, "'shots' must be an integer between 0 and " +
                                            std::to_string(options_.example_pool.size()));
            }
            shots = s.get<int>();
        }
        auto outcome = run_query((*body)["query"].get<std::string>(), catalog_, database_, provider_,
                                 pipeline_options(shots));
        reply(res, query_status(outcome), outcome_to_json(outcome));
    });

    server.Post("/api/ra/execute", [this](const httplib::Request& req, httplib::Response& res) {
        auto body = json_body(req, res);
        if (!body) {
            return;
        }
        if (!body->contains("ra") || !(*body)["ra"].is_string()) {
            return bad_request(res, "'ra' must be a string");
        }
        auto outcome = run_ra((*body)["ra"].get<std::string>(), catalog_, database_, options_.optimize);
        reply(res, execute_status(outcome), outcome_to_json(outcome));
    });

    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "unknown error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            message = e.what();
        } catch (...) {
        }
        reply(res, 500, {{"error", "Internal"}, {"message", message}});
    });
}

} // namespace gatelens
