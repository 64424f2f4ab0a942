#include <doctest.h>

#include "gatelens/parser.hpp"
#include "gatelens/schema_kb.hpp"
#include "sample.hpp"

#include <algorithm>
#include <random>

using namespace gatelens;

namespace {

auto result_columns() -> std::vector<Candidate> {
    return {{"name", {"truck", "trucks"}}, {"test_result", {}}};
}

auto resolve_error(std::string_view name, const std::vector<Candidate>& candidates) -> ResolveError {
    try {
        resolve_identifier(name, candidates);
    } catch (const ResolveError& e) {
        return e;
    }
    FAIL("expected a resolve error for " << name);
    throw std::logic_error("unreachable");
}

} // namespace

TEST_CASE("schema rendering") {
    auto c = gatelens::testing::sample_catalog();
    auto text = render_schema_prompt(c);
    for (const auto* needle : {"Table results", "name (text, not null): Truck name", "duration (float, nullable)",
                               "[also called: truck, trucks]", "test_date (date", "Truck test campaign."}) {
        CAPTURE(needle);
        CHECK(text.find(needle) != std::string::npos);
    }
    CHECK(render_schema_prompt(c) == text);
    CHECK(render_schema_prompt(Catalog{}) == "No tables are available.\n");

    Catalog one;
    one.add_table({"t", {{"a", {TypeKind::Int, false}, "", {}}, {"b", {TypeKind::Date, true}, "", {}}}});
    auto small = render_schema_prompt(one);
    CHECK(small.find("a (int") != std::string::npos);
    CHECK(small.find("b (date") != std::string::npos);
}

TEST_CASE("resolution stages") {
    auto cands = result_columns();
    CHECK(resolve_identifier("test_result", cands) == Resolution{"test_result", "test_result", ResolutionMethod::Exact, 0});
    CHECK(resolve_identifier("TEST_Result", cands) ==
          Resolution{"TEST_Result", "test_result", ResolutionMethod::CaseFold, 0});
    CHECK(resolve_identifier("truck", cands) == Resolution{"truck", "name", ResolutionMethod::Synonym, 0});
    CHECK(resolve_identifier("Trucks", cands).method == ResolutionMethod::Synonym);
    for (const auto* spelled : {"Test Result", "test-result", "TESTRESULT"}) {
        CAPTURE(spelled);
        auto r = resolve_identifier(spelled, cands);
        CHECK(r.resolved == "test_result");
        CHECK(r.method == ResolutionMethod::Normalized);
        CHECK(r.distance == 0);
    }
    CHECK(resolve_identifier("tst_result", cands) ==
          Resolution{"tst_result", "test_result", ResolutionMethod::EditDistance, 1});
    CHECK(resolve_identifier("tes_reslt", cands).distance == 2);
    CHECK(resolve_identifier("truk", cands).resolved == "name");

    auto none = resolve_error("xyz", cands);
    CHECK(none.kind() == ResolveErrorKind::Unresolved);
    CHECK(none.requested() == "xyz");
    CHECK(resolve_error("tst_rslt_x", cands).kind() == ResolveErrorKind::Unresolved);
}

TEST_CASE("ties are ambiguous") {
    std::vector<Candidate> cands{{"run_a", {}}, {"run_b", {}}, {"result", {"verdict"}}, {"status", {"verdict"}}};
    auto edit = resolve_error("run_c", cands);
    CHECK(edit.kind() == ResolveErrorKind::Ambiguous);
    CHECK(edit.tied() == std::vector<std::string>{"run_a", "run_b"});
    CHECK(resolve_error("Verdict", cands).kind() == ResolveErrorKind::Ambiguous);
}

TEST_CASE("resolution ignores candidate order") {
    std::vector<Candidate> cands{{"name", {"truck"}}, {"test_result", {"outcome"}}, {"release", {"rc"}},
                                 {"duration", {}}, {"test_date", {"date"}}, {"test_case", {}}};
    std::mt19937_64 rng(3);
    for (const auto* q : {"Test Result", "tst_case", "trucks", "RC", "durtion", "test_dat", "xyz", "test"}) {
        std::string first;
        for (int i = 0; i < 20; ++i) {
            std::shuffle(cands.begin(), cands.end(), rng);
            std::string got;
            try {
                got = resolve_identifier(q, cands).resolved;
            } catch (const ResolveError& e) {
                got = std::string("error:") + e.what();
            }
            if (i == 0) {
                first = got;
            }
            CHECK(got == first);
        }
    }
}

TEST_CASE("levenshtein") {
    CHECK(levenshtein("", "") == 0);
    CHECK(levenshtein("abc", "") == 3);
    CHECK(levenshtein("kitten", "sitting") == 3);
    CHECK(levenshtein("flaw", "lawn") == 2);
    CHECK(normalize_identifier("Test Result-x_y") == "testresultxy");
}

TEST_CASE("bind_and_repair") {
    auto c = gatelens::testing::sample_catalog();

    SUBCASE("repairs names and reports each repair") {
        auto bound = bind_and_repair(parse(R"(select[Test_Result == "NOK"](Results))"), c);
        CHECK(format_ra(bound.expr) == R"(select[test_result == "NOK"](results))");
        REQUIRE(bound.resolutions.size() == 2);
        CHECK(bound.resolutions[0] == Resolution{"Results", "results", ResolutionMethod::CaseFold, 0});
        CHECK(bound.resolutions[1] == Resolution{"Test_Result", "test_result", ResolutionMethod::CaseFold, 0});
    }
    SUBCASE("canonical input is unchanged") {
        auto e = parse(R"(project[name](select[test_result == "NOK"](results)))");
        auto bound = bind_and_repair(e, c);
        CHECK(bound.expr == e);
        CHECK(bound.resolutions.empty());
    }
    SUBCASE("idempotent") {
        auto once = bind_and_repair(
            parse(R"(sort[trucks desc](groupby[truck; count(*) as n, avg(durtion) as d](select[outcome == "NOK" and TestDate > "2024-01-01"](reslts))))"),
            c);
        CHECK(once.resolutions.size() == 6);
        auto twice = bind_and_repair(once.expr, c);
        CHECK(twice.expr == once.expr);
        CHECK(twice.resolutions.empty());
        CHECK(format_ra(once.expr) ==
              R"(sort[name desc](groupby[name; count(*) as n, avg(duration) as d](select[test_result == "NOK" and test_date > "2024-01-01"](results))))");
    }
    SUBCASE("scopes follow the operators") {
        auto bound = bind_and_repair(parse("project[truck_name](rename[truck -> truck_name](results))"), c);
        CHECK(format_ra(bound.expr) == "project[truck_name](rename[name -> truck_name](results))");
        auto joined = bind_and_repair(parse("join[trucks == Truck](results, trucks)"), c);
        CHECK(format_ra(joined.expr) == "join[name == truck](results, trucks)");
        auto grouped = bind_and_repair(parse("select[N > 1](groupby[release; count(*) as n](results))"), c);
        CHECK(format_ra(grouped.expr) == "select[n > 1](groupby[release; count(*) as n](results))");
    }
    SUBCASE("unknown names fail closed") {
        try {
            bind_and_repair(parse("select[beauty == 1](results)"), c);
            FAIL("expected Unresolved");
        } catch (const ResolveError& e) {
            CHECK(e.kind() == ResolveErrorKind::Unresolved);
            CHECK(e.requested() == "beauty");
        }
        CHECK_THROWS_AS(bind_and_repair(parse("project[model](results)"), c), ResolveError);
        CHECK_THROWS_AS(bind_and_repair(parse("inventory"), c), ResolveError);
    }
}
