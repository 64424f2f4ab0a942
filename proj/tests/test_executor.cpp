#include <doctest.h>

#include "gatelens/executor.hpp"
#include "gatelens/parser.hpp"
#include "sample.hpp"

using namespace gatelens;

namespace {

auto text(const char* s) -> Value {
    return Value{std::string(s)};
}

auto num(std::int64_t i) -> Value {
    return Value{i};
}

struct Fixture {
    Catalog catalog = gatelens::testing::sample_catalog();
    Database db = gatelens::testing::sample_database(catalog);

    auto run(std::string_view ra) -> Relation { return evaluate(parse(ra), catalog, db); }
};

// Catalog with a pair table and a divisor table for division examples.
auto pairs_catalog() -> Catalog {
    Catalog c;
    c.add_table({"l", {{"a", {TypeKind::Int, false}, "", {}}, {"b", {TypeKind::Text, false}, "", {}}}});
    c.add_table({"r", {{"b", {TypeKind::Text, false}, "", {}}}});
    c.add_table({"e", {{"x", {TypeKind::Int, true}, "", {}}, {"d", {TypeKind::Float, true}, "", {}}}});
    return c;
}

} // namespace

TEST_CASE_FIXTURE(Fixture, "selection keeps matching rows") {
    auto out = run(R"(project[name](select[test_result == "NOK"](results)))");
    CHECK(out.rows == std::vector<Row>{{text("truck2")}, {text("truck3")}, {text("truck1")}});

    Relation tiny{{"r", {{"name", {TypeKind::Text, false}, "", {}}, {"test_result", {TypeKind::Text, false}, "", {}}}},
                  {{text("truck1"), text("OK")}, {text("truck2"), text("NOK")}}};
    Catalog c;
    c.add_table(tiny.schema);
    Database d;
    d.emplace("r", tiny);
    auto nok = evaluate(parse(R"(select[test_result == "NOK"](r))"), c, d);
    CHECK(nok.rows == std::vector<Row>{{text("truck2"), text("NOK")}});
}

TEST_CASE_FIXTURE(Fixture, "null comparisons are false") {
    CHECK(run("select[duration > 0](results)").rows.size() == 3);
    CHECK(run("select[duration != 7.0](results)").rows.size() == 2);
    CHECK(run("select[not duration > 0](results)").rows.size() == 1);
    CHECK(run("select[duration == null](results)").rows.empty());
}

TEST_CASE_FIXTURE(Fixture, "dates, lower, contains, in") {
    CHECK(run(R"(select[test_date >= "2024-02-01"](results))").rows.size() == 2);
    CHECK(run(R"(select[test_date in ["2024-01-10", "2024-02-03"]](results))").rows.size() == 2);
    CHECK(run(R"(select[lower(test_result) == "nok"](results))").rows.size() == 3);
    CHECK(run(R"(select[contains(name, "k1")](results))").rows.size() == 2);
    CHECK(run(R"(select[release in ["R2", "R9"]](results))").rows.size() == 2);
}

TEST_CASE_FIXTURE(Fixture, "aggregation") {
    auto g = run("groupby[release; count(*) as n, count(duration) as nd, sum(duration) as s, avg(duration) as a, "
                 "min(test_date) as first, max(name) as top](results)");
    REQUIRE(g.rows.size() == 2);
    CHECK(g.rows[0][0] == text("R1"));
    CHECK(g.rows[0][1] == num(2));
    CHECK(g.rows[0][2] == num(1));
    CHECK(g.rows[0][3] == Value{10.5});
    CHECK(g.rows[0][4] == Value{10.5});
    CHECK(g.rows[0][5] == Value{*parse_date("2024-01-10")});
    CHECK(g.rows[0][6] == text("truck2"));
    CHECK(g.rows[1][3] == Value{10.25});

    SUBCASE("count(*) over empty input") {
        auto e = run(R"(groupby[; count(*) as n, avg(duration) as a, max(name) as m](select[name == "none"](results)))");
        REQUIRE(e.rows.size() == 1);
        CHECK(e.rows[0] == Row{num(0), Value{}, Value{}});
    }
    SUBCASE("keyed groupby of empty input yields no groups") {
        CHECK(run(R"(groupby[name; avg(duration) as a](select[name == "none"](results)))").rows.empty());
    }
    SUBCASE("avg of all-null group is null") {
        auto n = run(R"(groupby[name; avg(duration) as a, sum(duration) as s, count(duration) as c](select[name == "truck2"](results)))");
        REQUIRE(n.rows.size() == 1);
        CHECK(n.rows[0] == Row{text("truck2"), Value{}, Value{}, num(0)});
    }
    SUBCASE("integer sums stay integers") {
        auto s = run("groupby[model; sum(axles) as s](trucks)");
        CHECK(s.rows == std::vector<Row>{{text("FH"), num(5)}, {text("FM"), num(3)}});
    }
}

TEST_CASE("division") {
    auto c = pairs_catalog();
    Database db;
    db.emplace("l", Relation{*c.find("l"), {{num(1), text("x")}, {num(1), text("y")}, {num(2), text("x")}}});
    db.emplace("r", Relation{*c.find("r"), {{text("x")}, {text("y")}}});
    db.emplace("e", Relation{*c.find("e"), {}});
    CHECK(evaluate(parse("divide(l, r)"), c, db).rows == std::vector<Row>{{num(1)}});
    CHECK(evaluate(parse(R"(divide(l, select[b == "x"](r)))"), c, db).rows == std::vector<Row>{{num(1)}, {num(2)}});
    CHECK(evaluate(parse(R"(divide(l, select[b == "z"](r)))"), c, db).rows == std::vector<Row>{{num(1)}, {num(2)}});
    db.at("r").rows.push_back({text("z")});
    CHECK(evaluate(parse("divide(l, r)"), c, db).rows.empty());
}

TEST_CASE("set operators deduplicate in first-seen order") {
    auto c = pairs_catalog();
    Database db;
    db.emplace("l", Relation{*c.find("l"), {{num(1), text("x")}, {num(1), text("x")}, {num(2), text("y")}}});
    db.emplace("r", Relation{*c.find("r"), {{text("y")}, {text("y")}, {text("w")}}});
    db.emplace("e", Relation{*c.find("e"), {{num(1), Value{1.0}}, {Value{}, Value{}}, {Value{}, Value{}}}});
    CHECK(evaluate(parse("union(project[b](l), r)"), c, db).rows ==
          std::vector<Row>{{text("x")}, {text("y")}, {text("w")}});
    CHECK(evaluate(parse("minus(project[b](l), r)"), c, db).rows == std::vector<Row>{{text("x")}});
    CHECK(evaluate(parse("intersect(project[b](l), r)"), c, db).rows == std::vector<Row>{{text("y")}});
    CHECK(evaluate(parse("distinct(l)"), c, db).rows.size() == 2);
    CHECK(evaluate(parse("project[b](l)"), c, db).rows.size() == 3);

    auto nulls = evaluate(parse("union(e, e)"), c, db);
    CHECK(nulls.rows.size() == 2);
    auto mixed = evaluate(parse("union(project[a](l), project[d](e))"), c, db);
    CHECK(mixed.schema.columns[0].type.kind == TypeKind::Float);
    CHECK(mixed.rows == std::vector<Row>{{Value{1.0}}, {Value{2.0}}, {Value{}}});
}

TEST_CASE_FIXTURE(Fixture, "sort is stable and limit truncates") {
    auto s = run("project[name, release](sort[release desc](results))");
    CHECK(s.rows == std::vector<Row>{{text("truck3"), text("R2")},
                                     {text("truck1"), text("R2")},
                                     {text("truck1"), text("R1")},
                                     {text("truck2"), text("R1")}});
    auto nulls_first = run("project[duration](sort[duration](results))");
    CHECK(is_null(nulls_first.rows[0][0]));
    CHECK(run("limit[2](sort[duration desc](results))").rows[0][3] == Value{10.5});
    CHECK(run("limit[0](results)").rows.empty());
    CHECK(run("limit[100](results)").rows.size() == 4);
}

TEST_CASE_FIXTURE(Fixture, "joins") {
    auto plan = compile_plan(parse(R"(join[name == truck and axles > 2](results, trucks))"), catalog);
    CHECK(plan.root.op == PlanOp::HashJoin);
    CHECK(plan.root.join_keys.size() == 1);
    ExecutionStats stats;
    auto out = execute(plan, db, &stats);
    CHECK(out.rows.size() == 2);
    CHECK(stats.nodes.size() == 3);
    CHECK(stats.nodes[0].rows_in == 7);
    CHECK(stats.nodes[0].rows_out == 2);

    auto loop = compile_plan(parse("join[name < truck](results, trucks)"), catalog);
    CHECK(loop.root.op == PlanOp::NestedLoopJoin);
    CHECK(execute(loop, db).rows.size() == 5);

    CHECK(run("times(results, trucks)").rows.size() == 12);
}

TEST_CASE_FIXTURE(Fixture, "static errors come from compile_plan") {
    auto kind = [&](std::string_view ra) -> std::optional<SchemaErrorKind> {
        try {
            compile_plan(parse(ra), catalog);
        } catch (const SchemaError& e) {
            return e.kind();
        }
        return std::nullopt;
    };
    CHECK(kind("times(results, results)") == SchemaErrorKind::DuplicateOutputColumn);
    CHECK(kind("join[name == axles](results, trucks)") == SchemaErrorKind::TypeMismatch);
    CHECK(kind("divide(trucks, results)") == SchemaErrorKind::InvalidDivision);
    CHECK(kind("select[x == 1](nowhere)") == SchemaErrorKind::UnknownTable);
    CHECK(kind("join[truck == truck](results, trucks)") == std::nullopt);
}

TEST_CASE_FIXTURE(Fixture, "runtime errors") {
    Database partial;
    partial.emplace("results", db.at("results"));
    try {
        evaluate(parse("trucks"), catalog, partial);
        FAIL("expected MissingTable");
    } catch (const ExecError& e) {
        CHECK(e.kind() == ExecErrorKind::MissingTable);
        CHECK(std::string(e.what()).find("trucks") != std::string::npos);
    }
    Catalog big;
    big.add_table({"n", {{"v", {TypeKind::Int, false}, "", {}}}});
    Database nd;
    nd.emplace("n", Relation{*big.find("n"), {{num(INT64_MAX)}, {num(1)}}});
    try {
        evaluate(parse("groupby[; sum(v) as s](n)"), big, nd);
        FAIL("expected IntegerOverflow");
    } catch (const ExecError& e) {
        CHECK(e.kind() == ExecErrorKind::IntegerOverflow);
    }
}

TEST_CASE_FIXTURE(Fixture, "explain lists one operator per line") {
    auto plan = compile_plan(parse(R"(project[name](select[test_result == "NOK"](results)))"), catalog);
    CHECK(plan.node_count == 3);
    CHECK(explain(plan) == "Project -> (name)\n"
                           "  Filter -> (name, test_result, release, duration, test_date)\n"
                           "    Scan results -> (name, test_result, release, duration, test_date)\n");
}
