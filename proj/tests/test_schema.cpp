#include <doctest.h>

#include "gatelens/parser.hpp"
#include "gatelens/ra.hpp"
#include "sample.hpp"

using namespace gatelens;
using gatelens::testing::sample_catalog;

namespace {

auto kind_of_error(const Expr& e, const Catalog& c) -> std::optional<SchemaErrorKind> {
    try {
        infer_schema(e, c);
    } catch (const SchemaError& err) {
        return err.kind();
    }
    return std::nullopt;
}

} // namespace

TEST_CASE("catalog document") {
    auto catalog = sample_catalog();
    REQUIRE(catalog.tables().size() == 2);
    const auto* results = catalog.find("RESULTS");
    REQUIRE(results != nullptr);
    CHECK(results->column_names() == std::vector<std::string>{"name", "test_result", "release", "duration", "test_date"});
    CHECK(results->columns[3].type.nullable);
    CHECK_FALSE(results->columns[0].type.nullable);
    CHECK(results->columns[0].synonyms == std::vector<std::string>{"truck", "trucks"});
    CHECK(catalog.domain_context() == "Truck test campaign.");
    CHECK(results->find("Test_Result") == 1);

    CHECK_THROWS_AS(parse_catalog("{"), CatalogError);
    CHECK_THROWS_AS(parse_catalog(R"({"tables": {"t": {"columns": {"a": {"type": "blob"}}}}})"), CatalogError);
    CHECK_THROWS_AS(parse_catalog(R"({"tables": {"t": {"columns": {"a": {"type": "int", "nullable": "yes"}}}}})"),
                    CatalogError);
    CHECK_THROWS_AS(parse_catalog(R"({"tables": {"t": {"columns": {"a": {"type": "int"}, "A": {"type": "int"}}}}})"),
                    CatalogError);
    CHECK_THROWS_AS(parse_catalog(R"({"tables": {"t": {"columns": {"2a": {"type": "int"}}}}})"), CatalogError);
    CHECK_THROWS_AS(parse_catalog(R"({"tables": {"select": {"columns": {"a": {"type": "int"}}}}})"), CatalogError);
    CHECK_THROWS_AS(parse_catalog(R"({"tables": {"t": {"columns": {}}}})"), CatalogError);
}

TEST_CASE("infer_schema") {
    auto c = sample_catalog();
    using namespace ra;

    SUBCASE("scan and project") {
        CHECK(infer_schema(scan("results"), c) == *c.find("results"));
        auto p = infer_schema(project({"name"}, scan("results")), c);
        REQUIRE(p.columns.size() == 1);
        CHECK(p.columns[0].name == "name");
        CHECK(p.columns[0].type.kind == TypeKind::Text);
    }
    SUBCASE("union takes names from the left") {
        auto u = infer_schema(union_(project({"name"}, scan("results")), project({"test_result"}, scan("results"))), c);
        REQUIRE(u.columns.size() == 1);
        CHECK(u.columns[0].name == "name");
        CHECK(u.columns[0].type.kind == TypeKind::Text);
    }
    SUBCASE("union of int and float widens") {
        auto u = infer_schema(union_(project({"axles"}, scan("trucks")), project({"duration"}, scan("results"))), c);
        CHECK(u.columns[0].type.kind == TypeKind::Float);
        CHECK(u.columns[0].type.nullable);
    }
    SUBCASE("errors") {
        CHECK(kind_of_error(scan("nope"), c) == SchemaErrorKind::UnknownTable);
        CHECK(kind_of_error(project({"nope"}, scan("results")), c) == SchemaErrorKind::UnknownColumn);
        CHECK(kind_of_error(select(eq(col("name"), lit(Value{std::int64_t{1}})), scan("results")), c) ==
              SchemaErrorKind::TypeMismatch);
        CHECK(kind_of_error(union_(scan("results"), scan("trucks")), c) == SchemaErrorKind::NotUnionCompatible);
        CHECK(kind_of_error(union_(project({"name"}, scan("results")), project({"axles"}, scan("trucks"))), c) ==
              SchemaErrorKind::NotUnionCompatible);
        CHECK(kind_of_error(times(scan("results"), scan("results")), c) == SchemaErrorKind::DuplicateOutputColumn);
        CHECK(kind_of_error(divide(scan("trucks"), project({"truck", "model", "axles"}, scan("trucks"))), c) ==
              SchemaErrorKind::InvalidDivision);
        CHECK(kind_of_error(divide(scan("trucks"), project({"name"}, scan("results"))), c) ==
              SchemaErrorKind::InvalidDivision);
        CHECK(kind_of_error(groupby({"name"}, {{AggFn::Sum, "release", "s"}}, scan("results")), c) ==
              SchemaErrorKind::TypeMismatch);
        CHECK(kind_of_error(groupby({"name"}, {{AggFn::CountStar, "", "name"}}, scan("results")), c) ==
              SchemaErrorKind::DuplicateOutputColumn);
        CHECK(kind_of_error(select(eq(col("test_date"), lit("2024-02-30")), scan("results")), c) ==
              SchemaErrorKind::TypeMismatch);
        CHECK(kind_of_error(select(contains(col("duration"), "1"), scan("results")), c) ==
              SchemaErrorKind::TypeMismatch);
    }
    SUBCASE("join after rename") {
        auto j = join(eq(col("name"), col("truck")), scan("results"), scan("trucks"));
        CHECK(infer_schema(j, c).columns.size() == 8);
        auto s = infer_schema(rename({{"name", "truck_name"}}, scan("results")), c);
        CHECK(s.columns[0].name == "truck_name");
    }
    SUBCASE("aggregates") {
        auto g = infer_schema(groupby({"release"},
                                      {{AggFn::CountStar, "", "n"},
                                       {AggFn::Avg, "duration", "mean_d"},
                                       {AggFn::Max, "test_date", "last"}},
                                      scan("results")),
                              c);
        REQUIRE(g.columns.size() == 4);
        CHECK(g.columns[1].type == ColumnType{TypeKind::Int, false});
        CHECK(g.columns[2].type.kind == TypeKind::Float);
        CHECK(g.columns[3].type.kind == TypeKind::Date);
    }
}

TEST_CASE("union compatibility is symmetric") {
    auto c = sample_catalog();
    std::vector<Expr> shapes{ra::project({"name"}, ra::scan("results")), ra::project({"duration"}, ra::scan("results")),
                             ra::project({"axles"}, ra::scan("trucks")), ra::project({"test_date"}, ra::scan("results")),
                             ra::project({"name", "release"}, ra::scan("results"))};
    for (const auto& a : shapes) {
        for (const auto& b : shapes) {
            CHECK(kind_of_error(ra::union_(a, b), c).has_value() == kind_of_error(ra::union_(b, a), c).has_value());
        }
    }
}

TEST_CASE("format_ra canonical text") {
    using namespace ra;
    CHECK(format_ra(select(eq(col("test_result"), lit("NOK")), scan("results"))) ==
          R"(select[test_result == "NOK"](results))");
    CHECK(format_ra(scan("results")) == "results");
    CHECK(format_ra(groupby({"name"}, {{AggFn::CountStar, "", "n"}}, scan("results"))) ==
          "groupby[name; count(*) as n](results)");
    CHECK(format_ra(groupby({}, {{AggFn::Min, "axles", "m"}}, scan("trucks"))) == "groupby[; min(axles) as m](trucks)");
    CHECK(format_ra(sort({{"a", false}, {"b", true}}, limit(3, scan("t")))) == "sort[a, b desc](limit[3](t))");
    CHECK(format_ra(rename({{"a", "b"}}, scan("t"))) == "rename[a -> b](t)");
    CHECK(format_ra(join(and_(or_(eq(col("a"), col("b")), not_(in("c", {Value{std::int64_t{1}}, Value{2.5}}))),
                              contains(lower(col("d")), "x\"y")),
                         scan("l"), scan("r"))) ==
          R"(join[(a == b or not c in [1, 2.5]) and contains(lower(d), "x\"y")](l, r))");
    CHECK(format_predicate(and_(eq(col("a"), lit(Value{})),
                                and_(eq(col("b"), lit(Value{true})), eq(col("c"), lit(Value{-1.5}))))) ==
          "a == null and (b == true and c == -1.5)");
}
