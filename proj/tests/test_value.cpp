#include <doctest.h>

#include "gatelens/value.hpp"

#include <vector>

using namespace gatelens;

TEST_CASE("dates parse only as YYYY-MM-DD") {
    CHECK(parse_date("2024-02-29").has_value());
    CHECK_FALSE(parse_date("2023-02-29").has_value());
    CHECK_FALSE(parse_date("2024-13-01").has_value());
    CHECK_FALSE(parse_date("2024-1-01").has_value());
    CHECK_FALSE(parse_date("24-01-01").has_value());
    CHECK_FALSE(parse_date("2024/01/01").has_value());
    CHECK_FALSE(parse_date("2024-01-01 ").has_value());
    CHECK(format_date(*parse_date("1999-12-31")) == "1999-12-31");
    CHECK(*parse_date("2024-03-01") > *parse_date("2024-02-29"));
}

TEST_CASE("total order across kinds") {
    std::vector<Value> ascending{Value{}, Value{false}, Value{true}, Value{std::int64_t{-3}}, Value{0.5},
                                 Value{std::int64_t{1}}, Value{std::string("A")}, Value{std::string("a")},
                                 Value{*parse_date("2020-01-01")}};
    for (std::size_t i = 0; i + 1 < ascending.size(); ++i) {
        CAPTURE(i);
        CHECK(compare_values(ascending[i], ascending[i + 1]) == std::strong_ordering::less);
        CHECK(compare_values(ascending[i + 1], ascending[i]) == std::strong_ordering::greater);
    }
    CHECK(values_identical(Value{std::int64_t{2}}, Value{2.0}));
    CHECK(hash_value(Value{std::int64_t{2}}) == hash_value(Value{2.0}));
    CHECK(hash_value(Value{0.0}) == hash_value(Value{-0.0}));
    CHECK(values_identical(Value{}, Value{}));
}

TEST_CASE("predicate comparison is false against null") {
    for (auto op : {CompareOp::Eq, CompareOp::Ne, CompareOp::Lt, CompareOp::Le, CompareOp::Gt, CompareOp::Ge}) {
        CHECK_FALSE(evaluate_compare(op, Value{}, Value{}));
        CHECK_FALSE(evaluate_compare(op, Value{std::int64_t{1}}, Value{}));
    }
    CHECK(evaluate_compare(CompareOp::Eq, Value{std::int64_t{1}}, Value{1.0}));
    CHECK(evaluate_compare(CompareOp::Lt, Value{std::int64_t{1}}, Value{1.5}));
    CHECK(evaluate_compare(CompareOp::Ne, Value{std::string("OK")}, Value{std::string("ok")}));
}

TEST_CASE("parse_value per kind") {
    CHECK(parse_value("TRUE", TypeKind::Bool) == Value{true});
    CHECK_FALSE(parse_value("yes", TypeKind::Bool));
    CHECK(parse_value("-42", TypeKind::Int) == Value{std::int64_t{-42}});
    CHECK(parse_value("+7", TypeKind::Int) == Value{std::int64_t{7}});
    CHECK_FALSE(parse_value("+-7", TypeKind::Int));
    CHECK_FALSE(parse_value("1.5", TypeKind::Int));
    CHECK_FALSE(parse_value("99999999999999999999", TypeKind::Int));
    CHECK(parse_value("1.25", TypeKind::Float) == Value{1.25});
    CHECK_FALSE(parse_value("nan", TypeKind::Float));
    CHECK_FALSE(parse_value("", TypeKind::Float));
    CHECK(parse_value(" x ", TypeKind::Text) == Value{std::string(" x ")});
    CHECK_FALSE(parse_value("2024-13-01", TypeKind::Date));
}

TEST_CASE("text rendering") {
    CHECK(format_double(1.0) == "1.0");
    CHECK(format_double(-0.25) == "-0.25");
    CHECK(format_double(0.1) == "0.1");
    CHECK(value_to_text(Value{}).empty());
    CHECK(value_to_text(Value{true}) == "true");
    CHECK(value_to_text(Value{std::int64_t{12}}) == "12");
    CHECK(value_to_text(Value{*parse_date("2024-05-06")}) == "2024-05-06");
    CHECK(coerce_to(Value{std::int64_t{3}}, TypeKind::Float) == Value{3.0});
}
