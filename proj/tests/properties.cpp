#include <doctest.h>

#include "gatelens/executor.hpp"
#include "gatelens/optimizer.hpp"
#include "gatelens/parser.hpp"
#include "generators.hpp"
#include "reference.hpp"

#include <random>

using namespace gatelens;
using namespace gatelens::testing;

TEST_CASE("parse inverts format_ra on generated trees") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        auto catalog = random_catalog(rng);
        ExprGenerator gen(catalog, rng);
        auto e = gen.expr(4);
        auto text = format_ra(e);
        CAPTURE(text);
        CHECK(parse(text) == e);
    }
}

TEST_CASE("random bytes never crash the parser") {
    std::mt19937_64 rng(11);
    const std::string alphabet = "select[](),;->=!<>\"\\ abcxyz019.+-*σπργ\n\t";
    int parsed = 0;
    for (int i = 0; i < 10'000; ++i) {
        std::string input;
        auto len = std::uniform_int_distribution<int>(0, 256)(rng);
        bool raw = i % 2 == 0;
        for (int k = 0; k < len; ++k) {
            if (raw) {
                input += static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng));
            } else {
                input += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
            }
        }
        try {
            parse(input);
            ++parsed;
        } catch (const ParseError& e) {
            CHECK(e.line() >= 1);
            CHECK(e.column() >= 1);
        }
    }
    MESSAGE(parsed << " of 10000 inputs parsed");
}

TEST_CASE("compiled execution matches the reference evaluator") {
    std::mt19937_64 rng(42);
    std::map<std::string, int> ops;
    for (int i = 0; i < 1000; ++i) {
        auto catalog = random_catalog(rng);
        auto db = random_database(catalog, rng);
        ExprGenerator gen(catalog, rng);
        auto e = gen.expr(3);
        count_operators(e, ops);
        auto text = format_ra(e);
        CAPTURE(text);
        auto expected = reference_eval(e, catalog, db);
        auto actual = evaluate(e, catalog, db);
        CHECK(results_equal(actual, expected, is_sort(e)));
    }
    for (const char* op : {"scan", "select", "project", "rename", "union", "minus", "intersect", "times", "divide",
                           "join", "groupby", "distinct", "sort", "limit"}) {
        CAPTURE(op);
        CHECK(ops[op] > 0);
    }
}

TEST_CASE("optimizer preserves schema and results") {
    std::mt19937_64 rng(1234);
    for (int i = 0; i < 1000; ++i) {
        auto catalog = random_catalog(rng);
        auto db = random_database(catalog, rng);
        ExprGenerator gen(catalog, rng);
        auto e = gen.expr(3);
        auto o = optimize(e, catalog);
        CAPTURE(format_ra(e));
        CAPTURE(format_ra(o));
        CHECK(same_shape(infer_schema(o, catalog), infer_schema(e, catalog)));
        CHECK(results_equal(evaluate(o, catalog, db), evaluate(e, catalog, db), is_sort(e)));
        CHECK(optimize(o, catalog) == o);
    }
}
