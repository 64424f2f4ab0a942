#pragma once

#include "gatelens/schema.hpp"
#include "gatelens/value.hpp"

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gatelens {

/// Immutable shared node with deep structural equality.
template <class T>
class Box {
public:
    Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}

    auto operator*() const -> const T& { return *ptr_; }
    auto operator->() const -> const T* { return ptr_.get(); }
    auto get() const -> const T& { return *ptr_; }

    friend bool operator==(const Box& a, const Box& b) { return a.ptr_ == b.ptr_ || *a.ptr_ == *b.ptr_; }

private:
    std::shared_ptr<const T> ptr_;
};

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

struct Term;

struct ColumnRef {
    std::string name;
    friend bool operator==(const ColumnRef&, const ColumnRef&) = default;
};

struct Literal {
    Value value;
    friend bool operator==(const Literal&, const Literal&) = default;
};

struct LowerTerm {
    Box<Term> arg;
    friend bool operator==(const LowerTerm&, const LowerTerm&) = default;
};

/// Operand of a comparison: column, literal or lower(term).
struct Term {
    std::variant<ColumnRef, Literal, LowerTerm> node;
    friend bool operator==(const Term&, const Term&) = default;
};

struct Predicate;

struct Comparison {
    CompareOp op;
    Term lhs;
    Term rhs;
    friend bool operator==(const Comparison&, const Comparison&) = default;
};

/// `column in [v1, v2, ...]`
struct InList {
    std::string column;
    std::vector<Value> values;
    friend bool operator==(const InList&, const InList&) = default;
};

/// `contains(term, "needle")`, byte-wise substring test.
struct Contains {
    Term subject;
    std::string needle;
    friend bool operator==(const Contains&, const Contains&) = default;
};

struct And {
    Box<Predicate> lhs;
    Box<Predicate> rhs;
    friend bool operator==(const And&, const And&) = default;
};

struct Or {
    Box<Predicate> lhs;
    Box<Predicate> rhs;
    friend bool operator==(const Or&, const Or&) = default;
};

struct Not {
    Box<Predicate> arg;
    friend bool operator==(const Not&, const Not&) = default;
};

struct Predicate {
    std::variant<Comparison, InList, Contains, And, Or, Not> node;
    friend bool operator==(const Predicate&, const Predicate&) = default;
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class AggFn : std::uint8_t { CountStar, Count, Sum, Avg, Min, Max };

struct Aggregate {
    AggFn fn = AggFn::CountStar;
    std::string input; // empty for CountStar
    std::string output;
    friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

struct SortKey {
    std::string column;
    bool descending = false;
    friend bool operator==(const SortKey&, const SortKey&) = default;
};

struct RenamePair {
    std::string from;
    std::string to;
    friend bool operator==(const RenamePair&, const RenamePair&) = default;
};

struct Expr;

struct Scan {
    std::string table;
    friend bool operator==(const Scan&, const Scan&) = default;
};

struct Select {
    Predicate predicate;
    Box<Expr> child;
    friend bool operator==(const Select&, const Select&) = default;
};

struct Project {
    std::vector<std::string> columns;
    Box<Expr> child;
    friend bool operator==(const Project&, const Project&) = default;
};

struct Rename {
    std::vector<RenamePair> pairs;
    Box<Expr> child;
    friend bool operator==(const Rename&, const Rename&) = default;
};

enum class SetOpKind : std::uint8_t { Union, Minus, Intersect };

struct SetOp {
    SetOpKind kind;
    Box<Expr> left;
    Box<Expr> right;
    friend bool operator==(const SetOp&, const SetOp&) = default;
};

struct Times {
    Box<Expr> left;
    Box<Expr> right;
    friend bool operator==(const Times&, const Times&) = default;
};

struct Divide {
    Box<Expr> left;
    Box<Expr> right;
    friend bool operator==(const Divide&, const Divide&) = default;
};

struct Join {
    Predicate predicate;
    Box<Expr> left;
    Box<Expr> right;
    friend bool operator==(const Join&, const Join&) = default;
};

struct GroupBy {
    std::vector<std::string> keys;
    std::vector<Aggregate> aggregates;
    Box<Expr> child;
    friend bool operator==(const GroupBy&, const GroupBy&) = default;
};

struct Distinct {
    Box<Expr> child;
    friend bool operator==(const Distinct&, const Distinct&) = default;
};

struct Sort {
    std::vector<SortKey> keys;
    Box<Expr> child;
    friend bool operator==(const Sort&, const Sort&) = default;
};

struct Limit {
    std::int64_t count = 0;
    Box<Expr> child;
    friend bool operator==(const Limit&, const Limit&) = default;
};

/// Relational-algebra expression tree. Distinct, Sort and Limit are extended
/// operators beyond classical RA.
struct Expr {
    std::variant<Scan, Select, Project, Rename, SetOp, Times, Divide, Join, GroupBy, Distinct, Sort, Limit> node;
    friend bool operator==(const Expr&, const Expr&) = default;
};

/// Builders.
namespace ra {
auto scan(std::string table) -> Expr;
auto select(Predicate p, Expr child) -> Expr;
auto project(std::vector<std::string> columns, Expr child) -> Expr;
auto rename(std::vector<RenamePair> pairs, Expr child) -> Expr;
auto union_(Expr l, Expr r) -> Expr;
auto minus(Expr l, Expr r) -> Expr;
auto intersect(Expr l, Expr r) -> Expr;
auto times(Expr l, Expr r) -> Expr;
auto divide(Expr l, Expr r) -> Expr;
auto join(Predicate p, Expr l, Expr r) -> Expr;
auto groupby(std::vector<std::string> keys, std::vector<Aggregate> aggs, Expr child) -> Expr;
auto distinct(Expr child) -> Expr;
auto sort(std::vector<SortKey> keys, Expr child) -> Expr;
auto limit(std::int64_t n, Expr child) -> Expr;

auto col(std::string name) -> Term;
auto lit(Value v) -> Term;
auto lit(const char* text) -> Term;
auto lower(Term t) -> Term;
auto cmp(CompareOp op, Term l, Term r) -> Predicate;
auto eq(Term l, Term r) -> Predicate;
auto in(std::string column, std::vector<Value> values) -> Predicate;
auto contains(Term subject, std::string needle) -> Predicate;
auto and_(Predicate l, Predicate r) -> Predicate;
auto or_(Predicate l, Predicate r) -> Predicate;
auto not_(Predicate p) -> Predicate;
} // namespace ra

// ---------------------------------------------------------------------------
// Static analysis
// ---------------------------------------------------------------------------

enum class SchemaErrorKind : std::uint8_t {
    UnknownTable,
    UnknownColumn,
    TypeMismatch,
    NotUnionCompatible,
    InvalidDivision,
    DuplicateOutputColumn,
    InvalidExpression,
};

auto to_string(SchemaErrorKind kind) -> std::string_view;

class SchemaError : public std::runtime_error {
public:
    SchemaError(SchemaErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    auto kind() const -> SchemaErrorKind { return kind_; }

private:
    SchemaErrorKind kind_;
};

/// Output schema of `expr`. Throws SchemaError; never guesses. A text literal
/// compared against a date column must spell a valid `YYYY-MM-DD` date.
auto infer_schema(const Expr& expr, const Catalog& catalog) -> TableSchema;

/// Type-checks a predicate against the schema it filters.
void check_predicate(const Predicate& p, const TableSchema& schema);

/// Canonical text in the RA grammar; parse(format_ra(e)) == e.
auto format_ra(const Expr& expr) -> std::string;
auto format_predicate(const Predicate& p) -> std::string;
auto format_literal(const Value& v) -> std::string;

/// Column names referenced by a predicate, as written.
auto predicate_columns(const Predicate& p) -> std::vector<std::string>;

/// Rewrites column references through `map` (case-insensitive lookup on the
/// key); names without an entry are left as they are.
auto rename_predicate_columns(const Predicate& p,
                              const std::vector<std::pair<std::string, std::string>>& map) -> Predicate;

auto is_sort(const Expr& expr) -> bool;

/// Number of nodes in the tree.
auto expr_size(const Expr& expr) -> std::size_t;

} // namespace gatelens
