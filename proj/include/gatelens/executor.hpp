#pragma once

#include "gatelens/ra.hpp"
#include "gatelens/relation.hpp"

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace gatelens {

enum class PlanOp : std::uint8_t {
    Scan,
    Filter,
    Project,
    Rename,
    Union,
    Minus,
    Intersect,
    CrossProduct,
    HashJoin,
    NestedLoopJoin,
    Divide,
    Aggregate,
    Distinct,
    Sort,
    Limit,
};

auto to_string(PlanOp op) -> std::string_view;

/// Predicate with column references resolved to indices and date literals
/// converted. Opaque outside the executor.
struct CompiledPredicate;

struct CompiledAggregate {
    AggFn fn = AggFn::CountStar;
    std::size_t input = 0;
};

/// Physical operator. Child column indices are resolved at compile time and
/// valid for the child's output schema.
struct PlanNode {
    PlanOp op = PlanOp::Scan;
    std::size_t id = 0; // pre-order position, indexes ExecutionStats::nodes
    TableSchema schema; // output schema
    std::vector<PlanNode> children;

    std::string table;                                         // Scan
    std::vector<std::size_t> columns;                          // Project, Aggregate keys, Divide quotient
    std::vector<std::size_t> divisor_columns;                  // Divide: dividend index per divisor column
    std::vector<bool> descending;                              // Sort (parallel to columns)
    std::vector<std::pair<std::size_t, std::size_t>> join_keys; // HashJoin equality keys (left, right)
    std::vector<CompiledAggregate> aggregates;
    std::shared_ptr<const CompiledPredicate> predicate; // Filter, joins
    std::int64_t limit = 0;
};

struct Plan {
    PlanNode root;
    std::size_t node_count = 0;

    auto schema() const -> const TableSchema& { return root.schema; }
};

/// Single pass from a type-checked expression to an executable plan. All
/// static validation (column resolution, operand types, join-key types)
/// happens here; throws SchemaError like infer_schema.
auto compile_plan(const Expr& expr, const Catalog& catalog) -> Plan;

/// Indented operator tree, one node per line.
auto explain(const Plan& plan) -> std::string;

struct NodeStats {
    PlanOp op = PlanOp::Scan;
    std::uint64_t rows_in = 0; // rows consumed from all children
    std::uint64_t rows_out = 0;
};

struct ExecutionStats {
    std::vector<NodeStats> nodes; // by PlanNode::id
};

enum class ExecErrorKind : std::uint8_t { MissingTable, RuntimeTypeError, IntegerOverflow };

auto to_string(ExecErrorKind kind) -> std::string_view;

class ExecError : public std::runtime_error {
public:
    ExecError(ExecErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    auto kind() const -> ExecErrorKind { return kind_; }

private:
    ExecErrorKind kind_;
};

/// Evaluates the plan. Bag semantics except at union/minus/intersect/divide
/// and distinct, which return duplicate-free results in first-seen order.
/// Reentrant: the plan and the database are only read.
auto execute(const Plan& plan, const Database& database, ExecutionStats* stats = nullptr) -> Relation;

/// compile_plan + execute.
auto evaluate(const Expr& expr, const Catalog& catalog, const Database& database,
              ExecutionStats* stats = nullptr) -> Relation;

} // namespace gatelens
