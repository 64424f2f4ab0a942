#pragma once

#include "gatelens/ra.hpp"

#include <cstddef>

namespace gatelens {

struct OptimizerOptions {
    /// Upper bound on individual rewrite applications.
    std::size_t rewrite_budget = 10'000;
};

/// Heuristic rewriting that moves data reduction towards the leaves:
///
///  1. split conjunctive selections;
///  2. push selections below times/join/union/minus/intersect/distinct/sort
///     when the referenced columns allow it;
///  3. fuse a selection over times (or join) that references both sides
///     into the join predicate;
///  4. prune columns downward, inserting narrowing projections above scans;
///  5. collapse adjacent projections;
///  6. collapse distinct over distinct.
///
/// Rules are applied to a fixed point. The result has the same output schema
/// and evaluates to the same relation on every database. Requires
/// infer_schema(expr) to succeed; never throws, and falls back to returning
/// the input if anything unexpected happens.
auto optimize(const Expr& expr, const Catalog& catalog, const OptimizerOptions& options = {}) -> Expr;

} // namespace gatelens
