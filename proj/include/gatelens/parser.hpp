#pragma once

#include "gatelens/ra.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gatelens {

/// Syntax error with a 1-based position. Columns count UTF-8 code points.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected, std::string found,
               const std::string& message);

    auto line() const -> std::size_t { return line_; }
    auto column() const -> std::size_t { return column_; }
    auto expected() const -> const std::vector<std::string>& { return expected_; }
    auto found() const -> const std::string& { return found_; }
    /// The message without the position prefix.
    auto detail() const -> const std::string& { return detail_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::vector<std::string> expected_;
    std::string found_;
    std::string detail_;
};

/// Parses the RA grammar:
///
///     expr    := unary | binary | IDENT
///     unary   := (select|σ)[pred](expr) | (project|π)[cols](expr)
///              | (rename|ρ)[a -> b, ...](expr) | distinct(expr)
///              | sort[col (asc|desc)?, ...](expr) | limit[INT](expr)
///              | (groupby|γ)[cols? ; agg, ...](expr)
///     binary  := (union|minus|intersect|times|divide)(expr, expr)
///              | join[pred](expr, expr)
///     agg     := count(*|col) as name | (sum|avg|min|max)(col) as name
///     pred    := or-chain of and-chains of [not] (compare | (pred))
///     compare := term op term | col in [lit, ...] | contains(term, STRING)
///     term    := IDENT | literal | lower(term)
///
/// Keywords are lowercase and reserved. Never crashes; any malformed input
/// yields ParseError. Structural checks are left to infer_schema.
auto parse(std::string_view input) -> Expr;

/// Parses a standalone predicate (same grammar as inside `select[...]`).
auto parse_predicate(std::string_view input) -> Predicate;

} // namespace gatelens
