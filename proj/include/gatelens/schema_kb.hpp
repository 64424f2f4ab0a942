#pragma once

#include "gatelens/ra.hpp"
#include "gatelens/schema.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gatelens {

/// Human-readable catalog for the interpreter prompt: domain context, then
/// every table and column with type, nullability, description and synonyms.
/// Contains no row data.
auto render_schema_prompt(const Catalog& catalog) -> std::string;

enum class ResolutionMethod : std::uint8_t { Exact, CaseFold, Synonym, Normalized, EditDistance };

auto to_string(ResolutionMethod method) -> std::string_view;

struct Resolution {
    std::string requested;
    std::string resolved;
    ResolutionMethod method = ResolutionMethod::Exact;
    int distance = 0; // non-zero only for EditDistance
    friend bool operator==(const Resolution&, const Resolution&) = default;
};

struct Candidate {
    std::string name;
    std::vector<std::string> synonyms;
};

enum class ResolveErrorKind : std::uint8_t { Unresolved, Ambiguous };

class ResolveError : public std::runtime_error {
public:
    ResolveError(ResolveErrorKind kind, std::string requested, std::vector<std::string> tied);

    auto kind() const -> ResolveErrorKind { return kind_; }
    auto requested() const -> const std::string& { return requested_; }
    /// Sorted candidate names sharing the best match (Ambiguous only).
    auto tied() const -> const std::vector<std::string>& { return tied_; }

private:
    ResolveErrorKind kind_;
    std::string requested_;
    std::vector<std::string> tied_;
};

/// Lowercase with spaces, underscores and hyphens removed.
auto normalize_identifier(std::string_view s) -> std::string;

auto levenshtein(std::string_view a, std::string_view b) -> std::size_t;

inline constexpr int kMaxEditDistance = 2;

/// Tries, in order: exact name, case-insensitive name, case-insensitive
/// synonym, normalized name or synonym, and finally edit distance over
/// normalized names and synonyms (unique minimum, at most kMaxEditDistance).
/// The first stage with a match decides; several candidates matching in
/// that stage is Ambiguous. The result does not depend on candidate order.
auto resolve_identifier(std::string_view requested, const std::vector<Candidate>& candidates) -> Resolution;

struct BoundExpr {
    Expr expr;
    std::vector<Resolution> resolutions; // non-exact resolutions, in tree order
};

/// Rewrites every table and column reference to its canonical name. Column
/// references resolve against the output columns of the operand they read
/// from; rename targets and aggregate outputs are definitions and are kept
/// as written. Throws ResolveError on the first unresolved or ambiguous name.
auto bind_and_repair(const Expr& expr, const Catalog& catalog) -> BoundExpr;

} // namespace gatelens
