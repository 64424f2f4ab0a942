#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace gatelens {

/// Calendar date stored as days since 1970-01-01.
struct Date {
    std::int32_t days = 0;

    friend constexpr auto operator<=>(const Date&, const Date&) = default;
};

/// Parses strict `YYYY-MM-DD`; rejects anything else, including impossible
/// calendar dates such as 2024-02-30.
auto parse_date(std::string_view text) -> std::optional<Date>;
auto format_date(Date date) -> std::string;

enum class TypeKind : std::uint8_t { Bool, Int, Float, Text, Date };

auto to_string(TypeKind kind) -> std::string_view;
auto parse_type_kind(std::string_view name) -> std::optional<TypeKind>;

struct ColumnType {
    TypeKind kind = TypeKind::Text;
    bool nullable = false;

    friend bool operator==(const ColumnType&, const ColumnType&) = default;
};

inline bool is_numeric(TypeKind kind) { return kind == TypeKind::Int || kind == TypeKind::Float; }

/// Same kind, or both numeric (int/float promote to float).
inline bool kinds_compatible(TypeKind a, TypeKind b) {
    return a == b || (is_numeric(a) && is_numeric(b));
}

/// Common kind for two compatible kinds (int + float -> float).
inline TypeKind common_kind(TypeKind a, TypeKind b) {
    if (a == b) {
        return a;
    }
    return TypeKind::Float;
}

/// A single cell. Alternatives are ordered to match the canonical cross-kind
/// order: null < bool < numeric < text < date.
using Value = std::variant<std::monostate, bool, std::int64_t, double, std::string, Date>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

/// Kind of a non-null value.
auto kind_of(const Value& v) -> std::optional<TypeKind>;

/// Total order used for sorting, grouping and canonical comparison.
/// Nulls compare equal to each other; int and float compare numerically.
auto compare_values(const Value& a, const Value& b) -> std::strong_ordering;

/// Identity for set semantics: nulls are identical, int 1 and float 1.0 are
/// identical.
inline bool values_identical(const Value& a, const Value& b) {
    return compare_values(a, b) == std::strong_ordering::equal;
}

/// Predicate comparison: false whenever either side is null.
enum class CompareOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

auto to_string(CompareOp op) -> std::string_view;
bool evaluate_compare(CompareOp op, const Value& a, const Value& b);

/// Hash consistent with values_identical.
auto hash_value(const Value& v) -> std::size_t;

/// Converts an int value to float when the target kind is float.
auto coerce_to(const Value& v, TypeKind kind) -> Value;

/// Shortest round-trip decimal form of a double, always with a fraction part
/// (`1.0`, `-0.25`).
auto format_double(double value) -> std::string;

/// Plain text rendering used by CSV output and the HTTP API. Null renders as
/// the empty string.
auto value_to_text(const Value& v) -> std::string;

/// Parses one cell of the given kind. Returns nullopt on malformed input.
/// Empty text is not handled here (callers map it to null).
auto parse_value(std::string_view text, TypeKind kind) -> std::optional<Value>;

} // namespace gatelens
