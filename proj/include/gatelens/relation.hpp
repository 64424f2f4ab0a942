#pragma once

#include "gatelens/schema.hpp"
#include "gatelens/text.hpp"
#include "gatelens/value.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gatelens {

using Row = std::vector<Value>;

/// In-memory table. Every row has one value per column, of the column's kind,
/// and null only where the column is nullable.
struct Relation {
    TableSchema schema;
    std::vector<Row> rows;
};

struct CaseInsensitiveLess {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const { return ascii_lower(a) < ascii_lower(b); }
};

/// Tables by name, looked up case-insensitively.
using Database = std::map<std::string, Relation, CaseInsensitiveLess>;

enum class CsvErrorKind : std::uint8_t { Malformed, HeaderMismatch, TypeParseError, NullInNonNullable, Io };

auto to_string(CsvErrorKind kind) -> std::string_view;

class CsvError : public std::runtime_error {
public:
    CsvError(CsvErrorKind kind, std::size_t row, std::string column, const std::string& message)
        : std::runtime_error(message), kind_(kind), row_(row), column_(std::move(column)) {}

    auto kind() const -> CsvErrorKind { return kind_; }
    /// 1-based data row (the header is row 0).
    auto row() const -> std::size_t { return row_; }
    auto column() const -> const std::string& { return column_; }

private:
    CsvErrorKind kind_;
    std::size_t row_;
    std::string column_;
};

/// Splits RFC-4180 text into records. Each field records whether it was
/// quoted so that `""` (empty text) and an empty cell (null) stay distinct.
struct CsvField {
    std::string text;
    bool quoted = false;
};
auto read_csv_records(std::string_view text) -> std::vector<std::vector<CsvField>>;

/// Loads a CSV with a mandatory header. Header names are matched to the
/// schema case-insensitively and in any order; the result uses schema order.
/// An empty unquoted cell is null.
auto load_csv(std::istream& in, const TableSchema& schema) -> Relation;
auto load_csv(const std::filesystem::path& path, const TableSchema& schema) -> Relation;
auto parse_csv(std::string_view text, const TableSchema& schema) -> Relation;

/// Serializes with a header row in the same dialect load_csv reads. Nulls are
/// empty cells; empty strings are written as `""`.
auto to_csv(const Relation& relation) -> std::string;

/// Loads `<dir>/<table>.csv` for every catalog table.
auto load_database(const std::filesystem::path& dir, const Catalog& catalog) -> Database;

/// Canonical result comparison. Columns are matched by name regardless of
/// order; rows are compared as multisets under the total value order unless
/// `ordered` is set (results of a top-level sort). Numbers compare with a
/// 1e-9 tolerance.
bool results_equal(const Relation& a, const Relation& b, bool ordered);

/// Lexicographic row order used for canonical sorting.
bool row_less(const Row& a, const Row& b);

} // namespace gatelens
