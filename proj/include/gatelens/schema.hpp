#pragma once

#include "gatelens/value.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gatelens {

struct Column {
    std::string name;
    ColumnType type;
    std::string description;
    std::vector<std::string> synonyms;

    friend bool operator==(const Column&, const Column&) = default;
};

/// Ordered columns of a table or of an intermediate result. Names are stored
/// as written and looked up case-insensitively.
struct TableSchema {
    std::string name;
    std::vector<Column> columns;

    auto find(std::string_view column) const -> std::optional<std::size_t>;
    auto column_names() const -> std::vector<std::string>;
    auto size() const -> std::size_t { return columns.size(); }

    friend bool operator==(const TableSchema&, const TableSchema&) = default;
};

/// Same column names (case-insensitive) and types, in order. Descriptions,
/// synonyms and the schema name are ignored.
bool same_shape(const TableSchema& a, const TableSchema& b);

class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Catalog {
public:
    Catalog() = default;

    /// Throws CatalogError on invalid identifiers or duplicate names.
    void add_table(TableSchema table);
    auto find(std::string_view table) const -> const TableSchema*;
    auto tables() const -> const std::vector<TableSchema>& { return tables_; }

    auto domain_context() const -> const std::string& { return domain_context_; }
    void set_domain_context(std::string text) { domain_context_ = std::move(text); }

private:
    std::vector<TableSchema> tables_;
    std::string domain_context_;
};

/// Reads the JSON catalog document:
/// `{"domain_context": "...", "tables": {"t": {"description": "...",
///   "columns": {"c": {"type": "text", "nullable": false,
///   "description": "...", "synonyms": ["..."]}}}}}`.
/// Column order follows the document order.
auto parse_catalog(std::string_view json_text) -> Catalog;
auto load_catalog(const std::filesystem::path& path) -> Catalog;

} // namespace gatelens
