#include "gatelens/schema.hpp"

#include "gatelens/text.hpp"

#include <array>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace gatelens {

bool is_reserved_word(std::string_view s) {
    static constexpr std::array<std::string_view, 30> words = {
        "select", "project", "rename", "distinct", "sort",  "limit", "groupby",  "union",
        "minus",  "intersect", "times", "divide", "join",  "asc",   "desc",     "count",
        "sum",    "avg",     "min",    "max",      "as",    "and",   "or",       "not",
        "in",     "contains", "lower", "true",     "false", "null"};
    return std::find(words.begin(), words.end(), s) != words.end();
}

auto TableSchema::find(std::string_view column) const -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (iequals(columns[i].name, column)) {
            return i;
        }
    }
    return std::nullopt;
}

auto TableSchema::column_names() const -> std::vector<std::string> {
    std::vector<std::string> out;
    out.reserve(columns.size());
    for (const auto& c : columns) {
        out.push_back(c.name);
    }
    return out;
}

bool same_shape(const TableSchema& a, const TableSchema& b) {
    if (a.columns.size() != b.columns.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.columns.size(); ++i) {
        if (!iequals(a.columns[i].name, b.columns[i].name) || a.columns[i].type != b.columns[i].type) {
            return false;
        }
    }
    return true;
}

void Catalog::add_table(TableSchema table) {
    if (!is_valid_identifier(table.name)) {
        throw CatalogError("invalid table name '" + table.name + "'");
    }
    if (find(table.name) != nullptr) {
        throw CatalogError("duplicate table '" + table.name + "'");
    }
    if (table.columns.empty()) {
        throw CatalogError("table '" + table.name + "' has no columns");
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        const auto& col = table.columns[i];
        if (!is_valid_identifier(col.name)) {
            throw CatalogError("invalid column name '" + col.name + "' in table '" + table.name + "'");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (iequals(table.columns[j].name, col.name)) {
                throw CatalogError("duplicate column '" + col.name + "' in table '" + table.name + "'");
            }
        }
    }
    tables_.push_back(std::move(table));
}

auto Catalog::find(std::string_view table) const -> const TableSchema* {
    for (const auto& t : tables_) {
        if (iequals(t.name, table)) {
            return &t;
        }
    }
    return nullptr;
}

namespace {

auto catalog_from(const nlohmann::ordered_json& doc) -> Catalog {
    Catalog catalog;
    if (doc.contains("domain_context")) {
        if (!doc["domain_context"].is_string()) {
            throw CatalogError("'domain_context' must be a string");
        }
        catalog.set_domain_context(doc["domain_context"].get<std::string>());
    }
    for (const auto& [table_name, table_doc] : doc["tables"].items()) {
        if (!table_doc.is_object() || !table_doc.contains("columns") || !table_doc["columns"].is_object()) {
            throw CatalogError("table '" + table_name + "' must have a 'columns' object");
        }
        TableSchema table;
        table.name = table_name;
        for (const auto& [col_name, col_doc] : table_doc["columns"].items()) {
            if (!col_doc.is_object() || !col_doc.contains("type") || !col_doc["type"].is_string()) {
                throw CatalogError("column '" + table_name + "." + col_name + "' needs a string 'type'");
            }
            auto kind = parse_type_kind(col_doc["type"].get<std::string>());
            if (!kind) {
                throw CatalogError("column '" + table_name + "." + col_name + "' has unknown type '" +
                                   col_doc["type"].get<std::string>() + "'");
            }
            Column col;
            col.name = col_name;
            col.type.kind = *kind;
            col.type.nullable = col_doc.value("nullable", false);
            col.description = col_doc.value("description", std::string{});
            if (col_doc.contains("synonyms")) {
                for (const auto& s : col_doc["synonyms"]) {
                    if (!s.is_string()) {
                        throw CatalogError("synonyms of '" + table_name + "." + col_name + "' must be strings");
                    }
                    col.synonyms.push_back(s.get<std::string>());
                }
            }
            table.columns.push_back(std::move(col));
        }
        catalog.add_table(std::move(table));
    }
    return catalog;
}


} // namespace

auto parse_catalog(std::string_view json_text) -> Catalog {
    using json = nlohmann::ordered_json;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw CatalogError(std::string("catalog is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("tables") || !doc["tables"].is_object()) {
        throw CatalogError("catalog must be an object with a 'tables' object");
    }
    try {
        return catalog_from(doc);
    } catch (const nlohmann::json::exception& e) {
        throw CatalogError(std::string("malformed catalog: ") + e.what());
    }
}

auto load_catalog(const std::filesystem::path& path) -> Catalog {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CatalogError("cannot open catalog file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_catalog(buf.str());
}

} // namespace gatelens
