#include "gatelens/relation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace gatelens {

auto to_string(CsvErrorKind kind) -> std::string_view {
    switch (kind) {
    case CsvErrorKind::Malformed: return "Malformed";
    case CsvErrorKind::HeaderMismatch: return "HeaderMismatch";
    case CsvErrorKind::TypeParseError: return "TypeParseError";
    case CsvErrorKind::NullInNonNullable: return "NullInNonNullable";
    case CsvErrorKind::Io: return "Io";
    }
    return "?";
}

auto read_csv_records(std::string_view text) -> std::vector<std::vector<CsvField>> {
    std::vector<std::vector<CsvField>> records;
    std::vector<CsvField> record;
    CsvField field;
    std::size_t i = 0;
    std::size_t line = 1;
    bool at_record_start = true;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field = {};
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
        at_record_start = true;
    };

    while (i < text.size()) {
        char c = text[i];
        if (field.text.empty() && !field.quoted && c == '"') {
            field.quoted = true;
            ++i;
            while (true) {
                if (i >= text.size()) {
                    throw CsvError(CsvErrorKind::Malformed, records.size(), "",
                                   "unterminated quoted field starting on line " + std::to_string(line));
                }
                if (text[i] == '"') {
                    if (i + 1 < text.size() && text[i + 1] == '"') {
                        field.text += '"';
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                if (text[i] == '\n') {
                    ++line;
                }
                field.text += text[i++];
            }
            if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                throw CsvError(CsvErrorKind::Malformed, records.size(), "",
                               "unexpected character after closing quote on line " + std::to_string(line));
            }
            at_record_start = false;
            continue;
        }
        if (c == ',') {
            end_field();
            at_record_start = false;
            ++i;
            continue;
        }
        if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
                ++i;
            }
            ++i;
            ++line;
            end_record();
            continue;
        }
        if (field.quoted) {
            throw CsvError(CsvErrorKind::Malformed, records.size(), "",
                           "unexpected character after closing quote on line " + std::to_string(line));
        }
        field.text += c;
        at_record_start = false;
        ++i;
    }
    if (!at_record_start || !record.empty()) {
        end_record();
    }
    return records;
}

namespace {

auto column_list(const TableSchema& schema) -> std::string {
    std::string out;
    for (const auto& c : schema.columns) {
        out += out.empty() ? c.name : "," + c.name;
    }
    return out;
}

auto needs_quotes(std::string_view s) -> bool {
    return s.empty() || s.find_first_of(",\"\r\n") != std::string_view::npos;
}

auto quote(std::string_view s) -> std::string {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

bool numbers_close(double x, double y) {
    double diff = std::fabs(x - y);
    return diff <= 1e-9 || diff <= 1e-9 * std::max(std::fabs(x), std::fabs(y));
}

bool values_close(const Value& a, const Value& b) {
    auto ka = kind_of(a);
    auto kb = kind_of(b);
    if (ka && kb && is_numeric(*ka) && is_numeric(*kb)) {
        auto to_d = [](const Value& v) {
            return v.index() == 2 ? static_cast<double>(std::get<std::int64_t>(v)) : std::get<double>(v);
        };
        return numbers_close(to_d(a), to_d(b));
    }
    return values_identical(a, b);
}

} // namespace

auto parse_csv(std::string_view text, const TableSchema& schema) -> Relation {
    auto records = read_csv_records(text);
    if (records.empty()) {
        throw CsvError(CsvErrorKind::HeaderMismatch, 0, "", "missing header row (expected " + column_list(schema) + ")");
    }
    const auto& header = records.front();
    if (header.size() != schema.columns.size()) {
        throw CsvError(CsvErrorKind::HeaderMismatch, 0, "",
                       "header has " + std::to_string(header.size()) + " columns, expected " +
                           std::to_string(schema.columns.size()) + " (" + column_list(schema) + ")");
    }
    // position in file -> schema column
    std::vector<std::size_t> target(header.size());
    std::vector<bool> seen(schema.columns.size(), false);
    for (std::size_t i = 0; i < header.size(); ++i) {
        auto idx = schema.find(header[i].text);
        if (!idx || seen[*idx]) {
            throw CsvError(CsvErrorKind::HeaderMismatch, 0, header[i].text,
                           "unexpected header column '" + header[i].text + "' (expected " + column_list(schema) + ")");
        }
        seen[*idx] = true;
        target[i] = *idx;
    }

    Relation out;
    out.schema = schema;
    out.rows.reserve(records.size() - 1);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        // A blank line can only be a null row in a one-column table.
        if (header.size() > 1 && rec.size() == 1 && rec[0].text.empty() && !rec[0].quoted) {
            continue;
        }
        if (rec.size() != header.size()) {
            throw CsvError(CsvErrorKind::Malformed, r, "",
                           "row " + std::to_string(r) + " has " + std::to_string(rec.size()) + " fields, expected " +
                               std::to_string(header.size()));
        }
        Row row(schema.columns.size());
        for (std::size_t i = 0; i < rec.size(); ++i) {
            const auto& col = schema.columns[target[i]];
            const auto& cell = rec[i];
            bool empty_text_value = cell.quoted && cell.text.empty() && col.type.kind == TypeKind::Text;
            if (cell.text.empty() && !empty_text_value) {
                if (!col.type.nullable) {
                    throw CsvError(CsvErrorKind::NullInNonNullable, r, col.name,
                                   "row " + std::to_string(r) + ": empty value in non-nullable column '" + col.name +
                                       "'");
                }
                continue;
            }
            auto value = parse_value(cell.text, col.type.kind);
            if (!value) {
                throw CsvError(CsvErrorKind::TypeParseError, r, col.name,
                               "row " + std::to_string(r) + ", column '" + col.name + "': '" + cell.text +
                                   "' is not a valid " + std::string(to_string(col.type.kind)));
            }
            row[target[i]] = std::move(*value);
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

auto load_csv(std::istream& in, const TableSchema& schema) -> Relation {
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), schema);
}

auto load_csv(const std::filesystem::path& path, const TableSchema& schema) -> Relation {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CsvError(CsvErrorKind::Io, 0, "", "cannot open '" + path.string() + "'");
    }
    try {
        return load_csv(in, schema);
    } catch (const CsvError& e) {
        throw CsvError(e.kind(), e.row(), e.column(), path.filename().string() + ": " + e.what());
    }
}

auto to_csv(const Relation& relation) -> std::string {
    std::string out;
    for (std::size_t i = 0; i < relation.schema.columns.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += relation.schema.columns[i].name;
    }
    out += '\n';
    for (const auto& row : relation.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            if (is_null(row[i])) {
                continue;
            }
            auto text = value_to_text(row[i]);
            out += needs_quotes(text) ? quote(text) : text;
        }
        out += '\n';
    }
    return out;
}

auto load_database(const std::filesystem::path& dir, const Catalog& catalog) -> Database {
    Database db;
    for (const auto& table : catalog.tables()) {
        db.emplace(table.name, load_csv(dir / (table.name + ".csv"), table));
    }
    return db;
}

bool row_less(const Row& a, const Row& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const Value& x, const Value& y) {
        return compare_values(x, y) == std::strong_ordering::less;
    });
}

bool results_equal(const Relation& a, const Relation& b, bool ordered) {
    if (a.schema.columns.size() != b.schema.columns.size() || a.rows.size() != b.rows.size()) {
        return false;
    }
    auto n = a.schema.columns.size();
    // Normalize column order by (case-folded) name.
    auto order_of = [n](const TableSchema& s) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
            return ascii_lower(s.columns[x].name) < ascii_lower(s.columns[y].name);
        });
        return idx;
    };
    auto ia = order_of(a.schema);
    auto ib = order_of(b.schema);
    for (std::size_t i = 0; i < n; ++i) {
        if (!iequals(a.schema.columns[ia[i]].name, b.schema.columns[ib[i]].name)) {
            return false;
        }
    }
    auto permute = [n](const std::vector<Row>& rows, const std::vector<std::size_t>& idx) {
        std::vector<Row> out;
        out.reserve(rows.size());
        for (const auto& r : rows) {
            Row p(n);
            for (std::size_t i = 0; i < n; ++i) {
                p[i] = r[idx[i]];
            }
            out.push_back(std::move(p));
        }
        return out;
    };
    auto ra = permute(a.rows, ia);
    auto rb = permute(b.rows, ib);
    if (!ordered) {
        std::stable_sort(ra.begin(), ra.end(), row_less);
        std::stable_sort(rb.begin(), rb.end(), row_less);
    }
    for (std::size_t r = 0; r < ra.size(); ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (!values_close(ra[r][c], rb[r][c])) {
                return false;
            }
        }
    }
    return true;
}

} // namespace gatelens
