#include "gatelens/ra.hpp"

#include "gatelens/overloaded.hpp"
#include "gatelens/text.hpp"

#include <algorithm>

namespace gatelens {

namespace ra {

auto scan(std::string table) -> Expr { return Expr{Scan{std::move(table)}}; }
auto select(Predicate p, Expr child) -> Expr { return Expr{Select{std::move(p), std::move(child)}}; }
auto project(std::vector<std::string> columns, Expr child) -> Expr {
    return Expr{Project{std::move(columns), std::move(child)}};
}
auto rename(std::vector<RenamePair> pairs, Expr child) -> Expr {
    return Expr{Rename{std::move(pairs), std::move(child)}};
}
auto union_(Expr l, Expr r) -> Expr { return Expr{SetOp{SetOpKind::Union, std::move(l), std::move(r)}}; }
auto minus(Expr l, Expr r) -> Expr { return Expr{SetOp{SetOpKind::Minus, std::move(l), std::move(r)}}; }
auto intersect(Expr l, Expr r) -> Expr { return Expr{SetOp{SetOpKind::Intersect, std::move(l), std::move(r)}}; }
auto times(Expr l, Expr r) -> Expr { return Expr{Times{std::move(l), std::move(r)}}; }
auto divide(Expr l, Expr r) -> Expr { return Expr{Divide{std::move(l), std::move(r)}}; }
auto join(Predicate p, Expr l, Expr r) -> Expr { return Expr{Join{std::move(p), std::move(l), std::move(r)}}; }
auto groupby(std::vector<std::string> keys, std::vector<Aggregate> aggs, Expr child) -> Expr {
    return Expr{GroupBy{std::move(keys), std::move(aggs), std::move(child)}};
}
auto distinct(Expr child) -> Expr { return Expr{Distinct{std::move(child)}}; }
auto sort(std::vector<SortKey> keys, Expr child) -> Expr { return Expr{Sort{std::move(keys), std::move(child)}}; }
auto limit(std::int64_t n, Expr child) -> Expr { return Expr{Limit{n, std::move(child)}}; }

auto col(std::string name) -> Term { return Term{ColumnRef{std::move(name)}}; }
auto lit(Value v) -> Term { return Term{Literal{std::move(v)}}; }
auto lit(const char* text) -> Term { return Term{Literal{Value{std::string(text)}}}; }
auto lower(Term t) -> Term { return Term{LowerTerm{std::move(t)}}; }
auto cmp(CompareOp op, Term l, Term r) -> Predicate { return Predicate{Comparison{op, std::move(l), std::move(r)}}; }
auto eq(Term l, Term r) -> Predicate { return cmp(CompareOp::Eq, std::move(l), std::move(r)); }
auto in(std::string column, std::vector<Value> values) -> Predicate {
    return Predicate{InList{std::move(column), std::move(values)}};
}
auto contains(Term subject, std::string needle) -> Predicate {
    return Predicate{Contains{std::move(subject), std::move(needle)}};
}
auto and_(Predicate l, Predicate r) -> Predicate { return Predicate{And{std::move(l), std::move(r)}}; }
auto or_(Predicate l, Predicate r) -> Predicate { return Predicate{Or{std::move(l), std::move(r)}}; }
auto not_(Predicate p) -> Predicate { return Predicate{Not{std::move(p)}}; }

} // namespace ra

auto to_string(SchemaErrorKind kind) -> std::string_view {
    switch (kind) {
    case SchemaErrorKind::UnknownTable: return "UnknownTable";
    case SchemaErrorKind::UnknownColumn: return "UnknownColumn";
    case SchemaErrorKind::TypeMismatch: return "TypeMismatch";
    case SchemaErrorKind::NotUnionCompatible: return "NotUnionCompatible";
    case SchemaErrorKind::InvalidDivision: return "InvalidDivision";
    case SchemaErrorKind::DuplicateOutputColumn: return "DuplicateOutputColumn";
    case SchemaErrorKind::InvalidExpression: return "InvalidExpression";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Type checking
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void fail(SchemaErrorKind kind, const std::string& message) { throw SchemaError(kind, message); }

auto column_index(const TableSchema& schema, const std::string& name) -> std::size_t {
    auto idx = schema.find(name);
    if (!idx) {
        std::string known;
        for (const auto& c : schema.columns) {
            known += known.empty() ? c.name : ", " + c.name;
        }
        fail(SchemaErrorKind::UnknownColumn, "unknown column '" + name + "' (available: " + known + ")");
    }
    return *idx;
}

// Static type of a term. `nullopt` kind means the untyped null literal.
struct TermType {
    std::optional<TypeKind> kind;
    bool date_literal_ok = false; // text literal spelling a valid date
};

auto term_type(const Term& t, const TableSchema& schema) -> TermType {
    return std::visit(
        Overloaded{
            [&](const ColumnRef& c) -> TermType { return {schema.columns[column_index(schema, c.name)].type.kind}; },
            [&](const Literal& l) -> TermType {
                auto kind = kind_of(l.value);
                bool date_ok = kind == TypeKind::Text && parse_date(std::get<std::string>(l.value)).has_value();
                return {kind, date_ok};
            },
            [&](const LowerTerm& lt) -> TermType {
                auto inner = term_type(*lt.arg, schema);
                if (inner.kind && *inner.kind != TypeKind::Text) {
                    fail(SchemaErrorKind::TypeMismatch,
                         "lower() needs a text operand, got " + std::string(to_string(*inner.kind)));
                }
                return {TypeKind::Text};
            },
        },
        t.node);
}

bool operands_compatible(const TermType& a, const TermType& b) {
    if (!a.kind || !b.kind) {
        return true;
    }
    if (kinds_compatible(*a.kind, *b.kind)) {
        return true;
    }
    return (*a.kind == TypeKind::Date && b.date_literal_ok) || (*b.kind == TypeKind::Date && a.date_literal_ok);
}

auto kind_name(const TermType& t) -> std::string { return t.kind ? std::string(to_string(*t.kind)) : "null"; }

void check_unique(const TableSchema& schema, const std::string& context) {
    for (std::size_t i = 0; i < schema.columns.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (iequals(schema.columns[i].name, schema.columns[j].name)) {
                fail(SchemaErrorKind::DuplicateOutputColumn,
                     context + " produces column '" + schema.columns[i].name +
                         "' twice; rename one side first");
            }
        }
    }
}

void require_identifier(const std::string& name, const std::string& context) {
    if (!is_valid_identifier(name)) {
        fail(SchemaErrorKind::InvalidExpression, context + ": '" + name + "' is not a valid identifier");
    }
}

auto concat(const TableSchema& l, const TableSchema& r) -> TableSchema {
    TableSchema out;
    out.columns = l.columns;
    out.columns.insert(out.columns.end(), r.columns.begin(), r.columns.end());
    return out;
}

auto set_op_name(SetOpKind k) -> std::string_view {
    switch (k) {
    case SetOpKind::Union: return "union";
    case SetOpKind::Minus: return "minus";
    case SetOpKind::Intersect: return "intersect";
    }
    return "?";
}

auto agg_name(AggFn fn) -> std::string_view {
    switch (fn) {
    case AggFn::CountStar:
    case AggFn::Count: return "count";
    case AggFn::Sum: return "sum";
    case AggFn::Avg: return "avg";
    case AggFn::Min: return "min";
    case AggFn::Max: return "max";
    }
    return "?";
}

auto infer(const Expr& expr, const Catalog& catalog) -> TableSchema;

auto infer_set_op(const SetOp& op, const Catalog& catalog) -> TableSchema {
    auto l = infer(*op.left, catalog);
    auto r = infer(*op.right, catalog);
    auto name = std::string(set_op_name(op.kind));
    if (l.columns.size() != r.columns.size()) {
        fail(SchemaErrorKind::NotUnionCompatible, name + ": operands have " + std::to_string(l.columns.size()) +
                                                      " and " + std::to_string(r.columns.size()) + " columns");
    }
    TableSchema out;
    out.columns = l.columns;
    for (std::size_t i = 0; i < l.columns.size(); ++i) {
        auto lk = l.columns[i].type.kind;
        auto rk = r.columns[i].type.kind;
        if (!kinds_compatible(lk, rk)) {
            fail(SchemaErrorKind::NotUnionCompatible, name + ": column " + std::to_string(i + 1) + " is " +
                                                          std::string(to_string(lk)) + " on the left and " +
                                                          std::string(to_string(rk)) + " on the right");
        }
        auto& c = out.columns[i];
        c.type.kind = common_kind(lk, rk);
        bool ln = l.columns[i].type.nullable;
        bool rn = r.columns[i].type.nullable;
        switch (op.kind) {
        case SetOpKind::Union: c.type.nullable = ln || rn; break;
        case SetOpKind::Minus: c.type.nullable = ln; break;
        case SetOpKind::Intersect: c.type.nullable = ln && rn; break;
        }
    }
    return out;
}

auto infer_divide(const Divide& d, const Catalog& catalog) -> TableSchema {
    auto l = infer(*d.left, catalog);
    auto r = infer(*d.right, catalog);
    std::vector<bool> in_divisor(l.columns.size(), false);
    for (const auto& rc : r.columns) {
        auto idx = l.find(rc.name);
        if (!idx) {
            fail(SchemaErrorKind::InvalidDivision,
                 "divide: divisor column '" + rc.name + "' is not a column of the dividend");
        }
        if (!kinds_compatible(l.columns[*idx].type.kind, rc.type.kind)) {
            fail(SchemaErrorKind::InvalidDivision, "divide: column '" + rc.name + "' has incompatible types");
        }
        in_divisor[*idx] = true;
    }
    TableSchema out;
    out.name = l.name;
    for (std::size_t i = 0; i < l.columns.size(); ++i) {
        if (!in_divisor[i]) {
            out.columns.push_back(l.columns[i]);
        }
    }
    if (out.columns.empty()) {
        fail(SchemaErrorKind::InvalidDivision, "divide: divisor columns must be a strict subset of the dividend's");
    }
    return out;
}

auto infer_groupby(const GroupBy& g, const Catalog& catalog) -> TableSchema {
    auto child = infer(*g.child, catalog);
    if (g.aggregates.empty()) {
        fail(SchemaErrorKind::InvalidExpression, "groupby needs at least one aggregate");
    }
    TableSchema out;
    out.name = child.name;
    for (const auto& key : g.keys) {
        out.columns.push_back(child.columns[column_index(child, key)]);
    }
    for (const auto& agg : g.aggregates) {
        require_identifier(agg.output, "aggregate output name");
        Column c;
        c.name = agg.output;
        if (agg.fn == AggFn::CountStar) {
            c.type = {TypeKind::Int, false};
            c.description = "count of rows";
            out.columns.push_back(std::move(c));
            continue;
        }
        const auto& in = child.columns[column_index(child, agg.input)];
        auto fn = std::string(agg_name(agg.fn));
        c.description = fn + " of " + in.name;
        switch (agg.fn) {
        case AggFn::Count: c.type = {TypeKind::Int, false}; break;
        case AggFn::Sum:
        case AggFn::Avg:
            if (!is_numeric(in.type.kind)) {
                fail(SchemaErrorKind::TypeMismatch,
                     fn + "(" + in.name + ") needs a numeric column, got " + std::string(to_string(in.type.kind)));
            }
            c.type = {agg.fn == AggFn::Avg ? TypeKind::Float : in.type.kind, true};
            break;
        case AggFn::Min:
        case AggFn::Max:
            if (in.type.kind == TypeKind::Bool) {
                fail(SchemaErrorKind::TypeMismatch, fn + "(" + in.name + ") needs an ordered column, got bool");
            }
            c.type = {in.type.kind, true};
            break;
        case AggFn::CountStar: break;
        }
        out.columns.push_back(std::move(c));
    }
    check_unique(out, "groupby");
    return out;
}

auto infer(const Expr& expr, const Catalog& catalog) -> TableSchema {
    return std::visit(
        Overloaded{
            [&](const Scan& s) -> TableSchema {
                const auto* t = catalog.find(s.table);
                if (t == nullptr) {
                    fail(SchemaErrorKind::UnknownTable, "unknown table '" + s.table + "'");
                }
                return *t;
            },
            [&](const Select& s) -> TableSchema {
                auto child = infer(*s.child, catalog);
                check_predicate(s.predicate, child);
                return child;
            },
            [&](const Project& p) -> TableSchema {
                auto child = infer(*p.child, catalog);
                if (p.columns.empty()) {
                    fail(SchemaErrorKind::InvalidExpression, "project needs at least one column");
                }
                TableSchema out;
                out.name = child.name;
                for (const auto& name : p.columns) {
                    out.columns.push_back(child.columns[column_index(child, name)]);
                }
                check_unique(out, "project");
                return out;
            },
            [&](const Rename& r) -> TableSchema {
                auto out = infer(*r.child, catalog);
                std::vector<bool> touched(out.columns.size(), false);
                std::vector<Column> renamed = out.columns;
                for (const auto& pair : r.pairs) {
                    require_identifier(pair.to, "rename target");
                    auto idx = column_index(out, pair.from);
                    if (touched[idx]) {
                        fail(SchemaErrorKind::InvalidExpression, "rename: column '" + pair.from + "' renamed twice");
                    }
                    touched[idx] = true;
                    renamed[idx].name = pair.to;
                    renamed[idx].synonyms.clear();
                }
                out.columns = std::move(renamed);
                check_unique(out, "rename");
                return out;
            },
            [&](const SetOp& s) -> TableSchema { return infer_set_op(s, catalog); },
            [&](const Times& t) -> TableSchema {
                auto out = concat(infer(*t.left, catalog), infer(*t.right, catalog));
                check_unique(out, "times");
                return out;
            },
            [&](const Divide& d) -> TableSchema { return infer_divide(d, catalog); },
            [&](const Join& j) -> TableSchema {
                auto out = concat(infer(*j.left, catalog), infer(*j.right, catalog));
                check_unique(out, "join");
                check_predicate(j.predicate, out);
                return out;
            },
            [&](const GroupBy& g) -> TableSchema { return infer_groupby(g, catalog); },
            [&](const Distinct& d) -> TableSchema { return infer(*d.child, catalog); },
            [&](const Sort& s) -> TableSchema {
                auto child = infer(*s.child, catalog);
                if (s.keys.empty()) {
                    fail(SchemaErrorKind::InvalidExpression, "sort needs at least one key");
                }
                for (const auto& k : s.keys) {
                    column_index(child, k.column);
                }
                return child;
            },
            [&](const Limit& l) -> TableSchema {
                if (l.count < 0) {
                    fail(SchemaErrorKind::InvalidExpression, "limit must be non-negative");
                }
                return infer(*l.child, catalog);
            },
        },
        expr.node);
}

} // namespace

void check_predicate(const Predicate& p, const TableSchema& schema) {
    std::visit(Overloaded{
                   [&](const Comparison& c) {
                       auto l = term_type(c.lhs, schema);
                       auto r = term_type(c.rhs, schema);
                       if (!operands_compatible(l, r)) {
                           fail(SchemaErrorKind::TypeMismatch, "cannot compare " + kind_name(l) + " with " +
                                                                   kind_name(r) + " in '" +
                                                                   format_predicate(p) + "'");
                       }
                   },
                   [&](const InList& in) {
                       TermType column{schema.columns[column_index(schema, in.column)].type.kind};
                       for (const auto& v : in.values) {
                           auto k = kind_of(v);
                           TermType lit{k, k == TypeKind::Text && parse_date(std::get<std::string>(v)).has_value()};
                           if (!operands_compatible(column, lit)) {
                               fail(SchemaErrorKind::TypeMismatch, "list value " + format_literal(v) +
                                                                       " does not match column '" + in.column + "'");
                           }
                       }
                   },
                   [&](const Contains& c) {
                       auto t = term_type(c.subject, schema);
                       if (t.kind && *t.kind != TypeKind::Text) {
                           fail(SchemaErrorKind::TypeMismatch,
                                "contains() needs a text operand, got " + kind_name(t));
                       }
                   },
                   [&](const And& a) {
                       check_predicate(*a.lhs, schema);
                       check_predicate(*a.rhs, schema);
                   },
                   [&](const Or& o) {
                       check_predicate(*o.lhs, schema);
                       check_predicate(*o.rhs, schema);
                   },
                   [&](const Not& n) { check_predicate(*n.arg, schema); },
               },
               p.node);
}

auto infer_schema(const Expr& expr, const Catalog& catalog) -> TableSchema { return infer(expr, catalog); }

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

auto format_literal(const Value& v) -> std::string {
    switch (v.index()) {
    case 0: return "null";
    case 1: return std::get<bool>(v) ? "true" : "false";
    case 2: return std::to_string(std::get<std::int64_t>(v));
    case 3: return format_double(std::get<double>(v));
    case 4: {
        std::string out = "\"";
        for (char c : std::get<std::string>(v)) {
            if (c == '"' || c == '\\') {
                out += '\\';
            }
            out += c;
        }
        out += '"';
        return out;
    }
    default:
        // Dates have no literal syntax; they are written as strings.
        return "\"" + format_date(std::get<Date>(v)) + "\"";
    }
}

namespace {

auto format_term(const Term& t) -> std::string {
    return std::visit(Overloaded{
                          [](const ColumnRef& c) { return c.name; },
                          [](const Literal& l) { return format_literal(l.value); },
                          [](const LowerTerm& lt) { return "lower(" + format_term(*lt.arg) + ")"; },
                      },
                      t.node);
}

// Binding strength: or = 1, and = 2, everything else binds tighter.
int precedence(const Predicate& p) {
    if (std::holds_alternative<Or>(p.node)) {
        return 1;
    }
    if (std::holds_alternative<And>(p.node)) {
        return 2;
    }
    return 3;
}

auto format_pred(const Predicate& p) -> std::string;

auto wrap_if(const Predicate& p, bool wrap) -> std::string {
    auto text = format_pred(p);
    return wrap ? "(" + text + ")" : text;
}

auto format_pred(const Predicate& p) -> std::string {
    return std::visit(
        Overloaded{
            [](const Comparison& c) {
                return format_term(c.lhs) + " " + std::string(to_string(c.op)) + " " + format_term(c.rhs);
            },
            [](const InList& in) {
                std::string out = in.column + " in [";
                for (std::size_t i = 0; i < in.values.size(); ++i) {
                    if (i > 0) {
                        out += ", ";
                    }
                    out += format_literal(in.values[i]);
                }
                return out + "]";
            },
            [](const Contains& c) {
                return "contains(" + format_term(c.subject) + ", " + format_literal(Value{c.needle}) + ")";
            },
            // Both chains parse left-associatively, so a right operand of the
            // same strength needs parentheses.
            [](const And& a) { return wrap_if(*a.lhs, precedence(*a.lhs) < 2) + " and " + wrap_if(*a.rhs, precedence(*a.rhs) <= 2); },
            [](const Or& o) { return wrap_if(*o.lhs, false) + " or " + wrap_if(*o.rhs, precedence(*o.rhs) <= 1); },
            [](const Not& n) { return "not " + wrap_if(*n.arg, precedence(*n.arg) < 3); },
        },
        p.node);
}

auto join_names(const std::vector<std::string>& names) -> std::string {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += names[i];
    }
    return out;
}

auto format_agg(const Aggregate& a) -> std::string {
    std::string arg = a.fn == AggFn::CountStar ? "*" : a.input;
    return std::string(agg_name(a.fn)) + "(" + arg + ") as " + a.output;
}

} // namespace

auto format_predicate(const Predicate& p) -> std::string { return format_pred(p); }

auto format_ra(const Expr& expr) -> std::string {
    return std::visit(
        Overloaded{
            [](const Scan& s) { return s.table; },
            [](const Select& s) { return "select[" + format_pred(s.predicate) + "](" + format_ra(*s.child) + ")"; },
            [](const Project& p) { return "project[" + join_names(p.columns) + "](" + format_ra(*p.child) + ")"; },
            [](const Rename& r) {
                std::string out = "rename[";
                for (std::size_t i = 0; i < r.pairs.size(); ++i) {
                    if (i > 0) {
                        out += ", ";
                    }
                    out += r.pairs[i].from + " -> " + r.pairs[i].to;
                }
                return out + "](" + format_ra(*r.child) + ")";
            },
            [](const SetOp& s) {
                return std::string(set_op_name(s.kind)) + "(" + format_ra(*s.left) + ", " + format_ra(*s.right) + ")";
            },
            [](const Times& t) { return "times(" + format_ra(*t.left) + ", " + format_ra(*t.right) + ")"; },
            [](const Divide& d) { return "divide(" + format_ra(*d.left) + ", " + format_ra(*d.right) + ")"; },
            [](const Join& j) {
                return "join[" + format_pred(j.predicate) + "](" + format_ra(*j.left) + ", " + format_ra(*j.right) + ")";
            },
            [](const GroupBy& g) {
                std::string out = "groupby[" + join_names(g.keys) + "; ";
                for (std::size_t i = 0; i < g.aggregates.size(); ++i) {
                    if (i > 0) {
                        out += ", ";
                    }
                    out += format_agg(g.aggregates[i]);
                }
                return out + "](" + format_ra(*g.child) + ")";
            },
            [](const Distinct& d) { return "distinct(" + format_ra(*d.child) + ")"; },
            [](const Sort& s) {
                std::string out = "sort[";
                for (std::size_t i = 0; i < s.keys.size(); ++i) {
                    if (i > 0) {
                        out += ", ";
                    }
                    out += s.keys[i].column;
                    if (s.keys[i].descending) {
                        out += " desc";
                    }
                }
                return out + "](" + format_ra(*s.child) + ")";
            },
            [](const Limit& l) { return "limit[" + std::to_string(l.count) + "](" + format_ra(*l.child) + ")"; },
        },
        expr.node);
}

// ---------------------------------------------------------------------------
// Predicate utilities
// ---------------------------------------------------------------------------

namespace {

void collect_term_columns(const Term& t, std::vector<std::string>& out) {
    std::visit(Overloaded{
                   [&](const ColumnRef& c) { out.push_back(c.name); },
                   [](const Literal&) {},
                   [&](const LowerTerm& lt) { collect_term_columns(*lt.arg, out); },
               },
               t.node);
}

void collect_columns(const Predicate& p, std::vector<std::string>& out) {
    std::visit(Overloaded{
                   [&](const Comparison& c) {
                       collect_term_columns(c.lhs, out);
                       collect_term_columns(c.rhs, out);
                   },
                   [&](const InList& in) { out.push_back(in.column); },
                   [&](const Contains& c) { collect_term_columns(c.subject, out); },
                   [&](const And& a) {
                       collect_columns(*a.lhs, out);
                       collect_columns(*a.rhs, out);
                   },
                   [&](const Or& o) {
                       collect_columns(*o.lhs, out);
                       collect_columns(*o.rhs, out);
                   },
                   [&](const Not& n) { collect_columns(*n.arg, out); },
               },
               p.node);
}

using NameMap = std::vector<std::pair<std::string, std::string>>;

auto mapped(const std::string& name, const NameMap& map) -> std::string {
    for (const auto& [from, to] : map) {
        if (iequals(from, name)) {
            return to;
        }
    }
    return name;
}

auto rename_term(const Term& t, const NameMap& map) -> Term {
    return std::visit(Overloaded{
                          [&](const ColumnRef& c) { return Term{ColumnRef{mapped(c.name, map)}}; },
                          [&](const Literal& l) { return Term{l}; },
                          [&](const LowerTerm& lt) { return Term{LowerTerm{rename_term(*lt.arg, map)}}; },
                      },
                      t.node);
}

} // namespace

auto predicate_columns(const Predicate& p) -> std::vector<std::string> {
    std::vector<std::string> out;
    collect_columns(p, out);
    return out;
}

auto rename_predicate_columns(const Predicate& p, const NameMap& map) -> Predicate {
    return std::visit(
        Overloaded{
            [&](const Comparison& c) {
                return Predicate{Comparison{c.op, rename_term(c.lhs, map), rename_term(c.rhs, map)}};
            },
            [&](const InList& in) { return Predicate{InList{mapped(in.column, map), in.values}}; },
            [&](const Contains& c) { return Predicate{Contains{rename_term(c.subject, map), c.needle}}; },
            [&](const And& a) {
                return Predicate{And{rename_predicate_columns(*a.lhs, map), rename_predicate_columns(*a.rhs, map)}};
            },
            [&](const Or& o) {
                return Predicate{Or{rename_predicate_columns(*o.lhs, map), rename_predicate_columns(*o.rhs, map)}};
            },
            [&](const Not& n) { return Predicate{Not{rename_predicate_columns(*n.arg, map)}}; },
        },
        p.node);
}

auto is_sort(const Expr& expr) -> bool { return std::holds_alternative<Sort>(expr.node); }

auto expr_size(const Expr& expr) -> std::size_t {
    return std::visit(Overloaded{
                          [](const Scan&) -> std::size_t { return 1; },
                          [](const SetOp& s) { return 1 + expr_size(*s.left) + expr_size(*s.right); },
                          [](const Times& t) { return 1 + expr_size(*t.left) + expr_size(*t.right); },
                          [](const Divide& d) { return 1 + expr_size(*d.left) + expr_size(*d.right); },
                          [](const Join& j) { return 1 + expr_size(*j.left) + expr_size(*j.right); },
                          [](const auto& unary) { return 1 + expr_size(*unary.child); },
                      },
                      expr.node);
}

} // namespace gatelens
