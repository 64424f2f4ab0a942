#include "gatelens/executor.hpp"

#include "gatelens/overloaded.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace gatelens {

auto to_string(PlanOp op) -> std::string_view {
    switch (op) {
    case PlanOp::Scan: return "Scan";
    case PlanOp::Filter: return "Filter";
    case PlanOp::Project: return "Project";
    case PlanOp::Rename: return "Rename";
    case PlanOp::Union: return "Union";
    case PlanOp::Minus: return "Minus";
    case PlanOp::Intersect: return "Intersect";
    case PlanOp::CrossProduct: return "CrossProduct";
    case PlanOp::HashJoin: return "HashJoin";
    case PlanOp::NestedLoopJoin: return "NestedLoopJoin";
    case PlanOp::Divide: return "Divide";
    case PlanOp::Aggregate: return "Aggregate";
    case PlanOp::Distinct: return "Distinct";
    case PlanOp::Sort: return "Sort";
    case PlanOp::Limit: return "Limit";
    }
    return "?";
}

auto to_string(ExecErrorKind kind) -> std::string_view {
    switch (kind) {
    case ExecErrorKind::MissingTable: return "MissingTable";
    case ExecErrorKind::RuntimeTypeError: return "RuntimeTypeError";
    case ExecErrorKind::IntegerOverflow: return "IntegerOverflow";
    }
    return "?";
}

struct CompiledTerm {
    enum class Kind : std::uint8_t { Column, Const, Lower } kind = Kind::Const;
    std::size_t index = 0;
    Value constant;
    std::shared_ptr<const CompiledTerm> arg;
};

struct CompiledPredicate {
    enum class Kind : std::uint8_t { Compare, In, Contains, And, Or, Not } kind = Kind::Compare;
    CompareOp op = CompareOp::Eq;
    CompiledTerm lhs;
    CompiledTerm rhs;
    std::size_t column = 0;
    std::vector<Value> values;
    std::string needle;
    std::shared_ptr<const CompiledPredicate> a;
    std::shared_ptr<const CompiledPredicate> b;
};

namespace {

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

struct TypedTerm {
    CompiledTerm term;
    std::optional<TypeKind> kind;
};

auto resolve(const TableSchema& schema, const std::string& name) -> std::size_t {
    auto idx = schema.find(name);
    if (!idx) {
        throw SchemaError(SchemaErrorKind::UnknownColumn, "unknown column '" + name + "'");
    }
    return *idx;
}

auto compile_term(const Term& t, const TableSchema& schema) -> TypedTerm {
    return std::visit(Overloaded{
                          [&](const ColumnRef& c) {
                              TypedTerm out;
                              out.term.kind = CompiledTerm::Kind::Column;
                              out.term.index = resolve(schema, c.name);
                              out.kind = schema.columns[out.term.index].type.kind;
                              return out;
                          },
                          [&](const Literal& l) {
                              TypedTerm out;
                              out.term.kind = CompiledTerm::Kind::Const;
                              out.term.constant = l.value;
                              out.kind = kind_of(l.value);
                              return out;
                          },
                          [&](const LowerTerm& lt) {
                              TypedTerm out;
                              out.term.kind = CompiledTerm::Kind::Lower;
                              out.term.arg = std::make_shared<const CompiledTerm>(compile_term(*lt.arg, schema).term);
                              out.kind = TypeKind::Text;
                              return out;
                          },
                      },
                      t.node);
}

// Text constants compared against dates become dates.
void coerce_date_constant(CompiledTerm& term, std::optional<TypeKind> other) {
    if (other != TypeKind::Date || term.kind != CompiledTerm::Kind::Const) {
        return;
    }
    if (const auto* s = std::get_if<std::string>(&term.constant)) {
        auto d = parse_date(*s);
        if (!d) {
            throw SchemaError(SchemaErrorKind::TypeMismatch, "'" + *s + "' is not a YYYY-MM-DD date");
        }
        term.constant = *d;
    }
}

auto compile_predicate(const Predicate& p, const TableSchema& schema) -> std::shared_ptr<const CompiledPredicate> {
    auto out = std::make_shared<CompiledPredicate>();
    std::visit(Overloaded{
                   [&](const Comparison& c) {
                       auto l = compile_term(c.lhs, schema);
                       auto r = compile_term(c.rhs, schema);
                       coerce_date_constant(l.term, r.kind);
                       coerce_date_constant(r.term, l.kind);
                       out->kind = CompiledPredicate::Kind::Compare;
                       out->op = c.op;
                       out->lhs = std::move(l.term);
                       out->rhs = std::move(r.term);
                   },
                   [&](const InList& in) {
                       out->kind = CompiledPredicate::Kind::In;
                       out->column = resolve(schema, in.column);
                       bool is_date = schema.columns[out->column].type.kind == TypeKind::Date;
                       for (const auto& v : in.values) {
                           CompiledTerm t;
                           t.constant = v;
                           if (is_date) {
                               coerce_date_constant(t, TypeKind::Date);
                           }
                           out->values.push_back(std::move(t.constant));
                       }
                   },
                   [&](const Contains& c) {
                       out->kind = CompiledPredicate::Kind::Contains;
                       out->lhs = compile_term(c.subject, schema).term;
                       out->needle = c.needle;
                   },
                   [&](const And& a) {
                       out->kind = CompiledPredicate::Kind::And;
                       out->a = compile_predicate(*a.lhs, schema);
                       out->b = compile_predicate(*a.rhs, schema);
                   },
                   [&](const Or& o) {
                       out->kind = CompiledPredicate::Kind::Or;
                       out->a = compile_predicate(*o.lhs, schema);
                       out->b = compile_predicate(*o.rhs, schema);
                   },
                   [&](const Not& n) {
                       out->kind = CompiledPredicate::Kind::Not;
                       out->a = compile_predicate(*n.arg, schema);
                   },
               },
               p.node);
    return out;
}

void flatten_conjuncts(const Predicate& p, std::vector<const Predicate*>& out) {
    if (const auto* a = std::get_if<And>(&p.node)) {
        flatten_conjuncts(*a->lhs, out);
        flatten_conjuncts(*a->rhs, out);
        return;
    }
    out.push_back(&p);
}

// Equality conjuncts `l == r` with one column from each side.
auto equi_keys(const Predicate& p, const TableSchema& combined, std::size_t left_width)
    -> std::vector<std::pair<std::size_t, std::size_t>> {
    std::vector<const Predicate*> conjuncts;
    flatten_conjuncts(p, conjuncts);
    std::vector<std::pair<std::size_t, std::size_t>> keys;
    for (const auto* c : conjuncts) {
        const auto* cmp = std::get_if<Comparison>(&c->node);
        if (cmp == nullptr || cmp->op != CompareOp::Eq) {
            continue;
        }
        const auto* l = std::get_if<ColumnRef>(&cmp->lhs.node);
        const auto* r = std::get_if<ColumnRef>(&cmp->rhs.node);
        if (l == nullptr || r == nullptr) {
            continue;
        }
        auto li = resolve(combined, l->name);
        auto ri = resolve(combined, r->name);
        if (li >= left_width && ri < left_width) {
            std::swap(li, ri);
        }
        if (li < left_width && ri >= left_width) {
            const auto& lt = combined.columns[li].type.kind;
            const auto& rt = combined.columns[ri].type.kind;
            if (!kinds_compatible(lt, rt)) {
                throw SchemaError(SchemaErrorKind::TypeMismatch, "join key '" + combined.columns[li].name + "' (" +
                                                                     std::string(to_string(lt)) + ") cannot match '" +
                                                                     combined.columns[ri].name + "' (" +
                                                                     std::string(to_string(rt)) + ")");
            }
            keys.emplace_back(li, ri - left_width);
        }
    }
    return keys;
}

class Compiler {
public:
    explicit Compiler(const Catalog& catalog) : catalog_(catalog) {}

    auto compile(const Expr& expr) -> PlanNode {
        PlanNode node;
        node.id = next_id_++;
        node.schema = infer_schema(expr, catalog_);
        std::visit(Overloaded{
                       [&](const Scan& s) {
                           node.op = PlanOp::Scan;
                           node.table = catalog_.find(s.table)->name;
                       },
                       [&](const Select& s) {
                           node.op = PlanOp::Filter;
                           node.children.push_back(compile(*s.child));
                           node.predicate = compile_predicate(s.predicate, node.children[0].schema);
                       },
                       [&](const Project& p) {
                           node.op = PlanOp::Project;
                           node.children.push_back(compile(*p.child));
                           for (const auto& c : p.columns) {
                               node.columns.push_back(resolve(node.children[0].schema, c));
                           }
                       },
                       [&](const Rename& r) {
                           node.op = PlanOp::Rename;
                           node.children.push_back(compile(*r.child));
                       },
                       [&](const SetOp& s) {
                           node.op = s.kind == SetOpKind::Union   ? PlanOp::Union
                                     : s.kind == SetOpKind::Minus ? PlanOp::Minus
                                                                  : PlanOp::Intersect;
                           node.children.push_back(compile(*s.left));
                           node.children.push_back(compile(*s.right));
                       },
                       [&](const Times& t) {
                           node.op = PlanOp::CrossProduct;
                           node.children.push_back(compile(*t.left));
                           node.children.push_back(compile(*t.right));
                       },
                       [&](const Divide& d) {
                           node.op = PlanOp::Divide;
                           node.children.push_back(compile(*d.left));
                           node.children.push_back(compile(*d.right));
                           const auto& dividend = node.children[0].schema;
                           const auto& divisor = node.children[1].schema;
                           for (const auto& c : divisor.columns) {
                               node.divisor_columns.push_back(resolve(dividend, c.name));
                           }
                           for (std::size_t i = 0; i < dividend.columns.size(); ++i) {
                               if (std::find(node.divisor_columns.begin(), node.divisor_columns.end(), i) ==
                                   node.divisor_columns.end()) {
                                   node.columns.push_back(i);
                               }
                           }
                       },
                       [&](const Join& j) {
                           node.children.push_back(compile(*j.left));
                           node.children.push_back(compile(*j.right));
                           node.predicate = compile_predicate(j.predicate, node.schema);
                           node.join_keys =
                               equi_keys(j.predicate, node.schema, node.children[0].schema.columns.size());
                           node.op = node.join_keys.empty() ? PlanOp::NestedLoopJoin : PlanOp::HashJoin;
                       },
                       [&](const GroupBy& g) {
                           node.op = PlanOp::Aggregate;
                           node.children.push_back(compile(*g.child));
                           const auto& in = node.children[0].schema;
                           for (const auto& k : g.keys) {
                               node.columns.push_back(resolve(in, k));
                           }
                           for (const auto& a : g.aggregates) {
                               CompiledAggregate ca;
                               ca.fn = a.fn;
                               if (a.fn != AggFn::CountStar) {
                                   ca.input = resolve(in, a.input);
                               }
                               node.aggregates.push_back(ca);
                           }
                       },
                       [&](const Distinct& d) {
                           node.op = PlanOp::Distinct;
                           node.children.push_back(compile(*d.child));
                       },
                       [&](const Sort& s) {
                           node.op = PlanOp::Sort;
                           node.children.push_back(compile(*s.child));
                           for (const auto& k : s.keys) {
                               node.columns.push_back(resolve(node.children[0].schema, k.column));
                               node.descending.push_back(k.descending);
                           }
                       },
                       [&](const Limit& l) {
                           node.op = PlanOp::Limit;
                           node.limit = l.count;
                           node.children.push_back(compile(*l.child));
                       },
                   },
                   expr.node);
        return node;
    }

    auto count() const -> std::size_t { return next_id_; }

private:
    const Catalog& catalog_;
    std::size_t next_id_ = 0;
};

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

auto eval_term(const CompiledTerm& t, const Row& row) -> Value {
    switch (t.kind) {
    case CompiledTerm::Kind::Column: return row[t.index];
    case CompiledTerm::Kind::Const: return t.constant;
    case CompiledTerm::Kind::Lower: {
        auto v = eval_term(*t.arg, row);
        if (auto* s = std::get_if<std::string>(&v)) {
            return Value{ascii_lower(*s)};
        }
        if (!is_null(v)) {
            throw ExecError(ExecErrorKind::RuntimeTypeError, "lower() applied to a non-text value");
        }
        return v;
    }
    }
    return {};
}

bool eval_pred(const CompiledPredicate& p, const Row& row) {
    switch (p.kind) {
    case CompiledPredicate::Kind::Compare: return evaluate_compare(p.op, eval_term(p.lhs, row), eval_term(p.rhs, row));
    case CompiledPredicate::Kind::In: {
        const auto& v = row[p.column];
        return std::any_of(p.values.begin(), p.values.end(),
                           [&](const Value& lit) { return evaluate_compare(CompareOp::Eq, v, lit); });
    }
    case CompiledPredicate::Kind::Contains: {
        auto v = eval_term(p.lhs, row);
        if (const auto* s = std::get_if<std::string>(&v)) {
            return s->find(p.needle) != std::string::npos;
        }
        return false;
    }
    case CompiledPredicate::Kind::And: return eval_pred(*p.a, row) && eval_pred(*p.b, row);
    case CompiledPredicate::Kind::Or: return eval_pred(*p.a, row) || eval_pred(*p.b, row);
    case CompiledPredicate::Kind::Not: return !eval_pred(*p.a, row);
    }
    return false;
}

struct RowHash {
    std::size_t operator()(const Row& r) const {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (const auto& v : r) {
            h ^= hash_value(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

struct RowEq {
    bool operator()(const Row& a, const Row& b) const {
        return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), values_identical);
    }
};

using RowSet = std::unordered_set<Row, RowHash, RowEq>;

auto dedupe(std::vector<Row> rows) -> std::vector<Row> {
    RowSet seen;
    std::vector<Row> out;
    for (auto& r : rows) {
        if (seen.insert(r).second) {
            out.push_back(std::move(r));
        }
    }
    return out;
}

auto coerce_rows(std::vector<Row> rows, const TableSchema& schema) -> std::vector<Row> {
    for (auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] = coerce_to(r[i], schema.columns[i].type.kind);
        }
    }
    return rows;
}

auto concat_rows(const Row& l, const Row& r) -> Row {
    Row out;
    out.reserve(l.size() + r.size());
    out.insert(out.end(), l.begin(), l.end());
    out.insert(out.end(), r.begin(), r.end());
    return out;
}

auto pick(const Row& row, const std::vector<std::size_t>& idx) -> Row {
    Row out;
    out.reserve(idx.size());
    for (auto i : idx) {
        out.push_back(row[i]);
    }
    return out;
}

struct Accumulator {
    std::int64_t count = 0;
    std::int64_t int_sum = 0;
    double float_sum = 0;
    Value best;
    bool overflow = false;
};

void accumulate(Accumulator& acc, const CompiledAggregate& agg, const Row& row) {
    if (agg.fn == AggFn::CountStar) {
        ++acc.count;
        return;
    }
    const auto& v = row[agg.input];
    if (is_null(v)) {
        return;
    }
    ++acc.count;
    switch (agg.fn) {
    case AggFn::Sum:
    case AggFn::Avg:
        if (const auto* i = std::get_if<std::int64_t>(&v)) {
            if (__builtin_add_overflow(acc.int_sum, *i, &acc.int_sum)) {
                acc.overflow = true;
            }
            acc.float_sum += static_cast<double>(*i);
        } else {
            acc.float_sum += std::get<double>(v);
        }
        break;
    case AggFn::Min:
        if (is_null(acc.best) || compare_values(v, acc.best) < 0) {
            acc.best = v;
        }
        break;
    case AggFn::Max:
        if (is_null(acc.best) || compare_values(v, acc.best) > 0) {
            acc.best = v;
        }
        break;
    default: break;
    }
}

auto finish(const Accumulator& acc, const CompiledAggregate& agg, TypeKind out_kind) -> Value {
    switch (agg.fn) {
    case AggFn::CountStar:
    case AggFn::Count: return Value{acc.count};
    case AggFn::Sum:
        if (acc.count == 0) {
            return {};
        }
        if (out_kind == TypeKind::Int) {
            if (acc.overflow) {
                throw ExecError(ExecErrorKind::IntegerOverflow, "integer overflow in sum()");
            }
            return Value{acc.int_sum};
        }
        return Value{acc.float_sum};
    case AggFn::Avg:
        if (acc.count == 0) {
            return {};
        }
        return Value{acc.float_sum / static_cast<double>(acc.count)};
    case AggFn::Min:
    case AggFn::Max: return acc.best;
    }
    return {};
}

class Executor {
public:
    Executor(const Database& db, ExecutionStats* stats) : db_(db), stats_(stats) {}

    auto run(const PlanNode& node) -> std::vector<Row> {
        std::vector<std::vector<Row>> inputs;
        std::uint64_t rows_in = 0;
        for (const auto& child : node.children) {
            inputs.push_back(run(child));
            rows_in += inputs.back().size();
        }
        auto out = apply(node, inputs);
        if (stats_ != nullptr) {
            auto& s = stats_->nodes.at(node.id);
            s.op = node.op;
            s.rows_in = rows_in;
            s.rows_out = out.size();
        }
        return out;
    }

private:
    const Database& db_;
    ExecutionStats* stats_;

    auto scan(const PlanNode& node) -> std::vector<Row> {
        auto it = db_.find(node.table);
        if (it == db_.end()) {
            throw ExecError(ExecErrorKind::MissingTable, "database has no table '" + node.table + "'");
        }
        const auto& rel = it->second;
        std::vector<std::size_t> map;
        for (const auto& c : node.schema.columns) {
            auto idx = rel.schema.find(c.name);
            if (!idx) {
                throw ExecError(ExecErrorKind::MissingTable,
                                "table '" + node.table + "' in the database lacks column '" + c.name + "'");
            }
            map.push_back(*idx);
        }
        std::vector<Row> out;
        out.reserve(rel.rows.size());
        for (const auto& r : rel.rows) {
            auto row = pick(r, map);
            for (std::size_t i = 0; i < row.size(); ++i) {
                row[i] = coerce_to(row[i], node.schema.columns[i].type.kind);
            }
            out.push_back(std::move(row));
        }
        return out;
    }

    auto apply(const PlanNode& node, std::vector<std::vector<Row>>& in) -> std::vector<Row> {
        switch (node.op) {
        case PlanOp::Scan: return scan(node);
        case PlanOp::Filter: {
            std::vector<Row> out;
            for (auto& r : in[0]) {
                if (eval_pred(*node.predicate, r)) {
                    out.push_back(std::move(r));
                }
            }
            return out;
        }
        case PlanOp::Project: {
            std::vector<Row> out;
            out.reserve(in[0].size());
            for (const auto& r : in[0]) {
                out.push_back(pick(r, node.columns));
            }
            return out;
        }
        case PlanOp::Rename:
        case PlanOp::Limit:
            if (node.op == PlanOp::Limit && static_cast<std::uint64_t>(node.limit) < in[0].size()) {
                in[0].resize(static_cast<std::size_t>(node.limit));
            }
            return std::move(in[0]);
        case PlanOp::Union: {
            auto rows = coerce_rows(std::move(in[0]), node.schema);
            auto right = coerce_rows(std::move(in[1]), node.schema);
            rows.insert(rows.end(), std::make_move_iterator(right.begin()), std::make_move_iterator(right.end()));
            return dedupe(std::move(rows));
        }
        case PlanOp::Minus:
        case PlanOp::Intersect: {
            auto left = coerce_rows(std::move(in[0]), node.schema);
            auto right = coerce_rows(std::move(in[1]), node.schema);
            RowSet rset(right.begin(), right.end());
            bool keep_if_present = node.op == PlanOp::Intersect;
            std::vector<Row> out;
            for (auto& r : dedupe(std::move(left))) {
                if ((rset.count(r) > 0) == keep_if_present) {
                    out.push_back(std::move(r));
                }
            }
            return out;
        }
        case PlanOp::CrossProduct: {
            std::vector<Row> out;
            out.reserve(in[0].size() * in[1].size());
            for (const auto& l : in[0]) {
                for (const auto& r : in[1]) {
                    out.push_back(concat_rows(l, r));
                }
            }
            return out;
        }
        case PlanOp::NestedLoopJoin: {
            std::vector<Row> out;
            for (const auto& l : in[0]) {
                for (const auto& r : in[1]) {
                    auto joined = concat_rows(l, r);
                    if (eval_pred(*node.predicate, joined)) {
                        out.push_back(std::move(joined));
                    }
                }
            }
            return out;
        }
        case PlanOp::HashJoin: return hash_join(node, in[0], in[1]);
        case PlanOp::Divide: return divide(node, in[0], in[1]);
        case PlanOp::Aggregate: return aggregate(node, in[0]);
        case PlanOp::Distinct: return dedupe(std::move(in[0]));
        case PlanOp::Sort: {
            auto rows = std::move(in[0]);
            std::stable_sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
                for (std::size_t k = 0; k < node.columns.size(); ++k) {
                    auto c = compare_values(a[node.columns[k]], b[node.columns[k]]);
                    if (c != 0) {
                        return node.descending[k] ? c > 0 : c < 0;
                    }
                }
                return false;
            });
            return rows;
        }
        }
        return {};
    }

    auto hash_join(const PlanNode& node, const std::vector<Row>& left, const std::vector<Row>& right)
        -> std::vector<Row> {
        std::vector<std::size_t> lk;
        std::vector<std::size_t> rk;
        for (const auto& [l, r] : node.join_keys) {
            lk.push_back(l);
            rk.push_back(r);
        }
        auto has_null = [](const Row& key) { return std::any_of(key.begin(), key.end(), is_null); };
        std::unordered_map<Row, std::vector<std::size_t>, RowHash, RowEq> table;
        for (std::size_t i = 0; i < right.size(); ++i) {
            auto key = pick(right[i], rk);
            if (!has_null(key)) {
                table[std::move(key)].push_back(i);
            }
        }
        std::vector<Row> out;
        for (const auto& l : left) {
            auto key = pick(l, lk);
            if (has_null(key)) {
                continue;
            }
            auto it = table.find(key);
            if (it == table.end()) {
                continue;
            }
            for (auto i : it->second) {
                auto joined = concat_rows(l, right[i]);
                if (eval_pred(*node.predicate, joined)) {
                    out.push_back(std::move(joined));
                }
            }
        }
        return out;
    }

    // Keeps each quotient tuple q for which every divisor row d has (q, d) in
    // the dividend. An empty divisor keeps every quotient tuple.
    auto divide(const PlanNode& node, const std::vector<Row>& dividend, const std::vector<Row>& divisor)
        -> std::vector<Row> {
        auto required = dedupe(divisor);
        std::vector<Row> quotients;
        std::unordered_map<Row, RowSet, RowHash, RowEq> pairs;
        for (const auto& r : dividend) {
            auto q = pick(r, node.columns);
            auto it = pairs.find(q);
            if (it == pairs.end()) {
                quotients.push_back(q);
                it = pairs.emplace(std::move(q), RowSet{}).first;
            }
            it->second.insert(pick(r, node.divisor_columns));
        }
        std::vector<Row> out;
        for (auto& q : quotients) {
            const auto& have = pairs.at(q);
            bool all = std::all_of(required.begin(), required.end(), [&](const Row& d) { return have.count(d) > 0; });
            if (all) {
                out.push_back(std::move(q));
            }
        }
        return out;
    }

    auto aggregate(const PlanNode& node, const std::vector<Row>& rows) -> std::vector<Row> {
        std::vector<Row> keys;
        std::vector<std::vector<Accumulator>> accs;
        std::unordered_map<Row, std::size_t, RowHash, RowEq> index;
        if (node.columns.empty()) {
            keys.emplace_back();
            accs.emplace_back(node.aggregates.size());
        }
        for (const auto& r : rows) {
            std::size_t g = 0;
            if (!node.columns.empty()) {
                auto key = pick(r, node.columns);
                auto [it, inserted] = index.emplace(key, keys.size());
                if (inserted) {
                    keys.push_back(std::move(key));
                    accs.emplace_back(node.aggregates.size());
                }
                g = it->second;
            }
            for (std::size_t a = 0; a < node.aggregates.size(); ++a) {
                accumulate(accs[g][a], node.aggregates[a], r);
            }
        }
        std::vector<Row> out;
        out.reserve(keys.size());
        auto nkeys = node.columns.size();
        for (std::size_t g = 0; g < keys.size(); ++g) {
            Row row = keys[g];
            for (std::size_t a = 0; a < node.aggregates.size(); ++a) {
                row.push_back(finish(accs[g][a], node.aggregates[a], node.schema.columns[nkeys + a].type.kind));
            }
            out.push_back(std::move(row));
        }
        return out;
    }
};

void explain_node(const PlanNode& node, int depth, std::string& out) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += to_string(node.op);
    if (node.op == PlanOp::Scan) {
        out += " " + node.table;
    }
    if (node.op == PlanOp::Limit) {
        out += " " + std::to_string(node.limit);
    }
    out += " -> (";
    for (std::size_t i = 0; i < node.schema.columns.size(); ++i) {
        out += (i > 0 ? ", " : "") + node.schema.columns[i].name;
    }
    out += ")\n";
    for (const auto& c : node.children) {
        explain_node(c, depth + 1, out);
    }
}

} // namespace

auto compile_plan(const Expr& expr, const Catalog& catalog) -> Plan {
    // Validate the whole tree first so errors match infer_schema exactly.
    infer_schema(expr, catalog);
    Compiler compiler(catalog);
    Plan plan;
    plan.root = compiler.compile(expr);
    plan.node_count = compiler.count();
    return plan;
}

auto explain(const Plan& plan) -> std::string {
    std::string out;
    explain_node(plan.root, 0, out);
    return out;
}

auto execute(const Plan& plan, const Database& database, ExecutionStats* stats) -> Relation {
    if (stats != nullptr) {
        stats->nodes.assign(plan.node_count, NodeStats{});
    }
    Executor exec(database, stats);
    Relation out;
    out.schema = plan.root.schema;
    out.rows = exec.run(plan.root);
    return out;
}

auto evaluate(const Expr& expr, const Catalog& catalog, const Database& database, ExecutionStats* stats)
    -> Relation {
    return execute(compile_plan(expr, catalog), database, stats);
}

} // namespace gatelens
