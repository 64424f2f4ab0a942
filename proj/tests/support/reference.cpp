#include "reference.hpp"

#include "gatelens/overloaded.hpp"

#include <algorithm>
#include <stdexcept>

namespace gatelens::testing {

namespace {

struct Table {
    std::vector<std::string> names;
    std::vector<Row> rows;

    auto index(const std::string& name) const -> std::size_t {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (iequals(names[i], name)) {
                return i;
            }
        }
        throw std::logic_error("reference: no column " + name);
    }
};

bool same(const Value& a, const Value& b) {
    return compare_values(a, b) == 0;
}

bool same_row(const Row& a, const Row& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!same(a[i], b[i])) {
            return false;
        }
    }
    return true;
}

bool member(const std::vector<Row>& rows, const Row& r) {
    return std::any_of(rows.begin(), rows.end(), [&](const Row& x) { return same_row(x, r); });
}

auto unique_rows(const std::vector<Row>& rows) -> std::vector<Row> {
    std::vector<Row> out;
    for (const auto& r : rows) {
        if (!member(out, r)) {
            out.push_back(r);
        }
    }
    return out;
}

auto term_value(const Term& t, const Table& tab, const Row& row) -> Value {
    return std::visit(Overloaded{
                          [&](const ColumnRef& c) { return row[tab.index(c.name)]; },
                          [&](const Literal& l) { return l.value; },
                          [&](const LowerTerm& lt) {
                              auto v = term_value(*lt.arg, tab, row);
                              if (auto* s = std::get_if<std::string>(&v)) {
                                  std::string out = *s;
                                  for (auto& ch : out) {
                                      if (ch >= 'A' && ch <= 'Z') {
                                          ch = static_cast<char>(ch - 'A' + 'a');
                                      }
                                  }
                                  return Value{out};
                              }
                              return v;
                          },
                      },
                      t.node);
}

// Text is read as a date when the other side is a date.
void align(Value& a, Value& b) {
    if (std::holds_alternative<Date>(a) && std::holds_alternative<std::string>(b)) {
        b = *parse_date(std::get<std::string>(b));
    } else if (std::holds_alternative<Date>(b) && std::holds_alternative<std::string>(a)) {
        a = *parse_date(std::get<std::string>(a));
    }
}

bool holds(CompareOp op, Value a, Value b) {
    if (is_null(a) || is_null(b)) {
        return false;
    }
    align(a, b);
    auto c = compare_values(a, b);
    switch (op) {
    case CompareOp::Eq: return c == 0;
    case CompareOp::Ne: return c != 0;
    case CompareOp::Lt: return c < 0;
    case CompareOp::Le: return c <= 0;
    case CompareOp::Gt: return c > 0;
    case CompareOp::Ge: return c >= 0;
    }
    return false;
}

bool test(const Predicate& p, const Table& tab, const Row& row) {
    return std::visit(Overloaded{
                          [&](const Comparison& c) {
                              return holds(c.op, term_value(c.lhs, tab, row), term_value(c.rhs, tab, row));
                          },
                          [&](const InList& in) {
                              auto v = row[tab.index(in.column)];
                              for (const auto& lit : in.values) {
                                  if (holds(CompareOp::Eq, v, lit)) {
                                      return true;
                                  }
                              }
                              return false;
                          },
                          [&](const Contains& c) {
                              auto v = term_value(c.subject, tab, row);
                              auto* s = std::get_if<std::string>(&v);
                              return s != nullptr && s->find(c.needle) != std::string::npos;
                          },
                          [&](const And& a) { return test(*a.lhs, tab, row) && test(*a.rhs, tab, row); },
                          [&](const Or& o) { return test(*o.lhs, tab, row) || test(*o.rhs, tab, row); },
                          [&](const Not& n) { return !test(*n.arg, tab, row); },
                      },
                      p.node);
}

auto columns(const Table& tab, const std::vector<std::string>& names) -> std::vector<std::size_t> {
    std::vector<std::size_t> out;
    for (const auto& n : names) {
        out.push_back(tab.index(n));
    }
    return out;
}

auto take(const Row& r, const std::vector<std::size_t>& idx) -> Row {
    Row out;
    for (auto i : idx) {
        out.push_back(r[i]);
    }
    return out;
}

auto aggregate(const Aggregate& a, const Table& tab, const std::vector<Row>& group, bool int_sum) -> Value {
    if (a.fn == AggFn::CountStar) {
        return Value{static_cast<std::int64_t>(group.size())};
    }
    auto col = tab.index(a.input);
    std::vector<Value> vals;
    for (const auto& r : group) {
        if (!is_null(r[col])) {
            vals.push_back(r[col]);
        }
    }
    auto num = [](const Value& v) {
        return v.index() == 2 ? static_cast<double>(std::get<std::int64_t>(v)) : std::get<double>(v);
    };
    switch (a.fn) {
    case AggFn::Count: return Value{static_cast<std::int64_t>(vals.size())};
    case AggFn::Sum: {
        if (vals.empty()) {
            return {};
        }
        if (int_sum) {
            std::int64_t s = 0;
            for (const auto& v : vals) {
                s += std::get<std::int64_t>(v);
            }
            return Value{s};
        }
        double s = 0;
        for (const auto& v : vals) {
            s += num(v);
        }
        return Value{s};
    }
    case AggFn::Avg: {
        if (vals.empty()) {
            return {};
        }
        double s = 0;
        for (const auto& v : vals) {
            s += num(v);
        }
        return Value{s / static_cast<double>(vals.size())};
    }
    case AggFn::Min:
    case AggFn::Max: {
        if (vals.empty()) {
            return {};
        }
        Value best = vals.front();
        for (const auto& v : vals) {
            auto c = compare_values(v, best);
            if (a.fn == AggFn::Min ? c < 0 : c > 0) {
                best = v;
            }
        }
        return best;
    }
    default: return {};
    }
}

class Reference {
public:
    Reference(const Catalog& catalog, const Database& db) : catalog_(catalog), db_(db) {}

    auto eval(const Expr& e) -> Table {
        return std::visit(
            Overloaded{
                [&](const Scan& s) {
                    const auto* schema = catalog_.find(s.table);
                    const auto& rel = db_.at(s.table);
                    Table out;
                    out.names = schema->column_names();
                    for (const auto& r : rel.rows) {
                        Row row;
                        for (const auto& n : out.names) {
                            row.push_back(r[*rel.schema.find(n)]);
                        }
                        out.rows.push_back(row);
                    }
                    return out;
                },
                [&](const Select& s) {
                    auto in = eval(*s.child);
                    Table out{in.names, {}};
                    for (const auto& r : in.rows) {
                        if (test(s.predicate, in, r)) {
                            out.rows.push_back(r);
                        }
                    }
                    return out;
                },
                [&](const Project& p) {
                    auto in = eval(*p.child);
                    auto idx = columns(in, p.columns);
                    Table out;
                    for (auto i : idx) {
                        out.names.push_back(in.names[i]);
                    }
                    for (const auto& r : in.rows) {
                        out.rows.push_back(take(r, idx));
                    }
                    return out;
                },
                [&](const Rename& rn) {
                    auto in = eval(*rn.child);
                    for (const auto& pair : rn.pairs) {
                        in.names[in.index(pair.from)] = pair.to;
                    }
                    return in;
                },
                [&](const SetOp& s) {
                    auto l = eval(*s.left);
                    auto r = eval(*s.right);
                    Table out{l.names, {}};
                    switch (s.kind) {
                    case SetOpKind::Union: {
                        auto all = l.rows;
                        all.insert(all.end(), r.rows.begin(), r.rows.end());
                        out.rows = unique_rows(all);
                        break;
                    }
                    case SetOpKind::Minus:
                        for (const auto& row : unique_rows(l.rows)) {
                            if (!member(r.rows, row)) {
                                out.rows.push_back(row);
                            }
                        }
                        break;
                    case SetOpKind::Intersect:
                        for (const auto& row : unique_rows(l.rows)) {
                            if (member(r.rows, row)) {
                                out.rows.push_back(row);
                            }
                        }
                        break;
                    }
                    return out;
                },
                [&](const Times& t) { return product(eval(*t.left), eval(*t.right), nullptr); },
                [&](const Join& j) { return product(eval(*j.left), eval(*j.right), &j.predicate); },
                [&](const Divide& d) {
                    auto l = eval(*d.left);
                    auto r = eval(*d.right);
                    std::vector<std::string> qnames;
                    for (const auto& n : l.names) {
                        bool in_r = std::any_of(r.names.begin(), r.names.end(),
                                                [&](const std::string& x) { return iequals(x, n); });
                        if (!in_r) {
                            qnames.push_back(n);
                        }
                    }
                    auto qidx = columns(l, qnames);
                    auto didx = columns(l, r.names);
                    Table out{qnames, {}};
                    for (const auto& row : l.rows) {
                        auto q = take(row, qidx);
                        if (member(out.rows, q)) {
                            continue;
                        }
                        bool every = std::all_of(r.rows.begin(), r.rows.end(), [&](const Row& b) {
                            return std::any_of(l.rows.begin(), l.rows.end(), [&](const Row& x) {
                                return same_row(take(x, qidx), q) && same_row(take(x, didx), b);
                            });
                        });
                        if (every) {
                            out.rows.push_back(q);
                        }
                    }
                    return out;
                },
                [&](const GroupBy& g) {
                    auto in = eval(*g.child);
                    auto kidx = columns(in, g.keys);
                    auto out_schema = infer_schema(e, catalog_);
                    Table out{out_schema.column_names(), {}};
                    std::vector<Row> keys;
                    std::vector<std::vector<Row>> groups;
                    if (g.keys.empty()) {
                        keys.emplace_back();
                        groups.emplace_back(in.rows);
                    } else {
                        for (const auto& r : in.rows) {
                            auto k = take(r, kidx);
                            auto it = std::find_if(keys.begin(), keys.end(),
                                                   [&](const Row& x) { return same_row(x, k); });
                            if (it == keys.end()) {
                                keys.push_back(k);
                                groups.push_back({r});
                            } else {
                                groups[static_cast<std::size_t>(it - keys.begin())].push_back(r);
                            }
                        }
                    }
                    for (std::size_t i = 0; i < keys.size(); ++i) {
                        auto row = keys[i];
                        for (std::size_t a = 0; a < g.aggregates.size(); ++a) {
                            bool int_sum = out_schema.columns[g.keys.size() + a].type.kind == TypeKind::Int;
                            row.push_back(aggregate(g.aggregates[a], in, groups[i], int_sum));
                        }
                        out.rows.push_back(row);
                    }
                    return out;
                },
                [&](const Distinct& d) {
                    auto in = eval(*d.child);
                    in.rows = unique_rows(in.rows);
                    return in;
                },
                [&](const Sort& s) {
                    auto in = eval(*s.child);
                    // Insertion sort: stable by construction.
                    std::vector<Row> out;
                    for (const auto& r : in.rows) {
                        auto pos = out.end();
                        while (pos != out.begin() && sort_before(s.keys, in, r, *(pos - 1))) {
                            --pos;
                        }
                        out.insert(pos, r);
                    }
                    in.rows = out;
                    return in;
                },
                [&](const Limit& l) {
                    auto in = eval(*l.child);
                    if (static_cast<std::size_t>(l.count) < in.rows.size()) {
                        in.rows.resize(static_cast<std::size_t>(l.count));
                    }
                    return in;
                },
            },
            e.node);
    }

private:
    const Catalog& catalog_;
    const Database& db_;

    static bool sort_before(const std::vector<SortKey>& keys, const Table& tab, const Row& a, const Row& b) {
        for (const auto& k : keys) {
            auto i = tab.index(k.column);
            auto c = compare_values(a[i], b[i]);
            if (c != 0) {
                return k.descending ? c > 0 : c < 0;
            }
        }
        return false;
    }

    static auto product(const Table& l, const Table& r, const Predicate* p) -> Table {
        Table out;
        out.names = l.names;
        out.names.insert(out.names.end(), r.names.begin(), r.names.end());
        for (const auto& a : l.rows) {
            for (const auto& b : r.rows) {
                auto row = a;
                row.insert(row.end(), b.begin(), b.end());
                if (p == nullptr || test(*p, out, row)) {
                    out.rows.push_back(row);
                }
            }
        }
        return out;
    }
};

} // namespace

auto reference_eval(const Expr& expr, const Catalog& catalog, const Database& db) -> Relation {
    auto tab = Reference(catalog, db).eval(expr);
    Relation out;
    out.schema = infer_schema(expr, catalog);
    out.rows = std::move(tab.rows);
    return out;
}

} // namespace gatelens::testing
