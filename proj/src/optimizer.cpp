#include "gatelens/optimizer.hpp"

#include "gatelens/overloaded.hpp"
#include "gatelens/text.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace gatelens {

namespace {

using NameSet = std::set<std::string>; // lower-cased column names

auto lowered(const std::vector<std::string>& names) -> NameSet {
    NameSet out;
    for (const auto& n : names) {
        out.insert(ascii_lower(n));
    }
    return out;
}

bool all_in(const std::vector<std::string>& names, const TableSchema& schema) {
    return std::all_of(names.begin(), names.end(), [&](const std::string& n) { return schema.find(n).has_value(); });
}

class Optimizer {
public:
    Optimizer(const Catalog& catalog, std::size_t budget) : catalog_(catalog), budget_(budget) {}

    auto run(const Expr& input) -> Expr {
        Expr current = input;
        while (budget_ > 0) {
            auto pushed = pushdown(current);
            auto pruned = prune(pushed, std::nullopt, false);
            if (pruned == current) {
                break;
            }
            current = std::move(pruned);
        }
        return current;
    }

private:
    const Catalog& catalog_;
    std::size_t budget_;

    auto schema(const Expr& e) const -> TableSchema { return infer_schema(e, catalog_); }

    bool spend() {
        if (budget_ == 0) {
            return false;
        }
        --budget_;
        return true;
    }

    // -----------------------------------------------------------------------
    // Rules 1, 2, 3, 5, 6: bottom-up, re-simplifying whatever a rule produces.
    // -----------------------------------------------------------------------

    auto pushdown(const Expr& e) -> Expr {
        auto rebuilt = with_children(e, [this](const Expr& c) { return pushdown(c); });
        if (auto rewritten = rewrite_root(rebuilt)) {
            return pushdown(*rewritten);
        }
        return rebuilt;
    }

    template <class F>
    auto with_children(const Expr& e, F&& f) -> Expr {
        return std::visit(
            Overloaded{
                [&](const Scan& s) { return Expr{s}; },
                [&](const Select& s) { return ra::select(s.predicate, f(*s.child)); },
                [&](const Project& p) { return ra::project(p.columns, f(*p.child)); },
                [&](const Rename& r) { return ra::rename(r.pairs, f(*r.child)); },
                [&](const SetOp& s) { return Expr{SetOp{s.kind, f(*s.left), f(*s.right)}}; },
                [&](const Times& t) { return ra::times(f(*t.left), f(*t.right)); },
                [&](const Divide& d) { return ra::divide(f(*d.left), f(*d.right)); },
                [&](const Join& j) { return ra::join(j.predicate, f(*j.left), f(*j.right)); },
                [&](const GroupBy& g) { return ra::groupby(g.keys, g.aggregates, f(*g.child)); },
                [&](const Distinct& d) { return ra::distinct(f(*d.child)); },
                [&](const Sort& s) { return ra::sort(s.keys, f(*s.child)); },
                [&](const Limit& l) { return ra::limit(l.count, f(*l.child)); },
            },
            e.node);
    }

    auto rewrite_root(const Expr& e) -> std::optional<Expr> {
        if (const auto* d = std::get_if<Distinct>(&e.node)) {
            if (std::holds_alternative<Distinct>(d->child->node) && spend()) {
                return *d->child;
            }
            return std::nullopt;
        }
        if (const auto* p = std::get_if<Project>(&e.node)) {
            if (const auto* inner = std::get_if<Project>(&p->child->node); inner != nullptr && spend()) {
                return ra::project(p->columns, *inner->child);
            }
            return std::nullopt;
        }
        if (const auto* s = std::get_if<Select>(&e.node)) {
            return rewrite_select(*s);
        }
        return std::nullopt;
    }

    auto rewrite_select(const Select& s) -> std::optional<Expr> {
        if (const auto* conj = std::get_if<And>(&s.predicate.node)) {
            if (!spend()) {
                return std::nullopt;
            }
            return ra::select(*conj->lhs, ra::select(*conj->rhs, *s.child));
        }
        auto cols = predicate_columns(s.predicate);
        const auto& child = *s.child;

        if (const auto* t = std::get_if<Times>(&child.node)) {
            if (!spend()) {
                return std::nullopt;
            }
            if (all_in(cols, schema(*t->left))) {
                return ra::times(ra::select(s.predicate, *t->left), *t->right);
            }
            if (all_in(cols, schema(*t->right))) {
                return ra::times(*t->left, ra::select(s.predicate, *t->right));
            }
            return ra::join(s.predicate, *t->left, *t->right);
        }
        if (const auto* j = std::get_if<Join>(&child.node)) {
            if (!spend()) {
                return std::nullopt;
            }
            if (all_in(cols, schema(*j->left))) {
                return ra::join(j->predicate, ra::select(s.predicate, *j->left), *j->right);
            }
            if (all_in(cols, schema(*j->right))) {
                return ra::join(j->predicate, *j->left, ra::select(s.predicate, *j->right));
            }
            return ra::join(ra::and_(j->predicate, s.predicate), *j->left, *j->right);
        }
        if (const auto* op = std::get_if<SetOp>(&child.node)) {
            if (!spend()) {
                return std::nullopt;
            }
            // Right-hand columns are matched by position.
            auto left = schema(*op->left);
            auto right = schema(*op->right);
            std::vector<std::pair<std::string, std::string>> map;
            for (std::size_t i = 0; i < left.columns.size(); ++i) {
                map.emplace_back(left.columns[i].name, right.columns[i].name);
            }
            auto right_pred = rename_predicate_columns(s.predicate, map);
            return Expr{SetOp{op->kind, ra::select(s.predicate, *op->left), ra::select(right_pred, *op->right)}};
        }
        if (const auto* d = std::get_if<Distinct>(&child.node)) {
            if (!spend()) {
                return std::nullopt;
            }
            return ra::distinct(ra::select(s.predicate, *d->child));
        }
        if (const auto* so = std::get_if<Sort>(&child.node)) {
            if (!spend()) {
                return std::nullopt;
            }
            return ra::sort(so->keys, ra::select(s.predicate, *so->child));
        }
        return std::nullopt;
    }

    // -----------------------------------------------------------------------
    // Rule 4: top-down column pruning. `required` is nullopt when every output
    // column is needed.
    // -----------------------------------------------------------------------

    using Required = std::optional<NameSet>;

    static auto with(const Required& required, const std::vector<std::string>& extra) -> Required {
        if (!required) {
            return std::nullopt;
        }
        auto out = *required;
        auto more = lowered(extra);
        out.insert(more.begin(), more.end());
        return out;
    }

    auto restrict_to(const Required& required, const TableSchema& side) const -> Required {
        if (!required) {
            return std::nullopt;
        }
        NameSet out;
        for (const auto& c : side.columns) {
            if (required->count(ascii_lower(c.name)) > 0) {
                out.insert(ascii_lower(c.name));
            }
        }
        return out;
    }

    // Columns of `available` that are required, in order; never empty.
    static auto narrowed(const std::vector<std::string>& available, const NameSet& required)
        -> std::vector<std::string> {
        std::vector<std::string> out;
        for (const auto& c : available) {
            if (required.count(ascii_lower(c)) > 0) {
                out.push_back(c);
            }
        }
        if (out.empty()) {
            out.push_back(available.front());
        }
        return out;
    }

    auto prune(const Expr& e, const Required& required, bool under_project) -> Expr {
        return std::visit(
            Overloaded{
                [&](const Scan& s) -> Expr {
                    if (!required || under_project) {
                        return Expr{s};
                    }
                    auto all = schema(Expr{s}).column_names();
                    auto keep = narrowed(all, *required);
                    if (keep.size() == all.size() || !spend()) {
                        return Expr{s};
                    }
                    return ra::project(std::move(keep), Expr{s});
                },
                [&](const Select& s) -> Expr {
                    return ra::select(s.predicate,
                                      prune(*s.child, with(required, predicate_columns(s.predicate)), false));
                },
                [&](const Project& p) -> Expr {
                    auto cols = p.columns;
                    if (required) {
                        auto keep = narrowed(cols, *required);
                        if (keep.size() < cols.size() && spend()) {
                            cols = std::move(keep);
                        }
                    }
                    return ra::project(cols, prune(*p.child, lowered(cols), true));
                },
                [&](const Rename& r) -> Expr {
                    Required child_req;
                    if (required) {
                        NameSet mapped;
                        for (const auto& name : *required) {
                            auto it = std::find_if(r.pairs.begin(), r.pairs.end(),
                                                   [&](const RenamePair& p) { return iequals(p.to, name); });
                            mapped.insert(it == r.pairs.end() ? name : ascii_lower(it->from));
                        }
                        for (const auto& p : r.pairs) {
                            mapped.insert(ascii_lower(p.from));
                        }
                        child_req = std::move(mapped);
                    }
                    return ra::rename(r.pairs, prune(*r.child, child_req, false));
                },
                [&](const SetOp& s) -> Expr {
                    return Expr{SetOp{s.kind, prune(*s.left, std::nullopt, false),
                                      prune(*s.right, std::nullopt, false)}};
                },
                [&](const Times& t) -> Expr {
                    return ra::times(prune(*t.left, restrict_to(required, schema(*t.left)), false),
                                     prune(*t.right, restrict_to(required, schema(*t.right)), false));
                },
                [&](const Divide& d) -> Expr {
                    return ra::divide(prune(*d.left, std::nullopt, false), prune(*d.right, std::nullopt, false));
                },
                [&](const Join& j) -> Expr {
                    auto req = with(required, predicate_columns(j.predicate));
                    return ra::join(j.predicate, prune(*j.left, restrict_to(req, schema(*j.left)), false),
                                    prune(*j.right, restrict_to(req, schema(*j.right)), false));
                },
                [&](const GroupBy& g) -> Expr {
                    auto needed = g.keys;
                    for (const auto& a : g.aggregates) {
                        if (a.fn != AggFn::CountStar) {
                            needed.push_back(a.input);
                        }
                    }
                    return ra::groupby(g.keys, g.aggregates, prune(*g.child, lowered(needed), false));
                },
                [&](const Distinct& d) -> Expr { return ra::distinct(prune(*d.child, std::nullopt, false)); },
                [&](const Sort& s) -> Expr {
                    std::vector<std::string> keys;
                    for (const auto& k : s.keys) {
                        keys.push_back(k.column);
                    }
                    return ra::sort(s.keys, prune(*s.child, with(required, keys), false));
                },
                [&](const Limit& l) -> Expr { return ra::limit(l.count, prune(*l.child, required, false)); },
            },
            e.node);
    }
};

} // namespace

auto optimize(const Expr& expr, const Catalog& catalog, const OptimizerOptions& options) -> Expr {
    try {
        auto before = infer_schema(expr, catalog);
        auto out = Optimizer(catalog, options.rewrite_budget).run(expr);
        if (!same_shape(before, infer_schema(out, catalog))) {
            return expr;
        }
        return out;
    } catch (const std::exception&) {
        return expr;
    }
}

} // namespace gatelens
