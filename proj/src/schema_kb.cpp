#include "gatelens/schema_kb.hpp"

#include "gatelens/overloaded.hpp"
#include "gatelens/text.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace gatelens {

auto render_schema_prompt(const Catalog& catalog) -> std::string {
    std::string out;
    if (!catalog.domain_context().empty()) {
        out += "Domain context:\n" + catalog.domain_context() + "\n\n";
    }
    if (catalog.tables().empty()) {
        return out + "No tables are available.\n";
    }
    out += "Tables:\n";
    for (const auto& table : catalog.tables()) {
        out += "\nTable " + table.name + "\n";
        for (const auto& c : table.columns) {
            out += "  - " + c.name + " (" + std::string(to_string(c.type.kind)) +
                   (c.type.nullable ? ", nullable" : ", not null") + ")";
            if (!c.description.empty()) {
                out += ": " + c.description;
            }
            if (!c.synonyms.empty()) {
                out += " [also called: ";
                for (std::size_t i = 0; i < c.synonyms.size(); ++i) {
                    out += (i > 0 ? ", " : "") + c.synonyms[i];
                }
                out += "]";
            }
            out += "\n";
        }
    }
    return out;
}

auto to_string(ResolutionMethod method) -> std::string_view {
    switch (method) {
    case ResolutionMethod::Exact: return "exact";
    case ResolutionMethod::CaseFold: return "case_fold";
    case ResolutionMethod::Synonym: return "synonym";
    case ResolutionMethod::Normalized: return "normalized";
    case ResolutionMethod::EditDistance: return "edit_distance";
    }
    return "?";
}

namespace {

auto describe(ResolveErrorKind kind, const std::string& requested, const std::vector<std::string>& tied)
    -> std::string {
    if (kind == ResolveErrorKind::Unresolved) {
        return "'" + requested + "' does not match any known name";
    }
    std::string names;
    for (const auto& t : tied) {
        names += (names.empty() ? "" : ", ") + t;
    }
    return "'" + requested + "' is ambiguous between " + names;
}

} // namespace

ResolveError::ResolveError(ResolveErrorKind kind, std::string requested, std::vector<std::string> tied)
    : std::runtime_error(describe(kind, requested, tied)),
      kind_(kind),
      requested_(std::move(requested)),
      tied_(std::move(tied)) {}

auto normalize_identifier(std::string_view s) -> std::string {
    std::string out;
    for (char c : s) {
        if (c != ' ' && c != '_' && c != '-') {
            out += c;
        }
    }
    return ascii_lower(out);
}

auto levenshtein(std::string_view a, std::string_view b) -> std::size_t {
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) {
        prev[j] = j;
    }
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

auto resolve_identifier(std::string_view requested, const std::vector<Candidate>& candidates) -> Resolution {
    std::string req(requested);
    auto decide = [&](ResolutionMethod method, const std::set<std::string>& hits, int distance) {
        if (hits.size() > 1) {
            throw ResolveError(ResolveErrorKind::Ambiguous, req, {hits.begin(), hits.end()});
        }
        return Resolution{req, *hits.begin(), method, distance};
    };
    auto stage = [&](auto&& matches) {
        std::set<std::string> hits;
        for (const auto& c : candidates) {
            if (matches(c)) {
                hits.insert(c.name);
            }
        }
        return hits;
    };
    auto any_synonym = [](const Candidate& c, auto&& pred) {
        return std::any_of(c.synonyms.begin(), c.synonyms.end(), pred);
    };

    if (auto hits = stage([&](const Candidate& c) { return c.name == requested; }); !hits.empty()) {
        return decide(ResolutionMethod::Exact, hits, 0);
    }
    if (auto hits = stage([&](const Candidate& c) { return iequals(c.name, requested); }); !hits.empty()) {
        return decide(ResolutionMethod::CaseFold, hits, 0);
    }
    if (auto hits = stage([&](const Candidate& c) {
            return any_synonym(c, [&](const std::string& s) { return iequals(s, requested); });
        });
        !hits.empty()) {
        return decide(ResolutionMethod::Synonym, hits, 0);
    }
    auto norm = normalize_identifier(requested);
    if (auto hits = stage([&](const Candidate& c) {
            return normalize_identifier(c.name) == norm ||
                   any_synonym(c, [&](const std::string& s) { return normalize_identifier(s) == norm; });
        });
        !hits.empty()) {
        return decide(ResolutionMethod::Normalized, hits, 0);
    }

    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::set<std::string> hits;
    for (const auto& c : candidates) {
        auto d = levenshtein(norm, normalize_identifier(c.name));
        for (const auto& s : c.synonyms) {
            d = std::min(d, levenshtein(norm, normalize_identifier(s)));
        }
        if (d < best) {
            best = d;
            hits = {c.name};
        } else if (d == best) {
            hits.insert(c.name);
        }
    }
    if (hits.empty() || best > static_cast<std::size_t>(kMaxEditDistance)) {
        throw ResolveError(ResolveErrorKind::Unresolved, req, {});
    }
    return decide(ResolutionMethod::EditDistance, hits, static_cast<int>(best));
}

namespace {

using Scope = std::vector<Candidate>;

auto scope_of(const TableSchema& schema) -> Scope {
    Scope out;
    for (const auto& c : schema.columns) {
        out.push_back({c.name, c.synonyms});
    }
    return out;
}

// Duplicate names only occur in expressions infer_schema rejects anyway;
// keeping the first lets that error surface instead of an ambiguity.
auto deduplicated(const Scope& scope) -> Scope {
    Scope out;
    std::set<std::string> seen;
    for (const auto& c : scope) {
        if (seen.insert(ascii_lower(c.name)).second) {
            out.push_back(c);
        }
    }
    return out;
}

class Binder {
public:
    explicit Binder(const Catalog& catalog) : catalog_(catalog) {}

    std::vector<Resolution> resolutions;

    auto bind(const Expr& e) -> std::pair<Expr, Scope> {
        return std::visit(
            Overloaded{
                [&](const Scan& s) -> std::pair<Expr, Scope> {
                    Scope tables;
                    for (const auto& t : catalog_.tables()) {
                        tables.push_back({t.name, {}});
                    }
                    if (tables.empty()) {
                        throw ResolveError(ResolveErrorKind::Unresolved, s.table, {});
                    }
                    auto name = resolve(s.table, tables);
                    return {ra::scan(name), scope_of(*catalog_.find(name))};
                },
                [&](const Select& s) -> std::pair<Expr, Scope> {
                    auto [child, scope] = bind(*s.child);
                    return {ra::select(predicate(s.predicate, scope), child), scope};
                },
                [&](const Project& p) -> std::pair<Expr, Scope> {
                    auto [child, scope] = bind(*p.child);
                    std::vector<std::string> cols;
                    Scope out;
                    for (const auto& c : p.columns) {
                        cols.push_back(resolve(c, scope));
                        out.push_back(find(scope, cols.back()));
                    }
                    return {ra::project(cols, child), out};
                },
                [&](const Rename& r) -> std::pair<Expr, Scope> {
                    auto [child, scope] = bind(*r.child);
                    std::vector<RenamePair> pairs;
                    for (const auto& pair : r.pairs) {
                        auto from = resolve(pair.from, scope);
                        pairs.push_back({from, pair.to});
                        for (auto& c : scope) {
                            if (iequals(c.name, from)) {
                                c = {pair.to, {}};
                            }
                        }
                    }
                    return {ra::rename(pairs, child), scope};
                },
                [&](const SetOp& s) -> std::pair<Expr, Scope> {
                    auto [l, ls] = bind(*s.left);
                    auto [r, rs] = bind(*s.right);
                    return {Expr{SetOp{s.kind, l, r}}, ls};
                },
                [&](const Times& t) -> std::pair<Expr, Scope> {
                    auto [l, ls] = bind(*t.left);
                    auto [r, rs] = bind(*t.right);
                    ls.insert(ls.end(), rs.begin(), rs.end());
                    return {ra::times(l, r), ls};
                },
                [&](const Join& j) -> std::pair<Expr, Scope> {
                    auto [l, ls] = bind(*j.left);
                    auto [r, rs] = bind(*j.right);
                    ls.insert(ls.end(), rs.begin(), rs.end());
                    return {ra::join(predicate(j.predicate, ls), l, r), ls};
                },
                [&](const Divide& d) -> std::pair<Expr, Scope> {
                    auto [l, ls] = bind(*d.left);
                    auto [r, rs] = bind(*d.right);
                    Scope out;
                    for (const auto& c : ls) {
                        bool in_divisor = std::any_of(rs.begin(), rs.end(),
                                                      [&](const Candidate& x) { return iequals(x.name, c.name); });
                        if (!in_divisor) {
                            out.push_back(c);
                        }
                    }
                    return {ra::divide(l, r), out};
                },
                [&](const GroupBy& g) -> std::pair<Expr, Scope> {
                    auto [child, scope] = bind(*g.child);
                    std::vector<std::string> keys;
                    Scope out;
                    for (const auto& k : g.keys) {
                        keys.push_back(resolve(k, scope));
                        out.push_back(find(scope, keys.back()));
                    }
                    std::vector<Aggregate> aggs;
                    for (const auto& a : g.aggregates) {
                        auto input = a.fn == AggFn::CountStar ? a.input : resolve(a.input, scope);
                        aggs.push_back({a.fn, input, a.output});
                        out.push_back({a.output, {}});
                    }
                    return {ra::groupby(keys, aggs, child), out};
                },
                [&](const Distinct& d) -> std::pair<Expr, Scope> {
                    auto [child, scope] = bind(*d.child);
                    return {ra::distinct(child), scope};
                },
                [&](const Sort& s) -> std::pair<Expr, Scope> {
                    auto [child, scope] = bind(*s.child);
                    std::vector<SortKey> keys;
                    for (const auto& k : s.keys) {
                        keys.push_back({resolve(k.column, scope), k.descending});
                    }
                    return {ra::sort(keys, child), scope};
                },
                [&](const Limit& l) -> std::pair<Expr, Scope> {
                    auto [child, scope] = bind(*l.child);
                    return {ra::limit(l.count, child), scope};
                },
            },
            e.node);
    }

private:
    const Catalog& catalog_;

    auto resolve(const std::string& name, const Scope& scope) -> std::string {
        auto usable = deduplicated(scope);
        if (usable.empty()) {
            throw ResolveError(ResolveErrorKind::Unresolved, name, {});
        }
        auto r = resolve_identifier(name, usable);
        if (r.method != ResolutionMethod::Exact) {
            resolutions.push_back(r);
        }
        return r.resolved;
    }

    static auto find(const Scope& scope, const std::string& name) -> Candidate {
        for (const auto& c : scope) {
            if (iequals(c.name, name)) {
                return c;
            }
        }
        return {name, {}};
    }

    auto term(const Term& t, const Scope& scope) -> Term {
        return std::visit(Overloaded{
                              [&](const ColumnRef& c) { return ra::col(resolve(c.name, scope)); },
                              [&](const Literal& l) { return Term{l}; },
                              [&](const LowerTerm& lt) { return ra::lower(term(*lt.arg, scope)); },
                          },
                          t.node);
    }

    auto predicate(const Predicate& p, const Scope& scope) -> Predicate {
        return std::visit(
            Overloaded{
                [&](const Comparison& c) { return ra::cmp(c.op, term(c.lhs, scope), term(c.rhs, scope)); },
                [&](const InList& in) { return ra::in(resolve(in.column, scope), in.values); },
                [&](const Contains& c) { return ra::contains(term(c.subject, scope), c.needle); },
                [&](const And& a) { return ra::and_(predicate(*a.lhs, scope), predicate(*a.rhs, scope)); },
                [&](const Or& o) { return ra::or_(predicate(*o.lhs, scope), predicate(*o.rhs, scope)); },
                [&](const Not& n) { return ra::not_(predicate(*n.arg, scope)); },
            },
            p.node);
    }
};

} // namespace

auto bind_and_repair(const Expr& expr, const Catalog& catalog) -> BoundExpr {
    Binder binder(catalog);
    auto [bound, scope] = binder.bind(expr);
    return {std::move(bound), std::move(binder.resolutions)};
}

} // namespace gatelens
