#include "gatelens/value.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

namespace gatelens {

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

int to_int(std::string_view s) {
    int out = 0;
    std::from_chars(s.data(), s.data() + s.size(), out);
    return out;
}

auto iequals(std::string_view a, std::string_view b) -> bool {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

auto as_double(const Value& v) -> double {
    if (const auto* i = std::get_if<std::int64_t>(&v)) {
        return static_cast<double>(*i);
    }
    return std::get<double>(v);
}

// Rank of the cross-kind order; int and float share a rank.
int rank_of(const Value& v) {
    switch (v.index()) {
    case 0: return 0;
    case 1: return 1;
    case 2:
    case 3: return 2;
    case 4: return 3;
    default: return 4;
    }
}

} // namespace

auto parse_date(std::string_view text) -> std::optional<Date> {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        return std::nullopt;
    }
    auto ys = text.substr(0, 4);
    auto ms = text.substr(5, 2);
    auto ds = text.substr(8, 2);
    if (!all_digits(ys) || !all_digits(ms) || !all_digits(ds)) {
        return std::nullopt;
    }
    std::chrono::year_month_day ymd{std::chrono::year{to_int(ys)},
                                    std::chrono::month{static_cast<unsigned>(to_int(ms))},
                                    std::chrono::day{static_cast<unsigned>(to_int(ds))}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return Date{static_cast<std::int32_t>(days)};
}

auto format_date(Date date) -> std::string {
    std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{date.days}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

auto to_string(TypeKind kind) -> std::string_view {
    switch (kind) {
    case TypeKind::Bool: return "bool";
    case TypeKind::Int: return "int";
    case TypeKind::Float: return "float";
    case TypeKind::Text: return "text";
    case TypeKind::Date: return "date";
    }
    return "?";
}

auto parse_type_kind(std::string_view name) -> std::optional<TypeKind> {
    for (auto kind : {TypeKind::Bool, TypeKind::Int, TypeKind::Float, TypeKind::Text, TypeKind::Date}) {
        if (name == to_string(kind)) {
            return kind;
        }
    }
    return std::nullopt;
}

auto kind_of(const Value& v) -> std::optional<TypeKind> {
    switch (v.index()) {
    case 1: return TypeKind::Bool;
    case 2: return TypeKind::Int;
    case 3: return TypeKind::Float;
    case 4: return TypeKind::Text;
    case 5: return TypeKind::Date;
    default: return std::nullopt;
    }
}

auto compare_values(const Value& a, const Value& b) -> std::strong_ordering {
    int ra = rank_of(a);
    int rb = rank_of(b);
    if (ra != rb) {
        return ra <=> rb;
    }
    switch (ra) {
    case 0: return std::strong_ordering::equal;
    case 1: return std::get<bool>(a) <=> std::get<bool>(b);
    case 2: {
        if (a.index() == 2 && b.index() == 2) {
            return std::get<std::int64_t>(a) <=> std::get<std::int64_t>(b);
        }
        double x = as_double(a);
        double y = as_double(b);
        if (x < y) {
            return std::strong_ordering::less;
        }
        if (x > y) {
            return std::strong_ordering::greater;
        }
        return std::strong_ordering::equal;
    }
    case 3: {
        int c = std::get<std::string>(a).compare(std::get<std::string>(b));
        return c <=> 0;
    }
    default: return std::get<Date>(a) <=> std::get<Date>(b);
    }
}

auto to_string(CompareOp op) -> std::string_view {
    switch (op) {
    case CompareOp::Eq: return "==";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    }
    return "?";
}

bool evaluate_compare(CompareOp op, const Value& a, const Value& b) {
    if (is_null(a) || is_null(b)) {
        return false;
    }
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

auto hash_value(const Value& v) -> std::size_t {
    switch (v.index()) {
    case 0: return 0x9e3779b97f4a7c15ULL;
    case 1: return std::hash<bool>{}(std::get<bool>(v)) + 1;
    case 2:
    case 3: {
        double d = as_double(v);
        if (d == 0.0) {
            d = 0.0;
        }
        return std::hash<double>{}(d);
    }
    case 4: return std::hash<std::string>{}(std::get<std::string>(v));
    default: return std::hash<std::int32_t>{}(std::get<Date>(v).days) ^ 0x5bd1e995;
    }
}

auto coerce_to(const Value& v, TypeKind kind) -> Value {
    if (kind == TypeKind::Float) {
        if (const auto* i = std::get_if<std::int64_t>(&v)) {
            return static_cast<double>(*i);
        }
    }
    return v;
}

auto format_double(double value) -> std::string {
    char buf[400];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    std::string out(buf, end);
    if (out.find('.') == std::string::npos) {
        out += ".0";
    }
    return out;
}

auto value_to_text(const Value& v) -> std::string {
    switch (v.index()) {
    case 0: return {};
    case 1: return std::get<bool>(v) ? "true" : "false";
    case 2: return std::to_string(std::get<std::int64_t>(v));
    case 3: return format_double(std::get<double>(v));
    case 4: return std::get<std::string>(v);
    default: return format_date(std::get<Date>(v));
    }
}

auto parse_value(std::string_view text, TypeKind kind) -> std::optional<Value> {
    switch (kind) {
    case TypeKind::Bool:
        if (iequals(text, "true")) {
            return Value{true};
        }
        if (iequals(text, "false")) {
            return Value{false};
        }
        return std::nullopt;
    case TypeKind::Int: {
        std::int64_t out = 0;
        auto body = text;
        if (!body.empty() && body.front() == '+') {
            body.remove_prefix(1);
            if (!body.empty() && body.front() == '-') {
                return std::nullopt;
            }
        }
        auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), out);
        if (ec != std::errc{} || ptr != body.data() + body.size() || body.empty()) {
            return std::nullopt;
        }
        return Value{out};
    }
    case TypeKind::Float: {
        double out = 0;
        auto body = text;
        if (!body.empty() && body.front() == '+') {
            body.remove_prefix(1);
            if (!body.empty() && body.front() == '-') {
                return std::nullopt;
            }
        }
        auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), out);
        if (ec != std::errc{} || ptr != body.data() + body.size() || body.empty() || !std::isfinite(out)) {
            return std::nullopt;
        }
        return Value{out};
    }
    case TypeKind::Text: return Value{std::string(text)};
    case TypeKind::Date: {
        auto d = parse_date(text);
        if (!d) {
            return std::nullopt;
        }
        return Value{*d};
    }
    }
    return std::nullopt;
}

} // namespace gatelens
