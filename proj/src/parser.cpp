#include "gatelens/parser.hpp"

#include "gatelens/text.hpp"

#include <charconv>
#include <cmath>
#include <optional>

namespace gatelens {

ParseError::ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected, std::string found,
                       const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)),
      detail_(message) {}

namespace {

constexpr int max_depth = 200;

enum class Tok : std::uint8_t { Ident, Keyword, Number, String, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text; // keyword/punct/ident spelling, decoded string, number digits
    std::string raw;  // as written, for error messages
    bool integral = false;
    bool signed_ = false;
    std::size_t line = 1;
    std::size_t column = 1;
};

auto describe(const Token& t) -> std::string {
    switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return "string " + t.raw;
    default: return "'" + t.raw + "'";
    }
}

auto join_expected(const std::vector<std::string>& expected) -> std::string {
    std::string out;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i > 0) {
            out += i + 1 == expected.size() ? " or " : ", ";
        }
        out += expected[i];
    }
    return out;
}

class Lexer {
public:
    explicit Lexer(std::string_view input) : in_(input) {}

    auto run() -> std::vector<Token> {
        std::vector<Token> out;
        while (true) {
            skip_space();
            if (pos_ >= in_.size()) {
                Token end;
                end.kind = Tok::End;
                end.raw = "";
                end.line = last_line_;
                end.column = last_column_;
                out.push_back(std::move(end));
                return out;
            }
            out.push_back(next());
        }
    }

private:
    std::string_view in_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
    std::size_t last_line_ = 1;
    std::size_t last_column_ = 1;

    auto peek(std::size_t ahead = 0) const -> unsigned char {
        return pos_ + ahead < in_.size() ? static_cast<unsigned char>(in_[pos_ + ahead]) : 0;
    }

    void advance() {
        auto c = static_cast<unsigned char>(in_[pos_]);
        // Continuation bytes belong to the code point already counted.
        if ((c & 0xC0) != 0x80) {
            last_line_ = line_;
            last_column_ = column_;
            if (c == '\n') {
                ++line_;
                column_ = 1;
            } else {
                ++column_;
            }
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < in_.size()) {
            auto c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                advance();
            } else {
                break;
            }
        }
    }

    [[noreturn]] void error(std::size_t line, std::size_t column, std::string found, const std::string& msg) {
        throw ParseError(line, column, {}, std::move(found), msg);
    }

    auto next() -> Token {
        Token t;
        t.line = line_;
        t.column = column_;
        auto start = pos_;
        auto c = peek();

        if (std::isalpha(c) || c == '_') {
            while (pos_ < in_.size() && (std::isalnum(peek()) || peek() == '_')) {
                advance();
            }
            t.text = std::string(in_.substr(start, pos_ - start));
            t.raw = t.text;
            t.kind = is_reserved_word(t.text) ? Tok::Keyword : Tok::Ident;
            return t;
        }

        // Greek operator aliases (UTF-8).
        static constexpr std::pair<std::string_view, std::string_view> greek[] = {
            {"\xCF\x83", "select"}, {"\xCF\x80", "project"}, {"\xCF\x81", "rename"}, {"\xCE\xB3", "groupby"}};
        for (const auto& [glyph, keyword] : greek) {
            if (in_.substr(pos_).starts_with(glyph)) {
                for (std::size_t i = 0; i < glyph.size(); ++i) {
                    advance();
                }
                t.kind = Tok::Keyword;
                t.text = std::string(keyword);
                t.raw = std::string(glyph);
                return t;
            }
        }

        if (std::isdigit(c) || ((c == '-' || c == '+') && std::isdigit(peek(1)))) {
            return number(t);
        }
        if (c == '"') {
            return string(t);
        }

        static constexpr std::string_view two_char[] = {"->", "==", "!=", "<=", ">="};
        for (auto op : two_char) {
            if (in_.substr(pos_).starts_with(op)) {
                advance();
                advance();
                t.kind = Tok::Punct;
                t.text = std::string(op);
                t.raw = t.text;
                return t;
            }
        }
        static constexpr std::string_view one_char = "[](),;*<>";
        if (one_char.find(static_cast<char>(c)) != std::string_view::npos) {
            advance();
            t.kind = Tok::Punct;
            t.text = std::string(1, static_cast<char>(c));
            t.raw = t.text;
            return t;
        }

        // Report the whole offending code point.
        std::size_t len = 1;
        if (c >= 0xC0) {
            len = c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : 2;
        }
        len = std::min(len, in_.size() - pos_);
        error(t.line, t.column, std::string(in_.substr(pos_, len)),
              "unexpected character '" + std::string(in_.substr(pos_, len)) + "'");
    }

    auto number(Token& t) -> Token {
        auto start = pos_;
        if (peek() == '-' || peek() == '+') {
            t.signed_ = true;
            advance();
        }
        while (std::isdigit(peek())) {
            advance();
        }
        t.integral = true;
        if (peek() == '.') {
            if (!std::isdigit(peek(1))) {
                advance();
                error(t.line, t.column, std::string(in_.substr(start, pos_ - start)),
                      "malformed number: digits must follow '.'");
            }
            t.integral = false;
            advance();
            while (std::isdigit(peek())) {
                advance();
            }
        }
        t.kind = Tok::Number;
        t.raw = std::string(in_.substr(start, pos_ - start));
        t.text = t.raw;
        return t;
    }

    auto string(Token& t) -> Token {
        auto start = pos_;
        advance();
        std::string value;
        while (true) {
            if (pos_ >= in_.size()) {
                error(t.line, t.column, std::string(in_.substr(start)), "unterminated string literal");
            }
            auto c = peek();
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\\') {
                auto line = line_;
                auto column = column_;
                advance();
                auto e = peek();
                if (pos_ >= in_.size() || (e != '"' && e != '\\')) {
                    error(line, column, "\\", "invalid escape in string literal (only \\\" and \\\\ are allowed)");
                }
                value += static_cast<char>(e);
                advance();
                continue;
            }
            value += static_cast<char>(c);
            advance();
        }
        t.kind = Tok::String;
        t.text = std::move(value);
        t.raw = std::string(in_.substr(start, pos_ - start));
        return t;
    }
};

// Reports the first unbalanced bracket so that errors like `select[(t)` point
// at the bracket that was never closed.
void check_brackets(const std::vector<Token>& tokens) {
    std::vector<const Token*> stack;
    for (const auto& t : tokens) {
        if (t.kind != Tok::Punct) {
            continue;
        }
        if (t.text == "(" || t.text == "[") {
            stack.push_back(&t);
        } else if (t.text == ")" || t.text == "]") {
            std::string opener = t.text == ")" ? "(" : "[";
            if (stack.empty()) {
                throw ParseError(t.line, t.column, {}, t.raw, "unmatched '" + t.text + "'");
            }
            if (stack.back()->text != opener) {
                std::string closer = stack.back()->text == "(" ? ")" : "]";
                throw ParseError(t.line, t.column, {"'" + closer + "'"}, t.raw,
                                 "expected '" + closer + "' to close '" + stack.back()->text + "' at " +
                                     std::to_string(stack.back()->line) + ":" +
                                     std::to_string(stack.back()->column) + ", found '" + t.text + "'");
            }
            stack.pop_back();
        }
    }
    if (!stack.empty()) {
        const auto& open = *stack.back();
        std::string closer = open.text == "(" ? ")" : "]";
        throw ParseError(open.line, open.column, {"'" + closer + "'"}, "end of input",
                         "unclosed '" + open.text + "'");
    }
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    auto expression() -> Expr {
        auto e = expr();
        expect_end();
        return e;
    }

    auto predicate_only() -> Predicate {
        auto p = pred();
        expect_end();
        return p;
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int depth_ = 0;

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& parser) : p(parser) {
            if (++p.depth_ > max_depth) {
                const auto& t = p.peek();
                throw ParseError(t.line, t.column, {}, describe(t), "expression nested too deeply");
            }
        }
        ~DepthGuard() { --p.depth_; }
        DepthGuard(const DepthGuard&) = delete;
        DepthGuard& operator=(const DepthGuard&) = delete;
    };

    auto peek(std::size_t ahead = 0) const -> const Token& {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }

    auto take() -> Token {
        auto t = peek();
        if (pos_ + 1 < tokens_.size()) {
            ++pos_;
        }
        return t;
    }

    bool is(Tok kind, std::string_view text = {}) const {
        const auto& t = peek();
        return t.kind == kind && (text.empty() || t.text == text);
    }

    bool is_punct(std::string_view p) const { return is(Tok::Punct, p); }
    bool is_keyword(std::string_view k) const { return is(Tok::Keyword, k); }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        const auto& t = peek();
        auto msg = "expected " + join_expected(expected) + ", found " + describe(t);
        throw ParseError(t.line, t.column, std::move(expected), describe(t), msg);
    }

    void expect_punct(std::string_view p) {
        if (!is_punct(p)) {
            fail({"'" + std::string(p) + "'"});
        }
        take();
    }

    void expect_keyword(std::string_view k) {
        if (!is_keyword(k)) {
            fail({"'" + std::string(k) + "'"});
        }
        take();
    }

    void expect_end() {
        if (!is(Tok::End)) {
            fail({"end of input"});
        }
    }

    auto ident(const char* what) -> std::string {
        if (!is(Tok::Ident)) {
            if (is(Tok::Keyword)) {
                const auto& t = peek();
                throw ParseError(t.line, t.column, {what}, describe(t),
                                 "expected " + std::string(what) + ", found reserved word '" + t.raw + "'");
            }
            fail({what});
        }
        return take().text;
    }

    auto expr() -> Expr {
        DepthGuard guard(*this);
        const auto& t = peek();
        if (t.kind == Tok::Ident) {
            return ra::scan(take().text);
        }
        if (t.kind != Tok::Keyword) {
            fail({"table name", "operator keyword"});
        }
        const auto kw = t.text;
        if (kw == "select") {
            take();
            expect_punct("[");
            auto p = pred();
            expect_punct("]");
            return ra::select(std::move(p), paren_child());
        }
        if (kw == "project") {
            take();
            expect_punct("[");
            auto cols = column_list();
            expect_punct("]");
            return ra::project(std::move(cols), paren_child());
        }
        if (kw == "rename") {
            take();
            expect_punct("[");
            std::vector<RenamePair> pairs;
            do {
                auto from = ident("column name");
                expect_punct("->");
                auto to = ident("new column name");
                pairs.push_back({std::move(from), std::move(to)});
            } while (accept_punct(","));
            expect_punct("]");
            return ra::rename(std::move(pairs), paren_child());
        }
        if (kw == "distinct") {
            take();
            return ra::distinct(paren_child());
        }
        if (kw == "sort") {
            take();
            expect_punct("[");
            std::vector<SortKey> keys;
            do {
                SortKey key;
                key.column = ident("column name");
                if (is_keyword("desc")) {
                    take();
                    key.descending = true;
                } else if (is_keyword("asc")) {
                    take();
                }
                keys.push_back(std::move(key));
            } while (accept_punct(","));
            expect_punct("]");
            return ra::sort(std::move(keys), paren_child());
        }
        if (kw == "limit") {
            take();
            expect_punct("[");
            const auto& n = peek();
            if (n.kind != Tok::Number || !n.integral || n.signed_) {
                fail({"non-negative integer"});
            }
            std::int64_t count = 0;
            auto [ptr, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), count);
            if (ec != std::errc{}) {
                throw ParseError(n.line, n.column, {"non-negative integer"}, describe(n), "limit out of range");
            }
            take();
            expect_punct("]");
            return ra::limit(count, paren_child());
        }
        if (kw == "groupby") {
            take();
            expect_punct("[");
            std::vector<std::string> keys;
            if (!is_punct(";")) {
                keys = column_list();
            }
            expect_punct(";");
            std::vector<Aggregate> aggs;
            do {
                aggs.push_back(aggregate());
            } while (accept_punct(","));
            expect_punct("]");
            return ra::groupby(std::move(keys), std::move(aggs), paren_child());
        }
        if (kw == "union" || kw == "minus" || kw == "intersect" || kw == "times" || kw == "divide") {
            take();
            auto [l, r] = paren_pair();
            if (kw == "union") {
                return ra::union_(std::move(l), std::move(r));
            }
            if (kw == "minus") {
                return ra::minus(std::move(l), std::move(r));
            }
            if (kw == "intersect") {
                return ra::intersect(std::move(l), std::move(r));
            }
            if (kw == "times") {
                return ra::times(std::move(l), std::move(r));
            }
            return ra::divide(std::move(l), std::move(r));
        }
        if (kw == "join") {
            take();
            expect_punct("[");
            auto p = pred();
            expect_punct("]");
            auto [l, r] = paren_pair();
            return ra::join(std::move(p), std::move(l), std::move(r));
        }
        fail({"table name", "operator keyword"});
    }

    bool accept_punct(std::string_view p) {
        if (is_punct(p)) {
            take();
            return true;
        }
        return false;
    }

    auto paren_child() -> Expr {
        expect_punct("(");
        auto e = expr();
        expect_punct(")");
        return e;
    }

    auto paren_pair() -> std::pair<Expr, Expr> {
        expect_punct("(");
        auto l = expr();
        expect_punct(",");
        auto r = expr();
        expect_punct(")");
        return {std::move(l), std::move(r)};
    }

    auto column_list() -> std::vector<std::string> {
        std::vector<std::string> cols;
        do {
            cols.push_back(ident("column name"));
        } while (accept_punct(","));
        return cols;
    }

    auto aggregate() -> Aggregate {
        Aggregate agg;
        const auto& t = peek();
        if (t.kind != Tok::Keyword ||
            (t.text != "count" && t.text != "sum" && t.text != "avg" && t.text != "min" && t.text != "max")) {
            fail({"'count'", "'sum'", "'avg'", "'min'", "'max'"});
        }
        auto fn = take().text;
        expect_punct("(");
        if (fn == "count") {
            if (accept_punct("*")) {
                agg.fn = AggFn::CountStar;
            } else {
                agg.fn = AggFn::Count;
                agg.input = ident("column name or '*'");
            }
        } else {
            agg.fn = fn == "sum" ? AggFn::Sum : fn == "avg" ? AggFn::Avg : fn == "min" ? AggFn::Min : AggFn::Max;
            agg.input = ident("column name");
        }
        expect_punct(")");
        expect_keyword("as");
        agg.output = ident("output name");
        return agg;
    }

    // pred := and-chain ("or" and-chain)*
    auto pred() -> Predicate {
        DepthGuard guard(*this);
        auto lhs = and_chain();
        while (is_keyword("or")) {
            take();
            lhs = ra::or_(std::move(lhs), and_chain());
        }
        return lhs;
    }

    auto and_chain() -> Predicate {
        auto lhs = unary_pred();
        while (is_keyword("and")) {
            take();
            lhs = ra::and_(std::move(lhs), unary_pred());
        }
        return lhs;
    }

    auto unary_pred() -> Predicate {
        DepthGuard guard(*this);
        if (is_keyword("not")) {
            take();
            return ra::not_(unary_pred());
        }
        if (is_punct("(")) {
            take();
            auto p = pred();
            expect_punct(")");
            return p;
        }
        return comparison();
    }

    auto comparison() -> Predicate {
        if (is_keyword("contains")) {
            take();
            expect_punct("(");
            auto subject = term();
            expect_punct(",");
            if (!is(Tok::String)) {
                fail({"string literal"});
            }
            auto needle = take().text;
            expect_punct(")");
            return ra::contains(std::move(subject), std::move(needle));
        }
        if (is(Tok::Ident) && peek(1).kind == Tok::Keyword && peek(1).text == "in") {
            auto column = take().text;
            take();
            expect_punct("[");
            std::vector<Value> values;
            do {
                values.push_back(literal());
            } while (accept_punct(","));
            expect_punct("]");
            return ra::in(std::move(column), std::move(values));
        }
        bool lhs_is_ident = is(Tok::Ident);
        auto lhs = term();
        static constexpr std::pair<std::string_view, CompareOp> ops[] = {
            {"==", CompareOp::Eq}, {"!=", CompareOp::Ne}, {"<", CompareOp::Lt},
            {"<=", CompareOp::Le}, {">", CompareOp::Gt},  {">=", CompareOp::Ge}};
        for (const auto& [text, op] : ops) {
            if (is_punct(text)) {
                take();
                return ra::cmp(op, std::move(lhs), term());
            }
        }
        std::vector<std::string> expected = {"'=='", "'!='", "'<'", "'<='", "'>'", "'>='"};
        if (lhs_is_ident) {
            expected.push_back("'in'");
        }
        fail(std::move(expected));
    }

    auto term() -> Term {
        DepthGuard guard(*this);
        if (is(Tok::Ident)) {
            return ra::col(take().text);
        }
        if (is_keyword("lower")) {
            take();
            expect_punct("(");
            auto inner = term();
            expect_punct(")");
            return ra::lower(std::move(inner));
        }
        if (is(Tok::String) || is(Tok::Number) || is_keyword("true") || is_keyword("false") || is_keyword("null")) {
            return ra::lit(literal());
        }
        fail({"column name", "literal", "'lower'"});
    }

    auto literal() -> Value {
        const auto& t = peek();
        if (t.kind == Tok::String) {
            return Value{take().text};
        }
        if (t.kind == Tok::Keyword && (t.text == "true" || t.text == "false")) {
            return Value{take().text == "true"};
        }
        if (t.kind == Tok::Keyword && t.text == "null") {
            take();
            return Value{};
        }
        if (t.kind == Tok::Number) {
            auto digits = std::string_view(t.text);
            if (digits.front() == '+') {
                digits.remove_prefix(1);
            }
            if (t.integral) {
                std::int64_t v = 0;
                auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
                if (ec != std::errc{}) {
                    throw ParseError(t.line, t.column, {"literal"}, describe(t), "integer literal out of range");
                }
                take();
                return Value{v};
            }
            double v = 0;
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
            if (ec != std::errc{} || !std::isfinite(v)) {
                throw ParseError(t.line, t.column, {"literal"}, describe(t), "number literal out of range");
            }
            take();
            return Value{v};
        }
        fail({"literal"});
    }
};

auto tokenize(std::string_view input) -> std::vector<Token> {
    auto tokens = Lexer(input).run();
    check_brackets(tokens);
    return tokens;
}

} // namespace

auto parse(std::string_view input) -> Expr { return Parser(tokenize(input)).expression(); }

auto parse_predicate(std::string_view input) -> Predicate { return Parser(tokenize(input)).predicate_only(); }

} // namespace gatelens
