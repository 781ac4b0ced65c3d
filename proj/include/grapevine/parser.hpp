#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "grapevine/ast.hpp"
#include "grapevine/errors.hpp"

namespace grapevine {

namespace detail {

inline std::string to_upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

struct Token {
    enum class Kind { Ident, Int, Float, String, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    std::int64_t int_value = 0;
    double float_value = 0.0;
    std::size_t line = 1;
    std::size_t column = 1;

    // Case-insensitive keyword test; identifiers stay case-sensitive.
    bool is_keyword(const std::string& kw) const {
        return kind == Kind::Ident && to_upper(text) == kw;
    }
    bool is_punct(const std::string& p) const { return kind == Kind::Punct && text == p; }
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t = next();
            bool end = t.kind == Token::Kind::End;
            out.push_back(std::move(t));
            if (end) return out;
        }
    }

private:
    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                return;
            }
        }
    }

    Token next() {
        Token t;
        t.line = line_;
        t.column = col_;
        if (pos_ >= text_.size()) return t;
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident(t);
        if (std::isdigit(static_cast<unsigned char>(c))) return number(t);
        if (c == '\'' || c == '"') return string_lit(t);
        if (c == '$') throw UnsupportedFeatureError("query parameter");
        return punct(t);
    }

    Token ident(Token t) {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            advance();
        t.kind = Token::Kind::Ident;
        t.text = std::string(text_.substr(start, pos_ - start));
        return t;
    }

    Token number(Token t) {
        std::size_t start = pos_;
        bool is_float = false;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            advance();
        // "1..3" must stay Int ".." Int
        if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
            is_float = true;
            advance();
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                advance();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_;
            advance();
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                is_float = true;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    advance();
            } else {
                pos_ = save;  // 'e' belongs to a following identifier
            }
        }
        std::string s(text_.substr(start, pos_ - start));
        if (is_float) {
            t.kind = Token::Kind::Float;
            t.float_value = std::stod(s);
        } else {
            t.kind = Token::Kind::Int;
            try {
                t.int_value = std::stoll(s);
            } catch (const std::out_of_range&) {
                throw SyntaxError(t.line, t.column, "integer literal out of range");
            }
        }
        t.text = std::move(s);
        return t;
    }

    Token string_lit(Token t) {
        char quote = text_[pos_];
        advance();
        std::string s;
        while (pos_ < text_.size() && text_[pos_] != quote) {
            char c = text_[pos_];
            if (c == '\\') {
                advance();
                if (pos_ >= text_.size())
                    throw SyntaxError(t.line, t.column, "unterminated string literal");
                char e = text_[pos_];
                switch (e) {
                    case 'n': s += '\n'; break;
                    case 't': s += '\t'; break;
                    default: s += e; break;
                }
            } else if (c == '\n') {
                throw SyntaxError(t.line, t.column, "unterminated string literal");
            } else {
                s += c;
            }
            advance();
        }
        if (pos_ >= text_.size()) throw SyntaxError(t.line, t.column, "unterminated string literal");
        advance();  // closing quote
        t.kind = Token::Kind::String;
        t.text = std::move(s);
        return t;
    }

    Token punct(Token t) {
        static const std::vector<std::string> two = {"<>", "<=", ">=", "->", "<-", ".."};
        t.kind = Token::Kind::Punct;
        if (pos_ + 1 < text_.size()) {
            std::string pair{text_[pos_], text_[pos_ + 1]};
            for (const auto& p : two) {
                if (pair == p) {
                    advance();
                    advance();
                    t.text = pair;
                    return t;
                }
            }
        }
        char c = text_[pos_];
        static const std::string singles = "()[]-<>=,.:*";
        if (singles.find(c) == std::string::npos)
            throw SyntaxError(t.line, t.column, std::string("unexpected character '") + c + "'");
        advance();
        t.text = std::string(1, c);
        return t;
    }

    void advance() {
        ++pos_;
        ++col_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

}  // namespace detail

// Recursive-descent parser for the supported openCypher fragment. Total:
// every input yields an AST, a SyntaxError, or an UnsupportedFeatureError.
class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(detail::Lexer(text).run()) {}

    QueryAst parse() {
        QueryAst q;
        check_clause_keyword(peek());
        expect_keyword("MATCH");
        q.match = parse_pattern();
        if (peek().is_punct(",")) throw UnsupportedFeatureError("multiple MATCH patterns");
        if (peek().is_keyword("MATCH")) throw UnsupportedFeatureError("multiple MATCH clauses");
        if (peek().is_keyword("WHERE")) {
            next();
            q.where_clause = parse_where(q.match);
        }
        check_clause_keyword(peek());
        expect_keyword("RETURN");
        q.return_items = parse_return(q.match);
        const auto& t = peek();
        if (t.kind != detail::Token::Kind::End) {
            check_clause_keyword(t);
            throw SyntaxError(t.line, t.column, "unexpected trailing input '" + t.text + "'");
        }
        return q;
    }

private:
    using Token = detail::Token;

    [[noreturn]] void check_unsupported_or_fail(const Token& t, const std::string& expected) {
        check_clause_keyword(t);
        throw SyntaxError(t.line, t.column,
                          "expected " + expected + ", found '" +
                              (t.kind == Token::Kind::End ? "end of input" : t.text) + "'");
    }

    // Constructs that are recognized but outside the supported fragment.
    void check_clause_keyword(const Token& t) {
        static const std::map<std::string, std::string> unsupported = {
            {"OPTIONAL", "OPTIONAL MATCH"}, {"WITH", "WITH"},
            {"SKIP", "SKIP"},               {"LIMIT", "LIMIT"},
            {"ORDER", "ORDER BY"},          {"UNWIND", "UNWIND"},
            {"UNION", "UNION"},             {"CREATE", "CREATE"},
            {"MERGE", "MERGE"},             {"DELETE", "DELETE"},
            {"DETACH", "DETACH DELETE"},    {"SET", "SET"},
            {"REMOVE", "REMOVE"},           {"CALL", "CALL"},
            {"FOREACH", "FOREACH"},
        };
        if (t.kind != Token::Kind::Ident) return;
        auto it = unsupported.find(detail::to_upper(t.text));
        if (it != unsupported.end()) throw UnsupportedFeatureError(it->second);
    }

    PatternGraph parse_pattern() {
        PatternGraph pg;
        if (peek().kind == Token::Kind::Ident && peek(1).is_punct("=")) {
            Token t = next();
            check_clause_keyword(t);
            pg.path_binding = t.text;
            bind(t, *pg.path_binding);
            path_bindings_.insert(*pg.path_binding);
            next();  // '='
        }
        pg.nodes.push_back(parse_node());
        while (peek().is_punct("-") || peek().is_punct("<-") || peek().is_punct("<")) {
            pg.edges.push_back(parse_edge());
            pg.nodes.push_back(parse_node());
        }
        if (pg.path_binding) {
            if (pg.edges.empty())
                throw UnsupportedFeatureError("path binding over an edgeless pattern");
            if (pg.edges.size() > 1)
                throw UnsupportedFeatureError("path binding over a multi-edge pattern");
        }
        return pg;
    }

    PatternNode parse_node() {
        expect_punct("(");
        PatternNode n;
        if (peek().kind == Token::Kind::Ident && !peek().is_punct(")")) {
            Token t = next();
            check_clause_keyword(t);
            n.var = t.text;
            bind(t, n.var);
        } else {
            n.var = fresh_var("n");
        }
        if (peek().is_punct(":")) {
            next();
            n.label = expect_ident("label name").text;
        }
        expect_punct(")");
        return n;
    }

    PatternEdge parse_edge() {
        if (peek().is_punct("<-") || peek().is_punct("<"))
            throw UnsupportedFeatureError("incoming edge pattern");
        expect_punct("-");
        expect_punct("[");
        PatternEdge e;
        if (peek().kind == Token::Kind::Ident) {
            Token t = next();
            check_clause_keyword(t);
            e.var = t.text;
            bind(t, *e.var);
            edge_vars_.insert(*e.var);
        }
        if (peek().is_punct(":")) {
            next();
            e.edge_type = expect_ident("edge type").text;
        }
        if (peek().is_punct("*")) {
            Token star = next();
            e.variable_length = true;
            e.min_hops = 1;
            e.max_hops = std::nullopt;
            if (peek().kind == Token::Kind::Int) {
                std::int64_t n = next().int_value;
                e.min_hops = static_cast<std::uint32_t>(n);
                e.max_hops = e.min_hops;  // '*n' means exactly n
                if (peek().is_punct("..")) {
                    next();
                    e.max_hops = std::nullopt;
                    if (peek().kind == Token::Kind::Int)
                        e.max_hops = static_cast<std::uint32_t>(next().int_value);
                }
            } else if (peek().is_punct("..")) {
                next();
                if (peek().kind == Token::Kind::Int)
                    e.max_hops = static_cast<std::uint32_t>(next().int_value);
            }
            if (e.min_hops < 1)
                throw SyntaxError(star.line, star.column,
                                  "variable-length minimum must be at least 1");
            if (e.max_hops && *e.max_hops < e.min_hops)
                throw SyntaxError(star.line, star.column,
                                  "variable-length maximum below minimum");
            if (e.var)
                throw UnsupportedFeatureError("variable binding on a variable-length edge");
        }
        expect_punct("]");
        if (peek().is_punct("-"))
            throw UnsupportedFeatureError("undirected edge pattern");
        expect_punct("->");
        return e;
    }

    BoolExpr parse_where(const PatternGraph& pg) {
        (void)pg;
        BoolExpr pred;
        for (;;) {
            if (peek().is_keyword("NOT")) throw UnsupportedFeatureError("NOT");
            Comparison cmp;
            cmp.lhs = parse_operand(pg);
            cmp.op = parse_cmp_op();
            cmp.rhs = parse_operand(pg);
            pred.conjuncts.push_back(std::move(cmp));
            if (peek().is_keyword("AND")) {
                next();
                continue;
            }
            if (peek().is_keyword("OR")) throw UnsupportedFeatureError("OR");
            if (peek().is_keyword("XOR")) throw UnsupportedFeatureError("XOR");
            return pred;
        }
    }

    CmpOp parse_cmp_op() {
        Token t = next();
        if (t.is_punct("=")) return CmpOp::Eq;
        if (t.is_punct("<>")) return CmpOp::Ne;
        if (t.is_punct("<")) return CmpOp::Lt;
        if (t.is_punct("<=")) return CmpOp::Le;
        if (t.is_punct(">")) return CmpOp::Gt;
        if (t.is_punct(">=")) return CmpOp::Ge;
        throw SyntaxError(t.line, t.column, "expected comparison operator, found '" + t.text + "'");
    }

    Operand parse_operand(const PatternGraph& pg) {
        (void)pg;
        Token t = peek();
        switch (t.kind) {
            case Token::Kind::String:
                next();
                return Value(t.text);
            case Token::Kind::Int:
                next();
                return Value(t.int_value);
            case Token::Kind::Float:
                next();
                return Value(t.float_value);
            case Token::Kind::Punct:
                if (t.text == "-") {
                    next();
                    Token n = next();
                    if (n.kind == Token::Kind::Int) return Value(-n.int_value);
                    if (n.kind == Token::Kind::Float) return Value(-n.float_value);
                    throw SyntaxError(n.line, n.column, "expected numeric literal after '-'");
                }
                if (t.text == "[") throw UnsupportedFeatureError("list literal");
                check_unsupported_or_fail(t, "operand");
            case Token::Kind::Ident: {
                if (t.is_keyword("TRUE")) {
                    next();
                    return Value(true);
                }
                if (t.is_keyword("FALSE")) {
                    next();
                    return Value(false);
                }
                next();
                check_clause_keyword(t);
                if (peek().is_punct("(")) throw_function(t);
                if (!peek().is_punct("."))
                    throw SyntaxError(t.line, t.column,
                                      "expected property access or literal operand");
                next();
                Token key = expect_ident("property name");
                require_property_var(t);
                return PropRef{t.text, key.text};
            }
            default:
                check_unsupported_or_fail(t, "operand");
        }
    }

    std::vector<ReturnItem> parse_return(const PatternGraph& pg) {
        (void)pg;
        std::vector<ReturnItem> items;
        for (;;) {
            Token t = peek();
            if (t.is_punct("[")) throw UnsupportedFeatureError("list literal");
            if (t.is_punct("*")) throw UnsupportedFeatureError("RETURN *");
            if (t.kind != Token::Kind::Ident)
                check_unsupported_or_fail(t, "return item");
            next();
            check_clause_keyword(t);
            if (peek().is_punct("(")) throw_function(t);
            ReturnItem item;
            item.var = t.text;
            if (peek().is_punct(".")) {
                next();
                item.key = expect_ident("property name").text;
                require_property_var(t);
            } else {
                require_bound(t);
            }
            item.name = item.var + (item.key ? "." + *item.key : "");
            if (peek().is_keyword("AS")) {
                next();
                item.name = expect_ident("output name").text;
            }
            items.push_back(std::move(item));
            if (peek().is_punct(",")) {
                next();
                continue;
            }
            return items;
        }
    }

    [[noreturn]] void throw_function(const Token& name) {
        static const std::set<std::string> aggregates = {"COUNT", "SUM",      "AVG",
                                                         "MIN",   "MAX",     "COLLECT"};
        std::string up = detail::to_upper(name.text);
        if (aggregates.count(up))
            throw UnsupportedFeatureError("aggregation function " + up);
        throw UnsupportedFeatureError("function call");
    }

    // Property access is restricted to node variables and single-edge variables.
    void require_property_var(const Token& var) {
        require_bound(var);
        if (path_bindings_.count(var.text))
            throw SyntaxError(var.line, var.column,
                              "property access on path variable '" + var.text + "'");
    }

    void require_bound(const Token& var) {
        if (!bound_.count(var.text))
            throw SyntaxError(var.line, var.column, "unbound variable '" + var.text + "'");
    }

    void bind(const Token& t, const std::string& name) {
        if (bound_.count(name))
            throw SyntaxError(t.line, t.column, "variable '" + name + "' already bound");
        bound_.insert(name);
    }

    std::string fresh_var(const std::string& prefix) {
        return "$" + prefix + std::to_string(++fresh_counter_);
    }

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }

    Token next() {
        Token t = peek();
        if (pos_ < tokens_.size() - 1) ++pos_;
        return t;
    }

    void expect_keyword(const std::string& kw) {
        Token t = next();
        if (!t.is_keyword(kw)) check_unsupported_or_fail(t, kw);
    }

    void expect_punct(const std::string& p) {
        Token t = next();
        if (!t.is_punct(p)) check_unsupported_or_fail(t, "'" + p + "'");
    }

    Token expect_ident(const std::string& what) {
        Token t = next();
        if (t.kind != Token::Kind::Ident) check_unsupported_or_fail(t, what);
        return t;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::set<std::string> bound_;
    std::set<std::string> edge_vars_;
    std::set<std::string> path_bindings_;
    int fresh_counter_ = 0;
};

inline QueryAst parse_query(std::string_view text) { return Parser(text).parse(); }

}  // namespace grapevine
