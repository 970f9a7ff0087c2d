#include "haarfree/exprparse/parser.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <system_error>

namespace haarfree::parse {

namespace {

constexpr std::size_t kMaxDepth = 200;
constexpr std::size_t kMaxTerms = 1000000;

enum class Tok { Number, Imag, Letter, Plus, Minus, Star, Caret, Quote, LParen, RParen, End };

struct Token {
    Token(Tok k, std::size_t c) : kind(k), column(c) {}

    Tok kind;
    std::size_t column;
    double number = 0;      // Number / Imag
    char letter = 0;        // Letter: 'U' or 'Z'
    long long index = 0;    // Letter
    std::string_view text;  // Number spelled as written, for integer checks
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            const std::size_t col = pos_ + 1;
            if (pos_ >= s_.size()) {
                out.push_back({Tok::End, col});
                return out;
            }
            const char c = s_[pos_];
            switch (c) {
                case '+': out.push_back({Tok::Plus, col}); ++pos_; continue;
                case '-': out.push_back({Tok::Minus, col}); ++pos_; continue;
                case '*': out.push_back({Tok::Star, col}); ++pos_; continue;
                case '^': out.push_back({Tok::Caret, col}); ++pos_; continue;
                case '\'': out.push_back({Tok::Quote, col}); ++pos_; continue;
                case '(': out.push_back({Tok::LParen, col}); ++pos_; continue;
                case ')': out.push_back({Tok::RParen, col}); ++pos_; continue;
                default: break;
            }
            if (c == 'U' || c == 'Z') {
                ++pos_;
                const std::size_t start = pos_;
                while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
                if (start == pos_) throw ParseError(std::string("expected index after '") + c + "'", pos_ + 1);
                long long idx = 0;
                auto r = std::from_chars(s_.data() + start, s_.data() + pos_, idx);
                if (r.ec != std::errc{}) throw ParseError("letter index out of range", start + 1);
                Token t{Tok::Letter, col};
                t.letter = c;
                t.index = idx;
                out.push_back(t);
                continue;
            }
            if (c == 'i') {
                ++pos_;
                Token t{Tok::Imag, col};
                t.number = 1;
                out.push_back(t);
                continue;
            }
            if (is_digit(c) || c == '.') {
                out.push_back(number(col));
                continue;
            }
            throw ParseError(std::string("unexpected character '") + printable(c) + "'", col);
        }
    }

private:
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static std::string printable(char c) {
        const auto u = static_cast<unsigned char>(c);
        if (u >= 0x20 && u < 0x7f) return std::string(1, c);
        static const char* hex = "0123456789abcdef";
        return std::string("\\x") + hex[u >> 4] + hex[u & 15];
    }

    void skip_space() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r'))
            ++pos_;
    }

    Token number(std::size_t col) {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
        }
        if (pos_ - start == 1 && s_[start] == '.') throw ParseError("malformed number", col);
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t q = pos_ + 1;
            if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
            if (q >= s_.size() || !is_digit(s_[q])) throw ParseError("malformed exponent in number", q + 1);
            while (q < s_.size() && is_digit(s_[q])) ++q;
            pos_ = q;
        }
        Token t{Tok::Number, col};
        t.text = s_.substr(start, pos_ - start);
        auto r = std::from_chars(s_.data() + start, s_.data() + pos_, t.number);
        if (r.ec != std::errc{} || !std::isfinite(t.number)) throw ParseError("number out of range", col);
        if (pos_ < s_.size() && s_[pos_] == 'i') {
            ++pos_;
            t.kind = Tok::Imag;
        }
        return t;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

using Node = std::unique_ptr<PolyExpr>;

Node make(PolyExpr::Kind k, std::size_t col) {
    auto n = std::make_unique<PolyExpr>();
    n->kind = k;
    n->column = col;
    return n;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

    Node run() {
        Node e = expr();
        if (peek().kind != Tok::End) throw ParseError("unexpected token", peek().column);
        return e;
    }

private:
    const Token& peek() const { return t_[k_]; }
    const Token& next() { return t_[k_++]; }

    struct DepthGuard {
        std::size_t& d;
        DepthGuard(std::size_t& depth, std::size_t col) : d(depth) {
            if (++d > kMaxDepth) throw ParseError("expression nested too deeply", col);
        }
        ~DepthGuard() { --d; }
    };

    // expr := term (('+'|'-') term)*
    Node expr() {
        DepthGuard g(depth_, peek().column);
        Node first = term();
        if (peek().kind != Tok::Plus && peek().kind != Tok::Minus) return first;
        Node sum = make(PolyExpr::Kind::Sum, first->column);
        sum->children.push_back(std::move(first));
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            sum->ops.push_back(next().kind == Tok::Plus ? '+' : '-');
            sum->children.push_back(term());
        }
        return sum;
    }

    // term := factor ('*' factor)*
    Node term() {
        Node first = factor();
        if (peek().kind != Tok::Star) return first;
        Node prod = make(PolyExpr::Kind::Product, first->column);
        prod->children.push_back(std::move(first));
        while (peek().kind == Tok::Star) {
            next();
            prod->children.push_back(factor());
        }
        return prod;
    }

    // factor := '-' factor | scalar | atom
    Node factor() {
        DepthGuard g(depth_, peek().column);
        const Token& tk = peek();
        switch (tk.kind) {
            case Tok::Minus: {
                next();
                Node n = make(PolyExpr::Kind::Negation, tk.column);
                n->children.push_back(factor());
                return n;
            }
            case Tok::Number:
            case Tok::Imag: {
                next();
                Node n = make(PolyExpr::Kind::Scalar, tk.column);
                n->value = tk.kind == Tok::Number ? std::complex<double>(tk.number, 0)
                                                  : std::complex<double>(0, tk.number);
                return n;
            }
            case Tok::Letter:
            case Tok::LParen: return atom();
            case Tok::End: throw ParseError("unexpected end of input", tk.column);
            default: throw ParseError("expected a scalar, letter or '('", tk.column);
        }
    }

    // atom := ('U'int | 'Z'int | '(' expr ')') postfix*
    Node atom() {
        const Token& tk = next();
        Node base;
        if (tk.kind == Tok::Letter) {
            base = make(PolyExpr::Kind::Letter, tk.column);
            base->deterministic = tk.letter == 'Z';
            if (tk.index < 1 || tk.index > 1000000) throw ParseError("letter index must be positive", tk.column);
            base->index = static_cast<int>(tk.index);
        } else {
            base = make(PolyExpr::Kind::Parenthesized, tk.column);
            base->children.push_back(expr());
            if (peek().kind != Tok::RParen) throw ParseError("expected ')'", peek().column);
            next();
        }
        // postfix operators apply left to right: U1^2' = (U1^2)'
        while (peek().kind == Tok::Quote || peek().kind == Tok::Caret) {
            const Token& op = next();
            if (op.kind == Tok::Quote) {
                Node n = make(PolyExpr::Kind::Adjoint, op.column);
                n->children.push_back(std::move(base));
                base = std::move(n);
                continue;
            }
            const Token& ex = peek();
            if (ex.kind == Tok::Minus) throw ParseError("exponent must be a positive integer", ex.column);
            if (ex.kind != Tok::Number) throw ParseError("expected integer exponent", ex.column);
            next();
            long long e = 0;
            auto r = std::from_chars(ex.text.data(), ex.text.data() + ex.text.size(), e);
            if (r.ec != std::errc{} || r.ptr != ex.text.data() + ex.text.size())
                throw ParseError("exponent must be a positive integer", ex.column);
            if (e <= 0) throw ParseError("exponent must be a positive integer", ex.column);
            if (e > 10000) throw ParseError("exponent too large", ex.column);
            Node n = make(PolyExpr::Kind::Power, op.column);
            n->index = static_cast<int>(e);
            n->children.push_back(std::move(base));
            base = std::move(n);
        }
        return base;
    }

    std::vector<Token> t_;
    std::size_t k_ = 0;
    std::size_t depth_ = 0;
};

void check_size(const poly::Polynomial& P, std::size_t col) {
    if (P.size() > kMaxTerms) throw ParseError("expansion exceeds the term limit", col);
}

std::string fmt_double(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

}  // namespace

std::unique_ptr<PolyExpr> parse_ast(std::string_view text) {
    Lexer lx(text);
    auto toks = lx.run();
    if (toks.size() == 1) throw ParseError("empty expression", 1);
    return Parser(std::move(toks)).run();
}

poly::Polynomial lower(const PolyExpr& e, int p, int q) {
    const poly::Alphabet a(p + q, p);
    using K = PolyExpr::Kind;
    switch (e.kind) {
        case K::Scalar: return poly::Polynomial::constant(a, e.value);
        case K::Letter: {
            if (e.deterministic) {
                if (e.index > q) throw ParseError("unknown letter Z" + std::to_string(e.index), e.column);
                return poly::Polynomial::letter(a, p + e.index);
            }
            if (e.index > p) throw ParseError("unknown letter U" + std::to_string(e.index), e.column);
            return poly::Polynomial::letter(a, e.index);
        }
        case K::Adjoint: return lower(*e.children[0], p, q).adjoint();
        case K::Power: {
            const poly::Polynomial base = lower(*e.children[0], p, q);
            poly::Polynomial out = poly::Polynomial::one(a);
            for (int k = 0; k < e.index; ++k) {
                out = out * base;
                check_size(out, e.column);
            }
            return out;
        }
        case K::Product: {
            poly::Polynomial out = lower(*e.children[0], p, q);
            for (std::size_t k = 1; k < e.children.size(); ++k) {
                out = out * lower(*e.children[k], p, q);
                check_size(out, e.children[k]->column);
            }
            return out;
        }
        case K::Sum: {
            poly::Polynomial out = lower(*e.children[0], p, q);
            for (std::size_t k = 1; k < e.children.size(); ++k) {
                if (e.ops[k - 1] == '+')
                    out += lower(*e.children[k], p, q);
                else
                    out -= lower(*e.children[k], p, q);
            }
            return out;
        }
        case K::Negation: return -lower(*e.children[0], p, q);
        case K::Parenthesized: return lower(*e.children[0], p, q);
    }
    throw ParseError("unknown node", e.column);
}

poly::Polynomial parse(std::string_view text, int p, int q) {
    if (p < 0 || q < 0) throw std::invalid_argument("parse: p and q must be nonnegative");
    return lower(*parse_ast(text), p, q);
}

std::string format_coefficient(std::complex<double> c) {
    const double re = c.real(), im = c.imag();
    auto imag_part = [](double v) { return v == 1 ? std::string("i") : fmt_double(v) + "i"; };
    if (im == 0) return fmt_double(re);
    if (re == 0) return im == -1 ? std::string("-i") : imag_part(im);
    std::string s = "(" + fmt_double(re);
    if (std::signbit(im))
        s += "-" + imag_part(-im);
    else
        s += "+" + imag_part(im);
    return s + ")";
}

std::string format(const poly::Polynomial& P) {
    if (P.is_zero()) return "0";
    const int p = P.alphabet().p;
    std::string out;
    bool first = true;
    for (const auto& [m, c] : P.terms()) {
        std::string word;
        for (std::size_t k = 0; k < m.degree(); ++k) {
            if (k) word += '*';
            const auto& l = m[k];
            word += l.is_unitary() ? "U" + std::to_string(l.index) : "Z" + std::to_string(l.index - p);
            if (l.starred) word += '\'';
        }
        std::string term;
        bool negative = false;
        if (m.empty()) {
            term = format_coefficient(c);
        } else if (c == std::complex<double>(1, 0)) {
            term = word;
        } else if (c == std::complex<double>(-1, 0)) {
            term = "-" + word;
        } else {
            term = format_coefficient(c) + "*" + word;
        }
        if (!term.empty() && term[0] == '-') {
            negative = true;
            term.erase(0, 1);
        }
        if (first)
            out = negative ? "-" + term : term;
        else
            out += negative ? " - " + term : " + " + term;
        first = false;
    }
    return out;
}

}  // namespace haarfree::parse
