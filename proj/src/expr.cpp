#include "rfde/expr.hpp"

#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <vector>

namespace rfde {

namespace {

enum class Builtin { Exp, Ln, Sin, Cos, Sqrt, Abs };

struct BuiltinName {
    std::string_view name;
    Builtin fn;
};
constexpr std::array<BuiltinName, 6> kBuiltins{{
    {"exp", Builtin::Exp},
    {"ln", Builtin::Ln},
    {"sin", Builtin::Sin},
    {"cos", Builtin::Cos},
    {"sqrt", Builtin::Sqrt},
    {"abs", Builtin::Abs},
}};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

struct Expression::Node {
    enum class Kind { Number, VarT, VarTheta, Neg, Add, Sub, Mul, Div, Pow, Call };
    Kind kind;
    double number = 0;
    Builtin fn = Builtin::Exp;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr leaf(Node::Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
}

NodePtr number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->number = v;
    return n;
}

NodePtr binary(Node::Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

NodePtr unary(Node::Kind k, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    return n;
}

NodePtr call(Builtin fn, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Call;
    n->fn = fn;
    n->lhs = std::move(a);
    return n;
}

// ---------------------------------------------------------------- tokenizer

struct Token {
    enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Kind kind;
    double number = 0;
    std::string_view text;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& current() const { return tok_; }

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        tok_.pos = pos_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::Kind::End;
            return;
        }
        char c = src_[pos_];
        switch (c) {
            case '+': tok_.kind = Token::Kind::Plus; ++pos_; return;
            case '-': tok_.kind = Token::Kind::Minus; ++pos_; return;
            case '*': tok_.kind = Token::Kind::Star; ++pos_; return;
            case '/': tok_.kind = Token::Kind::Slash; ++pos_; return;
            case '^': tok_.kind = Token::Kind::Caret; ++pos_; return;
            case '(': tok_.kind = Token::Kind::LParen; ++pos_; return;
            case ')': tok_.kind = Token::Kind::RParen; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            tok_.kind = Token::Kind::Ident;
            tok_.text = src_.substr(start, pos_ - start);
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

private:
    void lex_number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
                ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark; // the 'e' belongs to something else; not ours
            }
        }
        std::string_view text = src_.substr(start, pos_ - start);
        double value = 0;
        auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || end != text.data() + text.size())
            throw ParseError("malformed number '" + std::string(text) + "'", start);
        tok_.kind = Token::Kind::Number;
        tok_.number = value;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token tok_;
};

// ------------------------------------------------------------------- parser

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    NodePtr parse() {
        NodePtr e = additive();
        if (lex_.current().kind != Token::Kind::End)
            throw ParseError("unexpected trailing input", lex_.current().pos);
        return e;
    }

private:
    NodePtr additive() {
        NodePtr lhs = multiplicative();
        for (;;) {
            auto k = lex_.current().kind;
            if (k == Token::Kind::Plus) {
                lex_.advance();
                lhs = binary(Node::Kind::Add, std::move(lhs), multiplicative());
            } else if (k == Token::Kind::Minus) {
                lex_.advance();
                lhs = binary(Node::Kind::Sub, std::move(lhs), multiplicative());
            } else {
                return lhs;
            }
        }
    }

    NodePtr multiplicative() {
        NodePtr lhs = prefixed();
        for (;;) {
            auto k = lex_.current().kind;
            if (k == Token::Kind::Star) {
                lex_.advance();
                lhs = binary(Node::Kind::Mul, std::move(lhs), prefixed());
            } else if (k == Token::Kind::Slash) {
                lex_.advance();
                lhs = binary(Node::Kind::Div, std::move(lhs), prefixed());
            } else {
                return lhs;
            }
        }
    }

    // Unary minus; binds looser than ^ so -2^2 == -(2^2).
    NodePtr prefixed() {
        if (lex_.current().kind == Token::Kind::Minus) {
            lex_.advance();
            return unary(Node::Kind::Neg, prefixed());
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (lex_.current().kind == Token::Kind::Caret) {
            lex_.advance();
            // exponent may carry its own sign: 2^-3; right-associative
            return binary(Node::Kind::Pow, std::move(base), prefixed());
        }
        return base;
    }

    NodePtr primary() {
        const Token& tok = lex_.current();
        switch (tok.kind) {
            case Token::Kind::Number: {
                double v = tok.number;
                lex_.advance();
                return number(v);
            }
            case Token::Kind::LParen: {
                lex_.advance();
                NodePtr e = additive();
                expect(Token::Kind::RParen, "expected ')'");
                return e;
            }
            case Token::Kind::Ident: {
                std::string_view name = tok.text;
                std::size_t pos = tok.pos;
                lex_.advance();
                if (name == "t")
                    return leaf(Node::Kind::VarT);
                if (name == "theta")
                    return leaf(Node::Kind::VarTheta);
                for (const auto& b : kBuiltins) {
                    if (name == b.name) {
                        expect(Token::Kind::LParen, "expected '(' after function name");
                        NodePtr arg = additive();
                        expect(Token::Kind::RParen, "expected ')'");
                        return call(b.fn, std::move(arg));
                    }
                }
                throw ParseError("unknown identifier '" + std::string(name) + "'", pos);
            }
            default:
                throw ParseError("expected a number, variable, function call or '('",
                                 tok.pos);
        }
    }

    void expect(Token::Kind k, const char* msg) {
        if (lex_.current().kind != k)
            throw ParseError(msg, lex_.current().pos);
        lex_.advance();
    }

    Lexer lex_;
};

// ---------------------------------------------------------------- evaluator

struct Bindings {
    double t = 0;
    bool has_theta = false;
    double theta = 0;
};

double eval_node(const Node& n, const Bindings& b) {
    switch (n.kind) {
        case Node::Kind::Number:
            return n.number;
        case Node::Kind::VarT:
            return b.t;
        case Node::Kind::VarTheta:
            if (!b.has_theta)
                throw EvalError("variable 'theta' has no binding here");
            return b.theta;
        case Node::Kind::Neg:
            return -eval_node(*n.lhs, b);
        case Node::Kind::Add:
            return eval_node(*n.lhs, b) + eval_node(*n.rhs, b);
        case Node::Kind::Sub:
            return eval_node(*n.lhs, b) - eval_node(*n.rhs, b);
        case Node::Kind::Mul:
            return eval_node(*n.lhs, b) * eval_node(*n.rhs, b);
        case Node::Kind::Div: {
            double num = eval_node(*n.lhs, b);
            double den = eval_node(*n.rhs, b);
            if (den == 0.0)
                throw EvalError("division by zero");
            return num / den;
        }
        case Node::Kind::Pow: {
            double base = eval_node(*n.lhs, b);
            double expo = eval_node(*n.rhs, b);
            if (base < 0.0 && std::nearbyint(expo) != expo)
                throw EvalError("fractional power of a negative base");
            if (base == 0.0 && expo < 0.0)
                throw EvalError("zero raised to a negative power");
            return std::pow(base, expo);
        }
        case Node::Kind::Call: {
            double a = eval_node(*n.lhs, b);
            switch (n.fn) {
                case Builtin::Exp: return std::exp(a);
                case Builtin::Ln:
                    if (a <= 0.0)
                        throw EvalError("ln of a nonpositive number (" + format_double(a) + ")");
                    return std::log(a);
                case Builtin::Sin: return std::sin(a);
                case Builtin::Cos: return std::cos(a);
                case Builtin::Sqrt:
                    if (a < 0.0)
                        throw EvalError("sqrt of a negative number (" + format_double(a) + ")");
                    return std::sqrt(a);
                case Builtin::Abs: return std::fabs(a);
            }
            throw EvalError("unreachable builtin");
        }
    }
    throw EvalError("unreachable node kind");
}

void scan_vars(const Node& n, bool& has_t, bool& has_theta) {
    switch (n.kind) {
        case Node::Kind::VarT: has_t = true; return;
        case Node::Kind::VarTheta: has_theta = true; return;
        default: break;
    }
    if (n.lhs) scan_vars(*n.lhs, has_t, has_theta);
    if (n.rhs) scan_vars(*n.rhs, has_t, has_theta);
}

// ------------------------------------------------------------------ printer

// Precedence levels for minimal parenthesization.
int print_level(const Node& n) {
    switch (n.kind) {
        case Node::Kind::Add:
        case Node::Kind::Sub: return 1;
        case Node::Kind::Mul:
        case Node::Kind::Div: return 2;
        case Node::Kind::Neg: return 3;
        case Node::Kind::Pow: return 4;
        case Node::Kind::Number:
            // a negative literal prints with a leading '-', so treat it
            // like a unary minus for parenthesization (-2)^2 vs -2^2
            return std::signbit(n.number) ? 3 : 5;
        default: return 5;
    }
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int parent_level, bool needs_parens_at_equal,
                 std::string& out) {
    int lvl = print_level(child);
    bool parens = lvl < parent_level || (lvl == parent_level && needs_parens_at_equal);
    if (parens) out += '(';
    print_node(child, out);
    if (parens) out += ')';
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case Node::Kind::Number: out += format_double(n.number); return;
        case Node::Kind::VarT: out += 't'; return;
        case Node::Kind::VarTheta: out += "theta"; return;
        case Node::Kind::Neg:
            out += '-';
            print_child(*n.lhs, 3, false, out);
            return;
        case Node::Kind::Add:
            print_child(*n.lhs, 1, false, out);
            out += " + ";
            print_child(*n.rhs, 1, true, out);
            return;
        case Node::Kind::Sub:
            print_child(*n.lhs, 1, false, out);
            out += " - ";
            print_child(*n.rhs, 1, true, out);
            return;
        case Node::Kind::Mul:
            print_child(*n.lhs, 2, false, out);
            out += "*";
            print_child(*n.rhs, 2, true, out);
            return;
        case Node::Kind::Div:
            print_child(*n.lhs, 2, false, out);
            out += "/";
            print_child(*n.rhs, 2, true, out);
            return;
        case Node::Kind::Pow:
            print_child(*n.lhs, 4, true, out);
            out += "^";
            print_child(*n.rhs, 4, false, out);
            return;
        case Node::Kind::Call: {
            for (const auto& b : kBuiltins) {
                if (b.fn == n.fn) {
                    out += b.name;
                    break;
                }
            }
            out += '(';
            print_node(*n.lhs, out);
            out += ')';
            return;
        }
    }
}

} // namespace

// --------------------------------------------------------------- Expression

Expression::Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {
    scan_vars(*root_, uses_t_, uses_theta_);
}

Expression Expression::parse(std::string_view source) {
    return Expression(Parser(source).parse());
}

double Expression::operator()(double t) const {
    Bindings b;
    b.t = t;
    double v = eval_node(*root_, b);
    if (!std::isfinite(v))
        throw EvalError("non-finite result at t=" + format_double(t));
    return v;
}

double Expression::operator()(double t, double theta) const {
    Bindings b;
    b.t = t;
    b.has_theta = true;
    b.theta = theta;
    double v = eval_node(*root_, b);
    if (!std::isfinite(v))
        throw EvalError("non-finite result at t=" + format_double(t) +
                        ", theta=" + format_double(theta));
    return v;
}

std::string Expression::str() const {
    std::string out;
    print_node(*root_, out);
    return out;
}

std::optional<double> Expression::as_constant() const {
    if (!is_constant())
        return std::nullopt;
    try {
        return (*this)(0.0);
    } catch (const EvalError&) {
        return std::nullopt;
    }
}

std::optional<Expression::ReciprocalAffine> Expression::as_reciprocal_in_t() const {
    const Node* n = root_.get();
    if (n->kind != Node::Kind::Div)
        return std::nullopt;
    Expression numer(n->lhs);
    auto k = numer.as_constant();
    if (!k)
        return std::nullopt;
    const Node* d = n->rhs.get();
    // t | t + c | c + t | t - c, with c any constant subtree
    if (d->kind == Node::Kind::VarT)
        return ReciprocalAffine{*k, 0.0};
    if (d->kind == Node::Kind::Add || d->kind == Node::Kind::Sub) {
        const Node* a = d->lhs.get();
        const Node* b = d->rhs.get();
        if (a->kind == Node::Kind::VarT) {
            auto c = Expression(d->rhs).as_constant();
            if (c)
                return ReciprocalAffine{*k, d->kind == Node::Kind::Add ? *c : -*c};
        }
        if (d->kind == Node::Kind::Add && b->kind == Node::Kind::VarT) {
            auto c = Expression(d->lhs).as_constant();
            if (c)
                return ReciprocalAffine{*k, *c};
        }
    }
    return std::nullopt;
}

} // namespace rfde
