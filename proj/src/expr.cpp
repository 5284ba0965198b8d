#include "polyharm/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "polyharm/errors.hpp"

namespace polyharm {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

enum class Kind { Number, Pi, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

struct Expr::Node {
    Kind kind;
    double number = 0.0;
    int var = 0;
    std::string name;  // display name for variables
    int exponent = 0;
    Func func = Func::Sin;
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_node(Expr::Node n) { return std::make_shared<const Expr::Node>(std::move(n)); }

// ---------------------------------------------------------------------------
// Tokenizer + recursive descent parser. Precedence: ^  >  unary -  >  * /  >  + -.
// Binary - and / associate to the left; ^ takes a single integer literal.
// ---------------------------------------------------------------------------

enum class Tok { End, Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen };

struct Parser {
    std::string_view text;
    std::span<const std::string> vars;
    std::size_t pos = 0;

    Tok tok = Tok::End;
    std::size_t tok_at = 0;
    double tok_number = 0.0;
    std::string tok_ident;

    explicit Parser(std::string_view t, std::span<const std::string> v) : text(t), vars(v) {
        advance();
    }

    [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
        throw ParseError(msg, at);
    }

    void advance() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        tok_at = pos;
        if (pos >= text.size()) {
            tok = Tok::End;
            return;
        }
        const char c = text[pos];
        switch (c) {
            case '+': ++pos; tok = Tok::Plus; return;
            case '-': ++pos; tok = Tok::Minus; return;
            case '*': ++pos; tok = Tok::Star; return;
            case '/': ++pos; tok = Tok::Slash; return;
            case '^': ++pos; tok = Tok::Caret; return;
            case '(': ++pos; tok = Tok::LParen; return;
            case ')': ++pos; tok = Tok::RParen; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = text.data() + pos;
            char* end = nullptr;
            tok_number = std::strtod(begin, &end);
            if (end == begin) fail("invalid number", pos);
            pos += static_cast<std::size_t>(end - begin);
            tok = Tok::Number;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                ++pos;
            tok_ident = std::string(text.substr(start, pos - start));
            tok = Tok::Ident;
            return;
        }
        fail(std::string("unexpected character '") + c + "'", pos);
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (tok == Tok::Plus || tok == Tok::Minus) {
            const Kind k = (tok == Tok::Plus) ? Kind::Add : Kind::Sub;
            advance();
            NodePtr rhs = parse_term();
            lhs = make_node({.kind = k, .a = lhs, .b = rhs});
        }
        return lhs;
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        while (tok == Tok::Star || tok == Tok::Slash) {
            const Kind k = (tok == Tok::Star) ? Kind::Mul : Kind::Div;
            advance();
            NodePtr rhs = parse_unary();
            lhs = make_node({.kind = k, .a = lhs, .b = rhs});
        }
        return lhs;
    }

    NodePtr parse_unary() {
        if (tok == Tok::Minus) {
            const std::size_t at = tok_at;
            advance();
            NodePtr inner = parse_unary();
            if (inner->kind == Kind::Number)  // fold so printing round-trips
                return make_node({.kind = Kind::Number, .number = -inner->number});
            (void)at;
            return make_node({.kind = Kind::Neg, .a = inner});
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (tok != Tok::Caret) return base;
        advance();
        bool negate = false;
        if (tok == Tok::Minus || tok == Tok::Plus) {
            negate = (tok == Tok::Minus);
            advance();
        }
        if (tok != Tok::Number) fail("exponent must be a literal", tok_at);
        const double v = tok_number;
        if (v != std::floor(v) || std::abs(v) > 1e9)
            fail("exponent must be an integer literal", tok_at);
        advance();
        int e = static_cast<int>(v);
        if (negate) e = -e;
        return make_node({.kind = Kind::Pow, .exponent = e, .a = base});
    }

    NodePtr parse_primary() {
        switch (tok) {
            case Tok::Number: {
                const double v = tok_number;
                advance();
                return make_node({.kind = Kind::Number, .number = v});
            }
            case Tok::LParen: {
                advance();
                NodePtr inner = parse_expr();
                if (tok != Tok::RParen) fail("expected ')'", tok_at);
                advance();
                return inner;
            }
            case Tok::Ident: {
                const std::string name = tok_ident;
                const std::size_t at = tok_at;
                advance();
                if (name == "pi") return make_node({.kind = Kind::Pi});
                Func f{};
                bool is_func = true;
                if (name == "sin") f = Func::Sin;
                else if (name == "cos") f = Func::Cos;
                else if (name == "exp") f = Func::Exp;
                else if (name == "log") f = Func::Log;
                else if (name == "sqrt") f = Func::Sqrt;
                else is_func = false;
                if (is_func) {
                    if (tok != Tok::LParen) fail("expected '(' after function name", tok_at);
                    advance();
                    NodePtr arg = parse_expr();
                    if (tok != Tok::RParen) fail("expected ')'", tok_at);
                    advance();
                    return make_node({.kind = Kind::Call, .func = f, .a = arg});
                }
                for (std::size_t i = 0; i < vars.size(); ++i)
                    if (vars[i] == name)
                        return make_node(
                            {.kind = Kind::Var, .var = static_cast<int>(i), .name = name});
                const bool var_like =
                    (name.size() >= 2 && (name[0] == 'x' || name[0] == 'y') &&
                     std::isdigit(static_cast<unsigned char>(name[1])));
                if (var_like) fail("variable '" + name + "' not allowed in this context", at);
                fail("unknown identifier '" + name + "'", at);
            }
            default:
                fail("expected a value", tok_at);
        }
    }
};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Expr Expr::parse(std::string_view text, std::span<const std::string> allowed_vars) {
    Parser p(text, allowed_vars);
    NodePtr root = p.parse_expr();
    if (p.tok != Tok::End) p.fail("unexpected trailing input", p.tok_at);
    return Expr(std::move(root));
}

Expr Expr::number(double v) { return Expr(make_node({.kind = Kind::Number, .number = v})); }
Expr Expr::pi() { return Expr(make_node({.kind = Kind::Pi})); }

Expr Expr::var(int index, std::string name) {
    if (name.empty()) name = "x" + std::to_string(index + 1);
    return Expr(make_node({.kind = Kind::Var, .var = index, .name = std::move(name)}));
}

Expr Expr::call(Func f, Expr a) {
    return Expr(make_node({.kind = Kind::Call, .func = f, .a = a.n_}));
}

Expr Expr::pow_int(int exponent) const {
    return Expr(make_node({.kind = Kind::Pow, .exponent = exponent, .a = n_}));
}

Expr operator+(Expr a, Expr b) { return Expr(make_node({.kind = Kind::Add, .a = a.n_, .b = b.n_})); }
Expr operator-(Expr a, Expr b) { return Expr(make_node({.kind = Kind::Sub, .a = a.n_, .b = b.n_})); }
Expr operator*(Expr a, Expr b) { return Expr(make_node({.kind = Kind::Mul, .a = a.n_, .b = b.n_})); }
Expr operator/(Expr a, Expr b) { return Expr(make_node({.kind = Kind::Div, .a = a.n_, .b = b.n_})); }

Expr Expr::operator-() const {
    if (n_->kind == Kind::Number) return number(-n_->number);
    return Expr(make_node({.kind = Kind::Neg, .a = n_}));
}

namespace {

std::string node_str(const Expr::Node& n) {
    switch (n.kind) {
        case Kind::Number: return format_double(n.number);
        case Kind::Pi: return "pi";
        case Kind::Var: return n.name;
        case Kind::Neg: return "(-" + node_str(*n.a) + ")";
        case Kind::Add: return "(" + node_str(*n.a) + " + " + node_str(*n.b) + ")";
        case Kind::Sub: return "(" + node_str(*n.a) + " - " + node_str(*n.b) + ")";
        case Kind::Mul: return "(" + node_str(*n.a) + " * " + node_str(*n.b) + ")";
        case Kind::Div: return "(" + node_str(*n.a) + " / " + node_str(*n.b) + ")";
        case Kind::Pow: return "(" + node_str(*n.a) + "^" + std::to_string(n.exponent) + ")";
        case Kind::Call: {
            const char* f = nullptr;
            switch (n.func) {
                case Func::Sin: f = "sin"; break;
                case Func::Cos: f = "cos"; break;
                case Func::Exp: f = "exp"; break;
                case Func::Log: f = "log"; break;
                case Func::Sqrt: f = "sqrt"; break;
            }
            return std::string(f) + "(" + node_str(*n.a) + ")";
        }
    }
    return {};
}

double node_eval(const Expr::Node& n, std::span<const double> env) {
    switch (n.kind) {
        case Kind::Number: return n.number;
        case Kind::Pi: return kPi;
        case Kind::Var:
            if (n.var >= static_cast<int>(env.size()))
                throw ShapeError("expression variable index out of range of environment");
            return env[static_cast<std::size_t>(n.var)];
        case Kind::Neg: return -node_eval(*n.a, env);
        case Kind::Add: return node_eval(*n.a, env) + node_eval(*n.b, env);
        case Kind::Sub: return node_eval(*n.a, env) - node_eval(*n.b, env);
        case Kind::Mul: return node_eval(*n.a, env) * node_eval(*n.b, env);
        case Kind::Div: {
            const double d = node_eval(*n.b, env);
            if (d == 0.0) throw NumericDomainError("division by zero in expression");
            return node_eval(*n.a, env) / d;
        }
        case Kind::Pow: {
            const double b = node_eval(*n.a, env);
            if (n.exponent < 0 && b == 0.0)
                throw NumericDomainError("negative power of zero in expression");
            return std::pow(b, n.exponent);
        }
        case Kind::Call: {
            const double a = node_eval(*n.a, env);
            switch (n.func) {
                case Func::Sin: return std::sin(a);
                case Func::Cos: return std::cos(a);
                case Func::Exp: return std::exp(a);
                case Func::Log:
                    if (!(a > 0.0)) throw NumericDomainError("log of non-positive value");
                    return std::log(a);
                case Func::Sqrt:
                    if (!(a > 0.0)) throw NumericDomainError("sqrt of non-positive value");
                    return std::sqrt(a);
            }
            break;
        }
    }
    throw Error("unreachable expression kind");
}

Jet node_eval_jet(const Expr::Node& n, std::span<const Jet> env) {
    switch (n.kind) {
        case Kind::Number: return Jet::constant(n.number, env[0].num_vars(), env[0].order());
        case Kind::Pi: return Jet::constant(kPi, env[0].num_vars(), env[0].order());
        case Kind::Var:
            if (n.var >= static_cast<int>(env.size()))
                throw ShapeError("expression variable index out of range of environment");
            return env[static_cast<std::size_t>(n.var)];
        case Kind::Neg: return -node_eval_jet(*n.a, env);
        case Kind::Add: return node_eval_jet(*n.a, env) + node_eval_jet(*n.b, env);
        case Kind::Sub: return node_eval_jet(*n.a, env) - node_eval_jet(*n.b, env);
        case Kind::Mul: return node_eval_jet(*n.a, env) * node_eval_jet(*n.b, env);
        case Kind::Div: return node_eval_jet(*n.a, env) / node_eval_jet(*n.b, env);
        case Kind::Pow: return pow(node_eval_jet(*n.a, env), n.exponent);
        case Kind::Call: {
            Jet a = node_eval_jet(*n.a, env);
            switch (n.func) {
                case Func::Sin: return sin(a);
                case Func::Cos: return cos(a);
                case Func::Exp: return exp(a);
                case Func::Log: return log(a);
                case Func::Sqrt: return sqrt(a);
            }
            break;
        }
    }
    throw Error("unreachable expression kind");
}

int node_max_var(const Expr::Node& n) {
    switch (n.kind) {
        case Kind::Var: return n.var;
        case Kind::Number:
        case Kind::Pi: return -1;
        case Kind::Neg:
        case Kind::Pow: return node_max_var(*n.a);
        case Kind::Call: return node_max_var(*n.a);
        default: return std::max(node_max_var(*n.a), node_max_var(*n.b));
    }
}

bool node_equal(const Expr::Node& a, const Expr::Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Kind::Number: return a.number == b.number;
        case Kind::Pi: return true;
        case Kind::Var: return a.var == b.var && a.name == b.name;
        case Kind::Neg: return node_equal(*a.a, *b.a);
        case Kind::Pow: return a.exponent == b.exponent && node_equal(*a.a, *b.a);
        case Kind::Call: return a.func == b.func && node_equal(*a.a, *b.a);
        default: return node_equal(*a.a, *b.a) && node_equal(*a.b, *b.b);
    }
}

}  // namespace

std::string Expr::str() const {
    if (!n_) return "<empty>";
    return node_str(*n_);
}

double Expr::eval(std::span<const double> env) const {
    if (!n_) throw Error("evaluating an empty expression");
    return node_eval(*n_, env);
}

Jet Expr::eval_jet(std::span<const Jet> env) const {
    if (!n_) throw Error("evaluating an empty expression");
    if (env.empty()) throw ShapeError("jet evaluation needs a non-empty environment");
    return node_eval_jet(*n_, env);
}

Jet Expr::eval_jet_at(std::span<const double> point, int num_vars, int order) const {
    std::vector<Jet> env;
    env.reserve(point.size());
    for (std::size_t i = 0; i < point.size(); ++i)
        env.push_back(Jet::variable(static_cast<int>(i), point[i], num_vars, order));
    return eval_jet(env);
}

int Expr::max_var_index() const {
    if (!n_) return -1;
    return node_max_var(*n_);
}

bool Expr::operator==(const Expr& o) const {
    if (!n_ || !o.n_) return n_ == o.n_;
    return node_equal(*n_, *o.n_);
}

std::vector<std::string> x_var_names(int m) {
    std::vector<std::string> v;
    for (int i = 1; i <= m; ++i) v.push_back("x" + std::to_string(i));
    return v;
}

std::vector<std::string> y_var_names(int n) {
    std::vector<std::string> v;
    for (int i = 1; i <= n; ++i) v.push_back("y" + std::to_string(i));
    return v;
}

}  // namespace polyharm
