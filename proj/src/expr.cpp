#include "jetflow/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <set>

namespace jetflow {

using detail::Node;
using NodePtr = std::shared_ptr<const Node>;

const char* func_name(FuncId f) {
    switch (f) {
        case FuncId::Sin: return "sin";
        case FuncId::Cos: return "cos";
        case FuncId::Tan: return "tan";
        case FuncId::Exp: return "exp";
        case FuncId::Log: return "log";
        case FuncId::Sqrt: return "sqrt";
        case FuncId::Abs: return "abs";
        case FuncId::Sinh: return "sinh";
        case FuncId::Cosh: return "cosh";
        case FuncId::Tanh: return "tanh";
    }
    return "?";
}

static bool lookup_func(const std::string& name, FuncId& out) {
    static const std::pair<const char*, FuncId> table[] = {
        {"sin", FuncId::Sin},   {"cos", FuncId::Cos},   {"tan", FuncId::Tan},
        {"exp", FuncId::Exp},   {"log", FuncId::Log},   {"sqrt", FuncId::Sqrt},
        {"abs", FuncId::Abs},   {"sinh", FuncId::Sinh}, {"cosh", FuncId::Cosh},
        {"tanh", FuncId::Tanh},
    };
    for (const auto& [n, id] : table)
        if (name == n) { out = id; return true; }
    return false;
}

// -- construction -------------------------------------------------------------

static NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

Expr Expr::literal(double v) {
    // negative values become Neg(positive literal) so every buildable tree
    // stays inside the parser's image and round-trips structurally
    if (std::signbit(v) && !std::isnan(v)) return -literal(-v);
    Node n;
    n.kind = Node::Kind::Lit;
    n.lit = v;
    return Expr(make_node(std::move(n)));
}

Expr Expr::var(std::string name) {
    Node n;
    n.kind = Node::Kind::Var;
    n.name = std::move(name);
    return Expr(make_node(std::move(n)));
}

Expr Expr::call(FuncId fn, Expr arg) {
    Node n;
    n.kind = Node::Kind::Fun;
    n.fn = fn;
    n.a = arg.node_;
    return Expr(make_node(std::move(n)));
}

Expr Expr::pow(Expr base, Expr exponent) {
    Node n;
    n.kind = Node::Kind::Pow;
    n.a = base.node_;
    n.b = exponent.node_;
    return Expr(make_node(std::move(n)));
}

Expr operator+(Expr a, Expr b) {
    Node n;
    n.kind = Node::Kind::Add;
    n.a = a.node_;
    n.b = b.node_;
    return Expr(make_node(std::move(n)));
}
Expr operator-(Expr a, Expr b) {
    Node n;
    n.kind = Node::Kind::Sub;
    n.a = a.node_;
    n.b = b.node_;
    return Expr(make_node(std::move(n)));
}
Expr operator*(Expr a, Expr b) {
    Node n;
    n.kind = Node::Kind::Mul;
    n.a = a.node_;
    n.b = b.node_;
    return Expr(make_node(std::move(n)));
}
Expr operator/(Expr a, Expr b) {
    Node n;
    n.kind = Node::Kind::Div;
    n.a = a.node_;
    n.b = b.node_;
    return Expr(make_node(std::move(n)));
}
Expr operator-(Expr a) {
    Node n;
    n.kind = Node::Kind::Neg;
    n.a = a.node_;
    return Expr(make_node(std::move(n)));
}

// -- parser --------------------------------------------------------------------

namespace {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr run() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("empty input", 0);
        Expr e = parse_sum();
        skip_ws();
        if (pos_ < src_.size())
            throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) { ++pos_; return true; }
        return false;
    }

    Expr parse_sum() {
        Expr e = parse_term();
        for (;;) {
            if (accept('+')) e = e + parse_term();
            else if (accept('-')) e = e - parse_term();
            else return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_unary();
        for (;;) {
            if (accept('*')) e = e * parse_unary();
            else if (accept('/')) e = e / parse_unary();
            else return e;
        }
    }

    Expr parse_unary() {
        if (accept('-')) return -parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (accept('^')) {
            // right-associative; the exponent admits a leading unary minus
            return Expr::pow(base, parse_unary());
        }
        return base;
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("expected operand", pos_);
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Expr parse_number() {
        const char* begin = src_.data() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("malformed number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        return Expr::literal(v);
    }

    Expr parse_ident() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string name(src_.substr(start, pos_ - start));
        if (peek('(')) {
            FuncId fn;
            if (!lookup_func(name, fn))
                throw ParseError("unknown function '" + name + "'", start);
            ++pos_; // consume '('
            Expr arg = parse_sum();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return Expr::call(fn, std::move(arg));
        }
        return Expr::var(std::move(name));
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

} // namespace

Expr Expr::parse(std::string_view source) { return Parser(source).run(); }

// -- printer -------------------------------------------------------------------

namespace {

// binding strengths mirroring the parser
constexpr int PREC_SUM = 1;
constexpr int PREC_TERM = 2;
constexpr int PREC_NEG = 3;
constexpr int PREC_POW = 4;
constexpr int PREC_ATOM = 5;

std::string format_literal(double v) {
    // shortest representation that parses back to the same double
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

int node_prec(const Node& n) {
    switch (n.kind) {
        case Node::Kind::Add:
        case Node::Kind::Sub: return PREC_SUM;
        case Node::Kind::Mul:
        case Node::Kind::Div: return PREC_TERM;
        case Node::Kind::Neg: return PREC_NEG;
        case Node::Kind::Pow: return PREC_POW;
        default: return PREC_ATOM;
    }
}

void print_node(std::string& out, const Node& n, int parent_prec) {
    const int prec = node_prec(n);
    const bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (n.kind) {
        case Node::Kind::Lit:
            out += format_literal(n.lit); // nonnegative by construction
            break;
        case Node::Kind::Var: out += n.name; break;
        case Node::Kind::Add:
            print_node(out, *n.a, PREC_SUM);
            out += " + ";
            print_node(out, *n.b, PREC_SUM + 1);
            break;
        case Node::Kind::Sub:
            print_node(out, *n.a, PREC_SUM);
            out += " - ";
            print_node(out, *n.b, PREC_SUM + 1);
            break;
        case Node::Kind::Mul:
            print_node(out, *n.a, PREC_TERM);
            out += "*";
            print_node(out, *n.b, PREC_TERM + 1);
            break;
        case Node::Kind::Div:
            print_node(out, *n.a, PREC_TERM);
            out += "/";
            print_node(out, *n.b, PREC_TERM + 1);
            break;
        case Node::Kind::Neg:
            out += '-';
            print_node(out, *n.a, PREC_NEG);
            break;
        case Node::Kind::Pow:
            print_node(out, *n.a, PREC_ATOM); // base never bare-negated/compound
            out += '^';
            print_node(out, *n.b, PREC_NEG);  // exponent may carry unary minus
            break;
        case Node::Kind::Fun:
            out += func_name(n.fn);
            out += '(';
            print_node(out, *n.a, PREC_SUM);
            out += ')';
            break;
    }
    if (parens) out += ')';
}

} // namespace

std::string Expr::str() const {
    std::string out;
    print_node(out, *node_, PREC_SUM);
    return out;
}

// -- tree utilities --------------------------------------------------------------

static void collect_vars(const Node& n, std::set<std::string>& out) {
    if (n.kind == Node::Kind::Var) out.insert(n.name);
    if (n.a) collect_vars(*n.a, out);
    if (n.b) collect_vars(*n.b, out);
}

std::vector<std::string> Expr::variables() const {
    std::set<std::string> s;
    collect_vars(*node_, s);
    return {s.begin(), s.end()};
}

static bool same_node(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Node::Kind::Lit:
            return a.lit == b.lit || (std::isnan(a.lit) && std::isnan(b.lit));
        case Node::Kind::Var: return a.name == b.name;
        case Node::Kind::Fun:
            return a.fn == b.fn && same_node(*a.a, *b.a);
        case Node::Kind::Neg: return same_node(*a.a, *b.a);
        default: return same_node(*a.a, *b.a) && same_node(*a.b, *b.b);
    }
}

bool Expr::same_tree(const Expr& other) const {
    if (!node_ || !other.node_) return node_ == other.node_;
    return same_node(*node_, *other.node_);
}

} // namespace jetflow
