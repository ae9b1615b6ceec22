#include "cli/expression.hpp"

#include <subriem/errors.hpp>

#include <cctype>
#include <cmath>
#include <numbers>

namespace subriem::cli {

struct Expression::Node {
    enum class Kind { number, variable, add, sub, mul, div, pow, neg, sin, cos, exp };
    Kind kind = Kind::number;
    double number = 0.0;
    int var = 0;  // 0-based
    std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;
using surfaces::ScalarJet;

NodePtr make(Node::Kind kind, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }
    int max_var() const { return max_var_; }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("expression: " + what + " at position " + std::to_string(pos_ + 1));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr left = term();
        for (;;) {
            if (eat('+'))
                left = make(Node::Kind::add, left, term());
            else if (eat('-'))
                left = make(Node::Kind::sub, left, term());
            else
                return left;
        }
    }
    NodePtr term() {
        NodePtr left = unary();
        for (;;) {
            if (eat('*'))
                left = make(Node::Kind::mul, left, unary());
            else if (eat('/'))
                left = make(Node::Kind::div, left, unary());
            else
                return left;
        }
    }
    NodePtr unary() {
        if (eat('-')) return make(Node::Kind::neg, unary());
        if (eat('+')) return unary();
        return power();
    }
    NodePtr power() {
        NodePtr base = primary();
        if (eat('^')) return make(Node::Kind::pow, base, unary());
        return base;
    }
    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (eat('(')) {
            NodePtr e = expr();
            if (!eat(')')) fail("missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return word();
        fail("unexpected '" + std::string(1, c) + "'");
    }
    NodePtr number() {
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("bad number");
        pos_ += static_cast<std::size_t>(end - begin);
        auto n = std::make_shared<Node>();
        n->number = v;
        return n;
    }
    NodePtr word() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string name = s_.substr(start, pos_ - start);
        if (name == "x") {
            const std::size_t digits = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ == digits) fail("variable needs an index, e.g. x1");
            const int k = std::stoi(s_.substr(digits, pos_ - digits));
            if (k < 1) fail("variable indices start at 1");
            max_var_ = std::max(max_var_, k);
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::variable;
            n->var = k - 1;
            return n;
        }
        if (name == "pi") {
            auto n = std::make_shared<Node>();
            n->number = std::numbers::pi;
            return n;
        }
        Node::Kind kind;
        if (name == "sin")
            kind = Node::Kind::sin;
        else if (name == "cos")
            kind = Node::Kind::cos;
        else if (name == "exp")
            kind = Node::Kind::exp;
        else
            fail("unknown name '" + name + "'");
        if (!eat('(')) fail("missing '(' after " + name);
        NodePtr arg = expr();
        if (!eat(')')) fail("missing ')'");
        return make(kind, arg);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int max_var_ = 0;
};

bool is_constant(const Node& n) {
    if (n.kind == Node::Kind::variable) return false;
    if (n.kind == Node::Kind::number) return true;
    return (!n.a || is_constant(*n.a)) && (!n.b || is_constant(*n.b));
}

// g(a) for a scalar function with derivatives d1 = g'(a.value), d2 = g''(a.value).
ScalarJet chain(const ScalarJet& a, double v, double d1, double d2) {
    ScalarJet r;
    r.value = v;
    r.grad = d1 * a.grad;
    r.hess = d1 * a.hess + d2 * a.grad * a.grad.transpose();
    return r;
}

ScalarJet product(const ScalarJet& a, const ScalarJet& b) {
    ScalarJet r;
    r.value = a.value * b.value;
    r.grad = a.value * b.grad + b.value * a.grad;
    r.hess = a.value * b.hess + b.value * a.hess + a.grad * b.grad.transpose() + b.grad * a.grad.transpose();
    return r;
}

ScalarJet evaluate(const Node& n, const Vec& x) {
    const Eigen::Index d = x.size();
    switch (n.kind) {
        case Node::Kind::number:
            return {n.number, Vec::Zero(d), Mat::Zero(d, d)};
        case Node::Kind::variable: {
            if (n.var >= d) throw InputError("variable x" + std::to_string(n.var + 1) + " exceeds the dimension");
            return {x(n.var), Vec::Unit(d, n.var), Mat::Zero(d, d)};
        }
        case Node::Kind::neg: {
            ScalarJet a = evaluate(*n.a, x);
            return {-a.value, -a.grad, -a.hess};
        }
        case Node::Kind::add:
        case Node::Kind::sub: {
            const ScalarJet a = evaluate(*n.a, x), b = evaluate(*n.b, x);
            const double s = n.kind == Node::Kind::add ? 1.0 : -1.0;
            return {a.value + s * b.value, a.grad + s * b.grad, a.hess + s * b.hess};
        }
        case Node::Kind::mul:
            return product(evaluate(*n.a, x), evaluate(*n.b, x));
        case Node::Kind::div: {
            const ScalarJet b = evaluate(*n.b, x);
            if (b.value == 0.0) throw std::domain_error("division by zero");
            const double v = b.value;
            return product(evaluate(*n.a, x), chain(b, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v)));
        }
        case Node::Kind::pow: {
            const ScalarJet a = evaluate(*n.a, x);
            if (is_constant(*n.b)) {
                const double c = evaluate(*n.b, x).value;
                const double v = a.value;
                const double d1 = c == 0.0 ? 0.0 : c * std::pow(v, c - 1.0);
                const double d2 = c == 0.0 || c == 1.0 ? 0.0 : c * (c - 1.0) * std::pow(v, c - 2.0);
                return chain(a, std::pow(v, c), d1, d2);
            }
            if (!(a.value > 0.0)) throw std::domain_error("variable exponent needs a positive base");
            const double lv = std::log(a.value);
            const ScalarJet la = chain(a, lv, 1.0 / a.value, -1.0 / (a.value * a.value));
            const ScalarJet e = product(evaluate(*n.b, x), la);
            const double ev = std::exp(e.value);
            return chain(e, ev, ev, ev);
        }
        case Node::Kind::sin: {
            const ScalarJet a = evaluate(*n.a, x);
            return chain(a, std::sin(a.value), std::cos(a.value), -std::sin(a.value));
        }
        case Node::Kind::cos: {
            const ScalarJet a = evaluate(*n.a, x);
            return chain(a, std::cos(a.value), -std::sin(a.value), -std::cos(a.value));
        }
        case Node::Kind::exp: {
            const ScalarJet a = evaluate(*n.a, x);
            const double ev = std::exp(a.value);
            return chain(a, ev, ev, ev);
        }
    }
    throw std::logic_error("unhandled expression node");
}

}  // namespace

Expression Expression::parse(const std::string& text) {
    Parser p(text);
    Expression e;
    e.text_ = text;
    e.root_ = p.parse();
    e.max_var_ = p.max_var();
    return e;
}

double Expression::value(const Vec& x) const { return evaluate(*root_, x).value; }

surfaces::ScalarJet Expression::jet(const Vec& x) const { return evaluate(*root_, x); }

}  // namespace subriem::cli
