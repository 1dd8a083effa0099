#include "semilag/io/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "semilag/errors.hpp"

namespace semilag::io {

struct Expression::Node {
    enum class Op { Const, X, Y, Neg, Add, Sub, Mul, Div, Pow, Call1, Call2 } op;
    double value = 0.0;
    double (*f1)(double) = nullptr;
    double (*f2)(double, double) = nullptr;
    std::shared_ptr<const Node> a, b;

    double eval(Vec p) const {
        switch (op) {
            case Op::Const: return value;
            case Op::X: return p.x;
            case Op::Y: return p.y;
            case Op::Neg: return -a->eval(p);
            case Op::Add: return a->eval(p) + b->eval(p);
            case Op::Sub: return a->eval(p) - b->eval(p);
            case Op::Mul: return a->eval(p) * b->eval(p);
            case Op::Div: return a->eval(p) / b->eval(p);
            case Op::Pow: return std::pow(a->eval(p), b->eval(p));
            case Op::Call1: return f1(a->eval(p));
            case Op::Call2: return f2(a->eval(p), b->eval(p));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

double fmin2(double a, double b) { return std::fmin(a, b); }
double fmax2(double a, double b) { return std::fmax(a, b); }

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorKind::Config,
                    "expression '" + s_ + "': " + what + " at column " + std::to_string(pos_ + 1));
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

    NodePtr sum() {
        NodePtr l = product();
        for (;;) {
            if (eat('+')) l = make(Op::Add, l, product());
            else if (eat('-')) l = make(Op::Sub, l, product());
            else return l;
        }
    }

    NodePtr product() {
        NodePtr l = unary();
        for (;;) {
            if (eat('*')) l = make(Op::Mul, l, unary());
            else if (eat('/')) l = make(Op::Div, l, unary());
            else return l;
        }
    }

    NodePtr unary() {
        if (eat('-')) return make(Op::Neg, unary());
        if (eat('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (eat('^')) return make(Op::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = sum();
            if (!eat(')')) fail("missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::Const;
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "x") return make(Op::X);
            if (name == "y") return make(Op::Y);
            if (name == "pi") {
                auto n = std::make_shared<Expression::Node>();
                n->op = Op::Const;
                n->value = std::numbers::pi;
                return n;
            }
            return call(name);
        }
        fail("unexpected character");
    }

    NodePtr call(const std::string& name) {
        static const std::vector<std::pair<std::string, double (*)(double)>> one = {
            {"abs", [](double v) { return std::abs(v); }},   {"sqrt", [](double v) { return std::sqrt(v); }},
            {"exp", [](double v) { return std::exp(v); }},   {"log", [](double v) { return std::log(v); }},
            {"sin", [](double v) { return std::sin(v); }},   {"cos", [](double v) { return std::cos(v); }},
            {"tanh", [](double v) { return std::tanh(v); }},
        };
        if (!eat('(')) fail("expected '(' after " + name);
        for (const auto& [n, f] : one) {
            if (n != name) continue;
            auto node = std::make_shared<Expression::Node>();
            node->op = Op::Call1;
            node->f1 = f;
            node->a = sum();
            if (!eat(')')) fail("missing ')'");
            return node;
        }
        if (name == "min" || name == "max") {
            auto node = std::make_shared<Expression::Node>();
            node->op = Op::Call2;
            node->f2 = name == "min" ? fmin2 : fmax2;
            node->a = sum();
            if (!eat(',')) fail("expected ','");
            node->b = sum();
            if (!eat(')')) fail("missing ')'");
            return node;
        }
        fail("unknown function '" + name + "'");
    }
};

}  // namespace

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.text_ = text;
    e.root_ = Parser(text).parse();
    return e;
}

double Expression::operator()(Vec p) const { return root_->eval(p); }

}  // namespace semilag::io
