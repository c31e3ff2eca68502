#include "vxgs/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace vxgs {

namespace {

enum class Fn { exp_, log_, abs_, sqrt_, sin_, cos_, tanh_, sech_, min_, max_ };

struct FnInfo {
    std::string_view name;
    Fn fn;
    int arity;
};

constexpr FnInfo kFunctions[] = {
    {"exp", Fn::exp_, 1},  {"log", Fn::log_, 1},   {"abs", Fn::abs_, 1},
    {"sqrt", Fn::sqrt_, 1}, {"sin", Fn::sin_, 1},   {"cos", Fn::cos_, 1},
    {"tanh", Fn::tanh_, 1}, {"sech", Fn::sech_, 1}, {"min", Fn::min_, 2},
    {"max", Fn::max_, 2},
};

enum class NodeKind { number, variable, unary_minus, binary, call };

struct Node {
    NodeKind kind;
    double number = 0.0;
    char var = 0;   // 'x','y','z','r'
    char op = 0;    // '+','-','*','/','^'
    Fn fn = Fn::exp_;
    int a = -1, b = -1;
};

} // namespace

struct Expr::Impl {
    std::vector<Node> nodes;
    int root = -1;
};

namespace {

class Parser {
  public:
    explicit Parser(std::string_view src) : src_(src) {}

    std::shared_ptr<Expr::Impl> run() {
        auto impl = std::make_shared<Expr::Impl>();
        nodes_ = &impl->nodes;
        impl->root = parse_sum();
        skip_ws();
        if (pos_ != src_.size()) throw parse_error(pos_, "unexpected trailing input");
        return impl;
    }

  private:
    std::string_view src_;
    std::size_t pos_ = 0;
    std::vector<Node>* nodes_ = nullptr;

    int add(Node n) {
        nodes_->push_back(n);
        return static_cast<int>(nodes_->size()) - 1;
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    int parse_sum() {
        int lhs = parse_term();
        for (;;) {
            char c = peek();
            if (c != '+' && c != '-') return lhs;
            ++pos_;
            int rhs = parse_term();
            lhs = add({.kind = NodeKind::binary, .op = c, .a = lhs, .b = rhs});
        }
    }

    int parse_term() {
        int lhs = parse_unary();
        for (;;) {
            char c = peek();
            if (c != '*' && c != '/') return lhs;
            ++pos_;
            int rhs = parse_unary();
            lhs = add({.kind = NodeKind::binary, .op = c, .a = lhs, .b = rhs});
        }
    }

    int parse_unary() {
        if (eat('-')) {
            int a = parse_unary();
            return add({.kind = NodeKind::unary_minus, .a = a});
        }
        return parse_power();
    }

    int parse_power() {
        int base = parse_primary();
        if (eat('^')) {
            int expo = parse_unary(); // right-associative, exponent may be signed
            return add({.kind = NodeKind::binary, .op = '^', .a = base, .b = expo});
        }
        return base;
    }

    int parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) throw parse_error(pos_, "expected expression");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            int e = parse_sum();
            if (!eat(')')) throw parse_error(pos_, "expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        throw parse_error(pos_, std::string("unexpected character '") + c + "'");
    }

    int parse_number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            } else {
                pos_ = save;
            }
        }
        std::string text(src_.substr(start, pos_ - start));
        char* end = nullptr;
        double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size())
            throw parse_error(start, "malformed number '" + text + "'");
        return add({.kind = NodeKind::number, .number = v});
    }

    int parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string_view name = src_.substr(start, pos_ - start);

        if (name == "pi") return add({.kind = NodeKind::number, .number = std::numbers::pi});
        if (name.size() == 1 &&
            (name[0] == 'x' || name[0] == 'y' || name[0] == 'z' || name[0] == 'r'))
            return add({.kind = NodeKind::variable, .var = name[0]});

        for (const auto& f : kFunctions) {
            if (name != f.name) continue;
            if (!eat('(')) throw parse_error(pos_, "expected '(' after '" + std::string(name) + "'");
            int a = parse_sum();
            int b = -1;
            if (f.arity == 2) {
                if (!eat(',')) throw parse_error(pos_, "'" + std::string(name) + "' takes two arguments");
                b = parse_sum();
            } else if (peek() == ',') {
                throw parse_error(pos_, "'" + std::string(name) + "' takes one argument");
            }
            if (!eat(')')) throw parse_error(pos_, "expected ')'");
            return add({.kind = NodeKind::call, .fn = f.fn, .a = a, .b = b});
        }
        throw parse_error(start, "unknown identifier '" + std::string(name) + "'");
    }
};

double eval_node(const std::vector<Node>& nodes, int id, const EvalContext& ctx) {
    const Node& n = nodes[static_cast<std::size_t>(id)];
    switch (n.kind) {
        case NodeKind::number: return n.number;
        case NodeKind::variable: {
            std::optional<double> v;
            switch (n.var) {
                case 'x': v = ctx.x; break;
                case 'y': v = ctx.y; break;
                case 'z': v = ctx.z; break;
                case 'r':
                    v = ctx.r;
                    if (!v && (ctx.x || ctx.y || ctx.z)) {
                        double s = 0.0;
                        if (ctx.x) s += *ctx.x * *ctx.x;
                        if (ctx.y) s += *ctx.y * *ctx.y;
                        if (ctx.z) s += *ctx.z * *ctx.z;
                        v = std::sqrt(s);
                    }
                    break;
            }
            if (!v)
                throw evaluation_error(std::string("variable '") + n.var + "' is not bound here");
            return *v;
        }
        case NodeKind::unary_minus: return -eval_node(nodes, n.a, ctx);
        case NodeKind::binary: {
            double a = eval_node(nodes, n.a, ctx);
            double b = eval_node(nodes, n.b, ctx);
            switch (n.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                case '^': return std::pow(a, b);
            }
            return 0.0;
        }
        case NodeKind::call: {
            double a = eval_node(nodes, n.a, ctx);
            switch (n.fn) {
                case Fn::exp_: return std::exp(a);
                case Fn::log_:
                    if (a <= 0.0) throw evaluation_error("log of a non-positive value");
                    return std::log(a);
                case Fn::abs_: return std::abs(a);
                case Fn::sqrt_:
                    if (a < 0.0) throw evaluation_error("sqrt of a negative value");
                    return std::sqrt(a);
                case Fn::sin_: return std::sin(a);
                case Fn::cos_: return std::cos(a);
                case Fn::tanh_: return std::tanh(a);
                case Fn::sech_: return 1.0 / std::cosh(a);
                case Fn::min_: return std::min(a, eval_node(nodes, n.b, ctx));
                case Fn::max_: return std::max(a, eval_node(nodes, n.b, ctx));
            }
            return 0.0;
        }
    }
    return 0.0;
}

void print_node(const std::vector<Node>& nodes, int id, std::string& out) {
    const Node& n = nodes[static_cast<std::size_t>(id)];
    switch (n.kind) {
        case NodeKind::number: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", n.number);
            out += buf;
            break;
        }
        case NodeKind::variable: out += n.var; break;
        case NodeKind::unary_minus:
            out += "(-";
            print_node(nodes, n.a, out);
            out += ')';
            break;
        case NodeKind::binary:
            out += '(';
            print_node(nodes, n.a, out);
            out += ' ';
            out += n.op;
            out += ' ';
            print_node(nodes, n.b, out);
            out += ')';
            break;
        case NodeKind::call: {
            for (const auto& f : kFunctions) {
                if (f.fn == n.fn) {
                    out += f.name;
                    break;
                }
            }
            out += '(';
            print_node(nodes, n.a, out);
            if (n.b >= 0) {
                out += ", ";
                print_node(nodes, n.b, out);
            }
            out += ')';
            break;
        }
    }
}

} // namespace

Expr Expr::parse(std::string_view source) { return Expr(Parser(source).run()); }

double Expr::eval(const EvalContext& ctx) const { return eval_node(impl_->nodes, impl_->root, ctx); }

std::string Expr::str() const {
    std::string out;
    print_node(impl_->nodes, impl_->root, out);
    return out;
}

Field Expr::sample(const std::shared_ptr<const Grid>& g) const {
    Field f(g);
    for (std::size_t i = 0; i < g->size(); ++i) {
        EvalContext ctx;
        switch (g->kind()) {
            case GridKind::line1d: ctx.x = g->position(i)[0]; break;
            case GridKind::radial_nd: ctx.r = g->radius(i); break;
            case GridKind::cartesian2d: {
                auto p = g->position(i);
                ctx.x = p[0];
                ctx.y = p[1];
                break;
            }
        }
        f[i] = eval(ctx);
    }
    return f;
}

} // namespace vxgs
