#include "mars/core/expression.hpp"

#include "mars/core/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace mars {

enum class Op {
    Constant, Variable,
    Add, Sub, Mul, Div, Pow, Neg,
    Gauss, Uniform, Box, Step, Poly,
    Exp, Log, Sqrt, Abs, Sin, Cos,
    Min, Max,
};

struct Expression::Node {
    Op op = Op::Constant;
    double value = 0;
    std::vector<std::shared_ptr<const Node>> args;

    double eval(double x) const;
    bool isConstant() const;
    bool isVariable() const { return op == Op::Variable; }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

struct FunctionInfo {
    Op op;
    int minArgs;
    int maxArgs;
};

const std::unordered_map<std::string_view, FunctionInfo> &functionTable() {
    static const std::unordered_map<std::string_view, FunctionInfo> table = {
        {"gauss", {Op::Gauss, 3, 3}},  {"uniform", {Op::Uniform, 3, 3}},
        {"box", {Op::Box, 3, 3}},      {"step", {Op::Step, 2, 2}},
        {"poly", {Op::Poly, 2, 64}},   {"exp", {Op::Exp, 1, 1}},
        {"log", {Op::Log, 1, 1}},      {"sqrt", {Op::Sqrt, 1, 1}},
        {"abs", {Op::Abs, 1, 1}},      {"sin", {Op::Sin, 1, 1}},
        {"cos", {Op::Cos, 1, 1}},      {"min", {Op::Min, 2, 2}},
        {"max", {Op::Max, 2, 2}},
    };
    return table;
}

NodePtr makeNode(Op op, std::vector<NodePtr> args = {}, double value = 0) {
    auto node = std::make_shared<Expression::Node>();
    node->op = op;
    node->value = value;
    node->args = std::move(args);
    return node;
}

class Parser {
public:
    explicit Parser(std::string_view text) : m_text(text) {}

    NodePtr parse() {
        NodePtr root = parseSum();
        skipSpace();
        if (m_pos != m_text.size())
            fail("unexpected '" + std::string(1, m_text[m_pos]) + "'");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string &message) const {
        throw SchemaError("expression \"" + std::string(m_text) + "\": " + message +
                          " at offset " + std::to_string(m_pos));
    }

    void skipSpace() {
        while (m_pos < m_text.size() && std::isspace(static_cast<unsigned char>(m_text[m_pos])))
            ++m_pos;
    }

    bool accept(char c) {
        skipSpace();
        if (m_pos < m_text.size() && m_text[m_pos] == c) {
            ++m_pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }

    NodePtr parseSum() {
        NodePtr lhs = parseProduct();
        for (;;) {
            if (accept('+'))
                lhs = makeNode(Op::Add, {lhs, parseProduct()});
            else if (accept('-'))
                lhs = makeNode(Op::Sub, {lhs, parseProduct()});
            else
                return lhs;
        }
    }

    NodePtr parseProduct() {
        NodePtr lhs = parseUnary();
        for (;;) {
            if (accept('*'))
                lhs = makeNode(Op::Mul, {lhs, parseUnary()});
            else if (accept('/'))
                lhs = makeNode(Op::Div, {lhs, parseUnary()});
            else
                return lhs;
        }
    }

    NodePtr parseUnary() {
        if (accept('-'))
            return makeNode(Op::Neg, {parseUnary()});
        if (accept('+'))
            return parseUnary();
        return parsePower();
    }

    // right associative; binds tighter than unary minus on its left operand
    NodePtr parsePower() {
        NodePtr base = parsePrimary();
        if (accept('^'))
            return makeNode(Op::Pow, {base, parseUnary()});
        return base;
    }

    NodePtr parsePrimary() {
        skipSpace();
        if (m_pos >= m_text.size())
            fail("unexpected end of input");

        const char c = m_text[m_pos];
        if (c == '(') {
            ++m_pos;
            NodePtr inner = parseSum();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parseNumber();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return parseIdentifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr parseNumber() {
        double value = 0;
        const char *begin = m_text.data() + m_pos;
        const char *end = m_text.data() + m_text.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc())
            fail("malformed number");
        m_pos += static_cast<std::size_t>(ptr - begin);
        return makeNode(Op::Constant, {}, value);
    }

    NodePtr parseIdentifier() {
        const std::size_t start = m_pos;
        while (m_pos < m_text.size() &&
               (std::isalnum(static_cast<unsigned char>(m_text[m_pos])) || m_text[m_pos] == '_'))
            ++m_pos;
        const std::string_view name = m_text.substr(start, m_pos - start);

        if (name == "x")
            return makeNode(Op::Variable);
        if (name == "pi")
            return makeNode(Op::Constant, {}, std::numbers::pi);

        const auto &table = functionTable();
        auto it = table.find(name);
        if (it == table.end())
            fail("unknown identifier '" + std::string(name) + "'");

        expect('(');
        std::vector<NodePtr> args;
        if (!accept(')')) {
            do {
                args.push_back(parseSum());
            } while (accept(','));
            expect(')');
        }
        const auto count = static_cast<int>(args.size());
        if (count < it->second.minArgs || count > it->second.maxArgs)
            fail("wrong number of arguments to '" + std::string(name) + "'");
        return makeNode(it->second.op, std::move(args));
    }

    std::string_view m_text;
    std::size_t m_pos = 0;
};

void collectBreakpoints(const Expression::Node &node, std::vector<double> &out) {
    const bool edgeFunction = node.op == Op::Box || node.op == Op::Uniform || node.op == Op::Step;
    if (edgeFunction && node.args[0]->isVariable()) {
        for (std::size_t i = 1; i < node.args.size(); ++i)
            if (node.args[i]->isConstant())
                out.push_back(node.args[i]->eval(0.0));
    }
    for (const auto &arg : node.args)
        collectBreakpoints(*arg, out);
}

} // namespace

double Expression::Node::eval(double x) const {
    auto arg = [&](std::size_t i) { return args[i]->eval(x); };
    switch (op) {
    case Op::Constant: return value;
    case Op::Variable: return x;
    case Op::Add: return arg(0) + arg(1);
    case Op::Sub: return arg(0) - arg(1);
    case Op::Mul: return arg(0) * arg(1);
    case Op::Div: return arg(0) / arg(1);
    case Op::Pow: return std::pow(arg(0), arg(1));
    case Op::Neg: return -arg(0);
    case Op::Gauss: {
        const double sigma = arg(2);
        const double z = (arg(0) - arg(1)) / sigma;
        return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2 * std::numbers::pi));
    }
    case Op::Uniform: {
        const double v = arg(0), lo = arg(1), hi = arg(2);
        return (v >= lo && v < hi) ? 1.0 / (hi - lo) : 0.0;
    }
    case Op::Box: {
        const double v = arg(0);
        return (v >= arg(1) && v < arg(2)) ? 1.0 : 0.0;
    }
    case Op::Step: return arg(0) >= arg(1) ? 1.0 : 0.0;
    case Op::Poly: {
        const double v = arg(0);
        double result = 0;
        for (std::size_t i = args.size(); i-- > 1;)
            result = result * v + arg(i);
        return result;
    }
    case Op::Exp: return std::exp(arg(0));
    case Op::Log: return std::log(arg(0));
    case Op::Sqrt: return std::sqrt(arg(0));
    case Op::Abs: return std::abs(arg(0));
    case Op::Sin: return std::sin(arg(0));
    case Op::Cos: return std::cos(arg(0));
    case Op::Min: return std::min(arg(0), arg(1));
    case Op::Max: return std::max(arg(0), arg(1));
    }
    return 0.0;
}

bool Expression::Node::isConstant() const {
    if (op == Op::Variable)
        return false;
    for (const auto &a : args)
        if (!a->isConstant())
            return false;
    return true;
}

Expression Expression::parse(std::string_view text) {
    Parser parser(text);
    return Expression(std::string(text), parser.parse());
}

double Expression::operator()(double x) const { return m_root->eval(x); }

std::vector<double> Expression::breakpoints() const {
    std::vector<double> out;
    collectBreakpoints(*m_root, out);
    return out;
}

} // namespace mars
