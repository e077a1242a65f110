#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace mars {

/// A real function of one variable `x`, parsed from text.
///
/// Grammar: the usual infix operators `+ - * / ^`, parentheses, numeric literals,
/// the variable `x`, the constant `pi`, and the functions
///
///   gauss(x, mean, sigma)     normal density
///   uniform(x, lo, hi)        1/(hi-lo) on [lo, hi), zero elsewhere
///   box(x, lo, hi)            1 on [lo, hi), zero elsewhere
///   step(x, at)               1 for x >= at, zero elsewhere
///   poly(x, c0, c1, ...)      c0 + c1 x + c2 x^2 + ...
///   exp log sqrt abs sin cos  (one argument)
///   min max                   (two arguments)
///
/// Throws SchemaError on malformed input.
class Expression {
public:
    static Expression parse(std::string_view text);

    double operator()(double x) const;

    /// Discontinuities with constant location (edges of box/uniform/step whose
    /// first argument is plain `x`). Used to split quadrature panels.
    std::vector<double> breakpoints() const;

    const std::string &source() const { return m_source; }

    struct Node;

private:
    Expression(std::string source, std::shared_ptr<const Node> root)
        : m_source(std::move(source)), m_root(std::move(root)) {}

    std::string m_source;
    std::shared_ptr<const Node> m_root;
};

} // namespace mars
