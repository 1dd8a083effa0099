#pragma once

#include <memory>
#include <string>

#include "semilag/vec.hpp"

namespace semilag::io {

/// Parsed arithmetic expression in the variables x and y.
///
/// Grammar: numbers, x, y, pi, + - * / ^ (right associative), unary minus,
/// parentheses and the functions abs sqrt exp log sin cos tanh (one argument)
/// and min max (two arguments).
class Expression {
public:
    /// Throws semilag::Error(Config) with the offending column on bad input.
    static Expression parse(const std::string& text);

    double operator()(Vec p) const;
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace semilag::io
