// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fpge {

enum class Op : std::uint8_t {
    constant,
    variable,
    add,
    sub,
    mul,
    div,
    pdiv,
    neg,
    sin,
    cos,
    exp,
    plog,
    psqrt,
};

// Expression AST over the phenotype mini-language: + - * /, unary minus,
// pdiv(a,b), sin cos exp plog psqrt, variables and numeric literals.
class Expr {
public:
    struct Node {
        Op op;
        double value = 0.0; // constant
        std::string name;   // variable
        std::uint32_t lhs = 0;
        std::uint32_t rhs = 0;
    };

    [[nodiscard]] std::vector<Node> const& nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::uint32_t root() const noexcept { return root_; }

    // Prefix form, e.g. Add(Mul(x,y),1). Used by tests and diagnostics.
    [[nodiscard]] std::string to_string() const;

private:
    friend class ExprParser;

    std::vector<Node> nodes_;
    std::uint32_t root_ = 0;
};

// Throws fpge::Error(ErrorKind::data) on syntax errors. Unknown identifiers
// not followed by '(' are variables; they are resolved by bind().
Expr parse_expr(std::string_view phenotype);

// An expression compiled to postfix with variables resolved to column indices.
class BoundExpr {
public:
    [[nodiscard]] double evaluate(std::span<double const> row) const;

private:
    friend BoundExpr bind(Expr const& expr, std::span<std::string const> names);

    struct Instr {
        Op op;
        double value;
        std::uint32_t var;
    };

    std::vector<Instr> code_;
    std::size_t stack_depth_ = 0;
};

// Throws fpge::Error(ErrorKind::data) for an unresolved variable.
BoundExpr bind(Expr const& expr, std::span<std::string const> names);

double eval_expr(Expr const& expr, std::span<double const> row, std::span<std::string const> names);

// Protected primitives shared by the evaluator and the dataset generators.
double protected_div(double a, double b) noexcept;
double protected_log(double x) noexcept;
double protected_sqrt(double x) noexcept;

} // namespace fpge
