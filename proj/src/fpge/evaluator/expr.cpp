// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#include "fpge/evaluator/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "fpge/error.hpp"

namespace fpge {

namespace {

struct FunctionInfo {
    std::string_view name;
    Op op;
    int arity;
};

constexpr FunctionInfo kFunctions[] = {
    { "pdiv", Op::pdiv, 2 },
    { "sin", Op::sin, 1 },
    { "cos", Op::cos, 1 },
    { "exp", Op::exp, 1 },
    { "plog", Op::plog, 1 },
    { "psqrt", Op::psqrt, 1 },
};

std::string_view op_name(Op op)
{
    switch (op) {
    case Op::add: return "Add";
    case Op::sub: return "Sub";
    case Op::mul: return "Mul";
    case Op::div: return "Div";
    case Op::pdiv: return "pdiv";
    case Op::neg: return "Neg";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::exp: return "exp";
    case Op::plog: return "plog";
    case Op::psqrt: return "psqrt";
    default: return "?";
    }
}

bool is_binary(Op op) { return op == Op::add || op == Op::sub || op == Op::mul || op == Op::div || op == Op::pdiv; }

std::string format_number(double v)
{
    char buf[32];
    auto const res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

class ExprParser {
public:
    explicit ExprParser(std::string_view text)
        : text_(text)
    {
    }

    Expr parse()
    {
        auto const root = parse_sum();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        expr_.root_ = root;
        return std::move(expr_);
    }

private:
    [[noreturn]] void fail(std::string const& what) const
    {
        throw Error(ErrorKind::data, "syntax error at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "': " + what);
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    std::uint32_t add(Expr::Node node)
    {
        expr_.nodes_.push_back(std::move(node));
        return static_cast<std::uint32_t>(expr_.nodes_.size() - 1);
    }

    std::uint32_t parse_sum()
    {
        auto lhs = parse_product();
        for (;;) {
            if (accept('+')) {
                lhs = add({ Op::add, 0.0, {}, lhs, parse_product() });
            }
            else if (accept('-')) {
                lhs = add({ Op::sub, 0.0, {}, lhs, parse_product() });
            }
            else {
                return lhs;
            }
        }
    }

    std::uint32_t parse_product()
    {
        auto lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = add({ Op::mul, 0.0, {}, lhs, parse_unary() });
            }
            else if (accept('/')) {
                lhs = add({ Op::div, 0.0, {}, lhs, parse_unary() });
            }
            else {
                return lhs;
            }
        }
    }

    std::uint32_t parse_unary()
    {
        if (accept('-')) {
            return add({ Op::neg, 0.0, {}, parse_unary(), 0 });
        }
        if (accept('+')) {
            return parse_unary();
        }
        return parse_primary();
    }

    std::uint32_t parse_primary()
    {
        skip_space();
        if (pos_ == text_.size()) {
            fail("unexpected end of expression");
        }
        auto const c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto const inner = parse_sum();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            auto const start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            auto const name = text_.substr(start, pos_ - start);
            if (!accept('(')) {
                return add({ Op::variable, 0.0, std::string(name), 0, 0 });
            }
            auto const fn = std::find_if(std::begin(kFunctions), std::end(kFunctions), [&](auto const& f) { return f.name == name; });
            if (fn == std::end(kFunctions)) {
                fail("unknown function '" + std::string(name) + "'");
            }
            auto const a = parse_sum();
            std::uint32_t b = 0;
            if (fn->arity == 2) {
                expect(',');
                b = parse_sum();
            }
            expect(')');
            return add({ fn->op, 0.0, {}, a, b });
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::uint32_t parse_number()
    {
        auto const start = pos_;
        auto digits = [&] {
            auto const from = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            return pos_ - from;
        };
        auto n = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) {
            fail("malformed number");
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            auto const mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                ++pos_;
            }
            if (digits() == 0) {
                pos_ = mark;
            }
        }
        double value = 0.0;
        auto const res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc {} || res.ptr != text_.data() + pos_) {
            fail("malformed number");
        }
        return add({ Op::constant, value, {}, 0, 0 });
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Expr expr_;
};

std::string Expr::to_string() const
{
    auto render = [this](auto const& self, std::uint32_t index) -> std::string {
        auto const& n = nodes_.at(index);
        switch (n.op) {
        case Op::constant:
            return format_number(n.value);
        case Op::variable:
            return n.name;
        default:
            break;
        }
        auto out = std::string(op_name(n.op)) + "(" + self(self, n.lhs);
        if (is_binary(n.op)) {
            out += "," + self(self, n.rhs);
        }
        return out + ")";
    };
    return nodes_.empty() ? std::string() : render(render, root_);
}

Expr parse_expr(std::string_view phenotype) { return ExprParser(phenotype).parse(); }

BoundExpr bind(Expr const& expr, std::span<std::string const> names)
{
    BoundExpr bound;
    std::size_t depth = 0;
    auto emit = [&](auto const& self, std::uint32_t index) -> void {
        auto const& n = expr.nodes().at(index);
        switch (n.op) {
        case Op::constant:
            bound.code_.push_back({ Op::constant, n.value, 0 });
            ++depth;
            break;
        case Op::variable: {
            auto const it = std::find(names.begin(), names.end(), n.name);
            if (it == names.end()) {
                throw Error(ErrorKind::data, "unresolved variable '" + n.name + "'");
            }
            bound.code_.push_back({ Op::variable, 0.0, static_cast<std::uint32_t>(it - names.begin()) });
            ++depth;
            break;
        }
        default:
            self(self, n.lhs);
            if (is_binary(n.op)) {
                self(self, n.rhs);
                --depth;
            }
            bound.code_.push_back({ n.op, 0.0, 0 });
            break;
        }
        bound.stack_depth_ = std::max(bound.stack_depth_, depth);
    };
    emit(emit, expr.root());
    return bound;
}

double BoundExpr::evaluate(std::span<double const> row) const
{
    // Expressions from depth-limited trees are small; a fixed buffer covers
    // them and the vector fallback covers the rest.
    constexpr std::size_t kInline = 64;
    double inline_stack[kInline] {};
    std::vector<double> heap_stack;
    double* stack = inline_stack;
    if (stack_depth_ > kInline) {
        heap_stack.resize(stack_depth_);
        stack = heap_stack.data();
    }
    std::size_t top = 0;
    for (auto const& in : code_) {
        switch (in.op) {
        case Op::constant: stack[top++] = in.value; break;
        case Op::variable: stack[top++] = row[in.var]; break;
        case Op::add: --top; stack[top - 1] += stack[top]; break;
        case Op::sub: --top; stack[top - 1] -= stack[top]; break;
        case Op::mul: --top; stack[top - 1] *= stack[top]; break;
        case Op::div: --top; stack[top - 1] /= stack[top]; break;
        case Op::pdiv: --top; stack[top - 1] = protected_div(stack[top - 1], stack[top]); break;
        case Op::neg: stack[top - 1] = -stack[top - 1]; break;
        case Op::sin: stack[top - 1] = std::sin(stack[top - 1]); break;
        case Op::cos: stack[top - 1] = std::cos(stack[top - 1]); break;
        case Op::exp: stack[top - 1] = std::exp(stack[top - 1]); break;
        case Op::plog: stack[top - 1] = protected_log(stack[top - 1]); break;
        case Op::psqrt: stack[top - 1] = protected_sqrt(stack[top - 1]); break;
        }
    }
    return stack[0];
}

double eval_expr(Expr const& expr, std::span<double const> row, std::span<std::string const> names)
{
    return bind(expr, names).evaluate(row);
}

double protected_div(double a, double b) noexcept { return std::fabs(b) <= 1e-9 ? 1.0 : a / b; }

double protected_log(double x) noexcept { return x == 0.0 ? 0.0 : std::log(std::fabs(x)); }

double protected_sqrt(double x) noexcept { return std::sqrt(std::fabs(x)); }

} // namespace fpge
