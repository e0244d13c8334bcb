// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#include "fpge/decoder/decoder.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace fpge {

namespace {

// Pending nonterminals in preorder: a stack with children pushed reversed.
class PreorderFrontier {
public:
    void push_children(DerivationTree const& tree, std::uint32_t first, std::uint32_t count)
    {
        for (auto i = first + count; i-- > first;) {
            if (tree.node(i).kind == Symbol::Kind::nonterminal) {
                pending_.push_back(i);
            }
        }
    }
    void push(std::uint32_t index) { pending_.push_back(index); }
    [[nodiscard]] bool empty() const noexcept { return pending_.empty(); }
    std::uint32_t pop()
    {
        auto const top = pending_.back();
        pending_.pop_back();
        return top;
    }

private:
    std::vector<std::uint32_t> pending_;
};

// Pending nonterminals in level order: FIFO.
class LevelFrontier {
public:
    void push_children(DerivationTree const& tree, std::uint32_t first, std::uint32_t count)
    {
        for (auto i = first; i < first + count; ++i) {
            if (tree.node(i).kind == Symbol::Kind::nonterminal) {
                pending_.push_back(i);
            }
        }
    }
    void push(std::uint32_t index) { pending_.push_back(index); }
    [[nodiscard]] bool empty() const noexcept { return pending_.empty(); }
    std::uint32_t pop()
    {
        auto const front = pending_.front();
        pending_.pop_front();
        return front;
    }

private:
    std::deque<std::uint32_t> pending_;
};

// Chooser: called with the production count k of the node being expanded,
// returns the chosen index or nullopt when the genotype is exhausted.
template <typename Frontier, typename Chooser, typename Finish>
DecodeOutcome expand_tree(Grammar const& grammar, DecodeLimits const& limits, Chooser&& choose, Finish&& finish)
{
    check_limits(grammar, limits);
    DecodeOutcome outcome { InvalidDecode { InvalidReason::depth_exceeded }, {} };
    DerivationTree tree(grammar);
    Frontier frontier;
    frontier.push(0);
    while (!frontier.empty()) {
        auto const index = frontier.pop();
        auto const& node = tree.node(index);
        auto const& rule = grammar.rule(node.rule);
        auto const depth = node.depth;
        auto const choice = choose(rule.size());
        if (!choice) {
            outcome.result = InvalidDecode { InvalidReason::codons_exhausted };
            return outcome;
        }
        outcome.choices.push_back(*choice);
        auto const width = static_cast<std::uint32_t>(rule.productions[*choice].symbols.size());
        if (depth + 1 > limits.max_depth) {
            outcome.result = InvalidDecode { InvalidReason::depth_exceeded };
            return outcome;
        }
        if (tree.node_count() + width > limits.max_nodes) {
            outcome.result = InvalidDecode { InvalidReason::nodes_exceeded };
            return outcome;
        }
        auto const first = tree.expand(index, *choice);
        frontier.push_children(tree, first, width);
    }
    outcome.result = ValidDecode { std::move(tree), finish() };
    return outcome;
}

} // namespace

std::string_view to_string(DecodeOrder order) noexcept
{
    return order == DecodeOrder::dfs ? "dfs" : "bfs";
}

DecodeOrder parse_decode_order(std::string_view text)
{
    if (text == "dfs") {
        return DecodeOrder::dfs;
    }
    if (text == "bfs") {
        return DecodeOrder::bfs;
    }
    throw std::invalid_argument("unknown decode order '" + std::string(text) + "' (expected dfs or bfs)");
}

std::string_view to_string(InvalidReason reason) noexcept
{
    switch (reason) {
    case InvalidReason::depth_exceeded:
        return "depth";
    case InvalidReason::nodes_exceeded:
        return "nodes";
    case InvalidReason::codons_exhausted:
        return "codons";
    }
    return "unknown";
}

std::optional<InvalidReason> parse_invalid_reason(std::string_view text) noexcept
{
    for (auto r : { InvalidReason::depth_exceeded, InvalidReason::nodes_exceeded, InvalidReason::codons_exhausted }) {
        if (to_string(r) == text) {
            return r;
        }
    }
    return std::nullopt;
}

DerivationTree::DerivationTree(Grammar const& grammar)
    : grammar_(&grammar)
{
    nodes_.push_back(Node { Symbol::Kind::nonterminal, 0, grammar.head().name });
}

std::span<DerivationTree::Node const> DerivationTree::children(std::uint32_t index) const
{
    auto const& n = nodes_.at(index);
    return std::span<Node const>(nodes_).subspan(n.first_child, n.child_count);
}

std::uint32_t DerivationTree::depth() const noexcept
{
    std::uint32_t d = 0;
    for (auto const& n : nodes_) {
        d = std::max(d, n.depth);
    }
    return d;
}

bool DerivationTree::complete() const noexcept
{
    return !nodes_.empty() && std::none_of(nodes_.begin(), nodes_.end(), [](Node const& n) {
        return n.kind == Symbol::Kind::nonterminal && n.production == kUnexpanded;
    });
}

std::uint32_t DerivationTree::expand(std::uint32_t index, std::uint32_t production)
{
    auto& parent = nodes_.at(index);
    if (parent.kind != Symbol::Kind::nonterminal || parent.production != kUnexpanded) {
        throw std::logic_error("DerivationTree::expand: node is not an open nonterminal");
    }
    auto const& symbols = grammar_->rule(parent.rule).productions.at(production).symbols;
    auto const first = static_cast<std::uint32_t>(nodes_.size());
    auto const depth = parent.depth + 1;
    parent.production = static_cast<std::int32_t>(production);
    parent.first_child = first;
    parent.child_count = static_cast<std::uint32_t>(symbols.size());
    // `parent` may dangle after this point.
    for (auto const& s : symbols) {
        nodes_.push_back(Node { s.kind, s.rule, s.text, kUnexpanded, 0, 0, depth });
    }
    return first;
}

void check_limits(Grammar const& grammar, DecodeLimits const& limits)
{
    auto const needed = grammar.min_depth(0);
    if (limits.max_depth < needed) {
        throw std::invalid_argument("decode limits: max depth " + std::to_string(limits.max_depth)
            + " is below the minimum completion depth " + std::to_string(needed) + " of the head rule");
    }
    if (limits.max_nodes == 0) {
        throw std::invalid_argument("decode limits: max nodes must be positive");
    }
}

DecodeOutcome dfs_decode(UnitFraction const& val, Grammar const& grammar, DecodeLimits const& limits)
{
    auto residual = val;
    return expand_tree<PreorderFrontier>(
        grammar, limits,
        [&](std::uint32_t k) { return std::optional<std::uint32_t>(residual.split_in_place(k)); },
        [&] { return residual; });
}

DecodeOutcome bfs_decode(UnitFraction const& val, Grammar const& grammar, DecodeLimits const& limits)
{
    auto residual = val;
    return expand_tree<LevelFrontier>(
        grammar, limits,
        [&](std::uint32_t k) { return std::optional<std::uint32_t>(residual.split_in_place(k)); },
        [&] { return residual; });
}

DecodeOutcome decode(UnitFraction const& val, Grammar const& grammar, DecodeOrder order, DecodeLimits const& limits)
{
    return order == DecodeOrder::dfs ? dfs_decode(val, grammar, limits) : bfs_decode(val, grammar, limits);
}

DecodeOutcome codon_decode(std::span<std::uint32_t const> codons, Grammar const& grammar, DecodeLimits const& limits)
{
    std::size_t next = 0;
    return expand_tree<PreorderFrontier>(
        grammar, limits,
        [&](std::uint32_t k) -> std::optional<std::uint32_t> {
            if (next == codons.size()) {
                return std::nullopt;
            }
            return codons[next++] % k;
        },
        // Codon genomes have no residual; report zero.
        [] { return UnitFraction(1); });
}

std::string render(DerivationTree const& tree)
{
    if (!tree.complete()) {
        throw std::invalid_argument("render: derivation tree is incomplete");
    }
    std::string out;
    std::vector<std::uint32_t> stack { 0 };
    while (!stack.empty()) {
        auto const index = stack.back();
        stack.pop_back();
        auto const& n = tree.node(index);
        if (n.kind == Symbol::Kind::terminal) {
            out.append(n.text);
            continue;
        }
        for (auto i = n.first_child + n.child_count; i-- > n.first_child;) {
            stack.push_back(i);
        }
    }
    return out;
}

std::size_t node_count(DerivationTree const& tree) noexcept { return tree.node_count(); }

} // namespace fpge
