// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fpge/grammar/grammar.hpp"
#include "fpge/precision/unit_fraction.hpp"

namespace fpge {

enum class DecodeOrder : std::uint8_t { dfs, bfs };

std::string_view to_string(DecodeOrder order) noexcept;
// Accepts "dfs" and "bfs"; throws std::invalid_argument otherwise.
DecodeOrder parse_decode_order(std::string_view text);

struct DecodeLimits {
    // Root is depth 1; a node at max_depth may not have children.
    std::uint32_t max_depth = 15;
    std::uint32_t max_nodes = 2000;
};

enum class InvalidReason : std::uint8_t { depth_exceeded, nodes_exceeded, codons_exhausted };

std::string_view to_string(InvalidReason reason) noexcept;
std::optional<InvalidReason> parse_invalid_reason(std::string_view text) noexcept;

// Derivation tree in a flat arena. Node 0 is the root; the children of a
// node are contiguous. Terminal and rule-name text is borrowed from the
// grammar, which must outlive the tree.
class DerivationTree {
public:
    static constexpr std::int32_t kUnexpanded = -1;

    struct Node {
        Symbol::Kind kind;
        std::uint32_t rule; // meaningful for nonterminals
        std::string_view text;
        std::int32_t production = kUnexpanded;
        std::uint32_t first_child = 0;
        std::uint32_t child_count = 0;
        std::uint32_t depth = 1;
    };

    DerivationTree() = default;
    explicit DerivationTree(Grammar const& grammar);

    [[nodiscard]] std::span<Node const> nodes() const noexcept { return nodes_; }
    [[nodiscard]] Node const& node(std::uint32_t index) const { return nodes_.at(index); }
    [[nodiscard]] std::span<Node const> children(std::uint32_t index) const;
    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::uint32_t depth() const noexcept;
    // True when no nonterminal leaf is left unexpanded.
    [[nodiscard]] bool complete() const noexcept;

    // Appends the children for `production` of node `index`; returns the
    // index of the first child.
    std::uint32_t expand(std::uint32_t index, std::uint32_t production);

private:
    Grammar const* grammar_ = nullptr;
    std::vector<Node> nodes_;
};

struct ValidDecode {
    DerivationTree tree;
    UnitFraction final_residual;
};

struct InvalidDecode {
    InvalidReason reason;
};

struct DecodeOutcome {
    std::variant<ValidDecode, InvalidDecode> result;
    // Production index chosen at every expansion, in consumption order.
    std::vector<std::uint32_t> choices;

    [[nodiscard]] bool valid() const noexcept { return std::holds_alternative<ValidDecode>(result); }
    [[nodiscard]] ValidDecode const& as_valid() const { return std::get<ValidDecode>(result); }
    [[nodiscard]] InvalidReason reason() const { return std::get<InvalidDecode>(result).reason; }
};

// Threads one residual stream through the tree in preorder (dfs) or level
// order (bfs). Throws std::invalid_argument when the limits cannot admit
// even the shallowest complete tree of the head rule.
DecodeOutcome dfs_decode(UnitFraction const& val, Grammar const& grammar, DecodeLimits const& limits);
DecodeOutcome bfs_decode(UnitFraction const& val, Grammar const& grammar, DecodeLimits const& limits);
DecodeOutcome decode(UnitFraction const& val, Grammar const& grammar, DecodeOrder order, DecodeLimits const& limits);

// Classic integer-codon mapping: leftmost derivation, one codon per
// expansion (single-production rules included), index = codon mod k, no
// wrapping.
DecodeOutcome codon_decode(std::span<std::uint32_t const> codons, Grammar const& grammar, DecodeLimits const& limits);

// Terminal text in left-to-right leaf order. Requires a complete tree.
std::string render(DerivationTree const& tree);
std::size_t node_count(DerivationTree const& tree) noexcept;

void check_limits(Grammar const& grammar, DecodeLimits const& limits);

} // namespace fpge
