// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fpge {

struct Symbol {
    enum class Kind : std::uint8_t { terminal, nonterminal };

    Kind kind = Kind::terminal;
    // Literal characters for terminals, rule name for nonterminals.
    std::string text;
    // Index of the referenced rule; filled in by Grammar validation.
    std::uint32_t rule = 0;

    [[nodiscard]] bool is_terminal() const noexcept { return kind == Kind::terminal; }

    static Symbol terminal(std::string text) { return { Kind::terminal, std::move(text), 0 }; }
    static Symbol nonterminal(std::string name) { return { Kind::nonterminal, std::move(name), 0 }; }

    friend bool operator==(Symbol const&, Symbol const&) = default;
};

struct Production {
    std::vector<Symbol> symbols;

    [[nodiscard]] bool has_nonterminal() const noexcept;

    friend bool operator==(Production const&, Production const&) = default;
};

struct Rule {
    std::string name;
    // Source order is significant: it is the index space of every split.
    std::vector<Production> productions;

    [[nodiscard]] std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(productions.size()); }

    friend bool operator==(Rule const&, Rule const&) = default;
};

// An ordered, validated BNF grammar. The first rule is the head. Every
// nonterminal resolves to a rule and every rule has a finite derivation.
class Grammar {
public:
    // Validates and resolves; throws fpge::Error(ErrorKind::grammar).
    explicit Grammar(std::vector<Rule> rules);

    [[nodiscard]] std::vector<Rule> const& rules() const noexcept { return rules_; }
    [[nodiscard]] Rule const& rule(std::uint32_t index) const { return rules_.at(index); }
    [[nodiscard]] Rule const& head() const noexcept { return rules_.front(); }
    [[nodiscard]] std::optional<std::uint32_t> find(std::string_view name) const noexcept;
    // Depth of the shallowest complete derivation tree rooted at the rule,
    // counting the rule node itself and its terminal leaves.
    [[nodiscard]] std::uint32_t min_depth(std::uint32_t rule) const { return min_depth_.at(rule); }
    [[nodiscard]] std::size_t production_count() const noexcept;

    friend bool operator==(Grammar const& a, Grammar const& b) { return a.rules_ == b.rules_; }

private:
    std::vector<Rule> rules_;
    std::vector<std::uint32_t> min_depth_;
};

Grammar parse_bnf(std::string_view text);
Grammar load_bnf(std::filesystem::path const& path);

// Canonical text form: one line per rule, `<a> ::= p0 | p1`, with `|` and
// `\` inside terminals escaped. parse_bnf(serialize_bnf(g)) == g.
std::string serialize_bnf(Grammar const& grammar);

// Hex FNV-1a of the canonical form; identifies a grammar in output metadata.
std::string grammar_digest(Grammar const& grammar);

std::uint32_t min_completion_depth(Grammar const& grammar, std::string_view rule);

// Moves every production of `rule` that contains a nonterminal into a new
// rule `new_name`, and puts the single production <new_name> first in
// `rule` ahead of its terminal-only productions.
Grammar factor_rule(Grammar const& grammar, std::string_view rule, std::string_view new_name);

} // namespace fpge
