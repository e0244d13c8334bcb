// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#include "fpge/grammar/grammar.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "fpge/error.hpp"

namespace fpge {

namespace {

constexpr auto kUnreached = std::numeric_limits<std::uint32_t>::max();

[[noreturn]] void grammar_error(std::string const& what)
{
    throw Error(ErrorKind::grammar, what);
}

[[noreturn]] void syntax_error(int line, std::string const& what)
{
    grammar_error("line " + std::to_string(line) + ": " + what);
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s)
{
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

bool valid_rule_name(std::string_view name)
{
    return !name.empty() && name.find_first_of("<>\n") == std::string_view::npos;
}

// Right-hand side text of one rule, gathered across continuation lines,
// with the source line of every character for diagnostics.
struct RuleSource {
    std::string name;
    int line = 0;
    std::string rhs;
    std::vector<int> lines;

    void append(std::string_view text, int line_no)
    {
        if (!rhs.empty()) {
            rhs.push_back(' ');
            lines.push_back(line_no);
        }
        rhs.append(text);
        lines.insert(lines.end(), text.size(), line_no);
    }
};

Production parse_production(std::string_view text, int line)
{
    // text is already trimmed and unescaping happens here, so an escaped
    // character is never mistaken for markup.
    Production production;
    std::string terminal;
    auto flush = [&] {
        if (!terminal.empty()) {
            production.symbols.push_back(Symbol::terminal(std::move(terminal)));
            terminal.clear();
        }
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        auto const c = text[i];
        if (c == '\\' && i + 1 < text.size() && (text[i + 1] == '|' || text[i + 1] == '\\')) {
            terminal.push_back(text[++i]);
            continue;
        }
        if (c == '<') {
            auto const close = text.find_first_of("<>", i + 1);
            if (close != std::string_view::npos && text[close] == '>') {
                auto const name = text.substr(i + 1, close - i - 1);
                if (valid_rule_name(name)) {
                    flush();
                    production.symbols.push_back(Symbol::nonterminal(std::string(name)));
                    i = close;
                    continue;
                }
            }
        }
        terminal.push_back(c);
    }
    flush();
    if (production.symbols.empty()) {
        syntax_error(line, "empty production");
    }
    return production;
}

Rule parse_rule(RuleSource const& source)
{
    Rule rule { source.name, {} };
    auto const& rhs = source.rhs;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= rhs.size(); ++i) {
        if (i < rhs.size() && rhs[i] == '\\' && i + 1 < rhs.size()) {
            ++i;
            continue;
        }
        if (i == rhs.size() || rhs[i] == '|') {
            auto const line = start < source.lines.size() ? source.lines[start] : source.line;
            rule.productions.push_back(parse_production(trim(std::string_view(rhs).substr(start, i - start)), line));
            start = i + 1;
        }
    }
    return rule;
}

std::string escape_terminal(std::string_view text)
{
    std::string out;
    for (auto c : text) {
        if (c == '|' || c == '\\') {
            out.push_back('\\');
        }
        out.push_back(c);
    }
    return out;
}

} // namespace

bool Production::has_nonterminal() const noexcept
{
    return std::any_of(symbols.begin(), symbols.end(), [](Symbol const& s) { return !s.is_terminal(); });
}

Grammar::Grammar(std::vector<Rule> rules)
    : rules_(std::move(rules))
{
    if (rules_.empty()) {
        grammar_error("empty grammar");
    }
    std::unordered_map<std::string, std::uint32_t> index;
    for (std::uint32_t r = 0; r < rules_.size(); ++r) {
        auto const& rule = rules_[r];
        if (!valid_rule_name(rule.name)) {
            grammar_error("invalid rule name '" + rule.name + "'");
        }
        if (rule.productions.empty()) {
            grammar_error("rule <" + rule.name + "> has no productions");
        }
        if (!index.emplace(rule.name, r).second) {
            grammar_error("duplicate rule <" + rule.name + ">");
        }
    }
    for (auto& rule : rules_) {
        for (auto& production : rule.productions) {
            if (production.symbols.empty()) {
                grammar_error("rule <" + rule.name + "> has an empty production");
            }
            for (auto& symbol : production.symbols) {
                if (symbol.is_terminal()) {
                    if (symbol.text.empty()) {
                        grammar_error("rule <" + rule.name + "> has an empty terminal");
                    }
                    continue;
                }
                auto const it = index.find(symbol.text);
                if (it == index.end()) {
                    grammar_error("undefined nonterminal <" + symbol.text + "> in rule <" + rule.name + ">");
                }
                symbol.rule = it->second;
            }
        }
    }

    // Least fixed point of depth(r) = 1 + min_p max_{s in p} depth(s),
    // with terminals at depth 1. Rules left unreached are non-productive.
    min_depth_.assign(rules_.size(), kUnreached);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t r = 0; r < rules_.size(); ++r) {
            for (auto const& production : rules_[r].productions) {
                std::uint32_t deepest = 1;
                for (auto const& symbol : production.symbols) {
                    auto const d = symbol.is_terminal() ? 1U : min_depth_[symbol.rule];
                    deepest = std::max(deepest, d);
                }
                if (deepest != kUnreached && deepest + 1 < min_depth_[r]) {
                    min_depth_[r] = deepest + 1;
                    changed = true;
                }
            }
        }
    }
    for (std::size_t r = 0; r < rules_.size(); ++r) {
        if (min_depth_[r] == kUnreached) {
            grammar_error("non-productive rule <" + rules_[r].name + ">: no finite derivation exists");
        }
    }
}

std::optional<std::uint32_t> Grammar::find(std::string_view name) const noexcept
{
    for (std::uint32_t r = 0; r < rules_.size(); ++r) {
        if (rules_[r].name == name) {
            return r;
        }
    }
    return std::nullopt;
}

std::size_t Grammar::production_count() const noexcept
{
    std::size_t n = 0;
    for (auto const& rule : rules_) {
        n += rule.productions.size();
    }
    return n;
}

Grammar parse_bnf(std::string_view text)
{
    std::vector<RuleSource> sources;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto const eol = text.find('\n');
        auto line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view {} : text.substr(eol + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        auto const content = trim(line);
        if (content.empty() || content.front() == '#') {
            continue;
        }
        auto const def = line.find("::=");
        if (def == std::string_view::npos) {
            if (sources.empty()) {
                syntax_error(line_no, "continuation line before any rule");
            }
            sources.back().append(content, line_no);
            continue;
        }
        auto const lhs = trim(line.substr(0, def));
        if (lhs.size() < 3 || lhs.front() != '<' || lhs.back() != '>' || !valid_rule_name(lhs.substr(1, lhs.size() - 2))) {
            syntax_error(line_no, "expected <name> before '::='");
        }
        RuleSource source;
        source.name = std::string(lhs.substr(1, lhs.size() - 2));
        source.line = line_no;
        source.append(trim(line.substr(def + 3)), line_no);
        sources.push_back(std::move(source));
    }

    std::vector<Rule> rules;
    rules.reserve(sources.size());
    for (auto const& source : sources) {
        rules.push_back(parse_rule(source));
    }
    return Grammar(std::move(rules));
}

Grammar load_bnf(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::grammar, "cannot open grammar file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_bnf(buffer.str());
    }
    catch (Error const& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

std::string serialize_bnf(Grammar const& grammar)
{
    std::string out;
    for (auto const& rule : grammar.rules()) {
        out += "<" + rule.name + "> ::=";
        for (std::size_t p = 0; p < rule.productions.size(); ++p) {
            out += p == 0 ? " " : " | ";
            for (auto const& symbol : rule.productions[p].symbols) {
                out += symbol.is_terminal() ? escape_terminal(symbol.text) : "<" + symbol.text + ">";
            }
        }
        out += '\n';
    }
    return out;
}

std::string grammar_digest(Grammar const& grammar)
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (auto c : serialize_bnf(grammar)) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::uint32_t min_completion_depth(Grammar const& grammar, std::string_view rule)
{
    auto const index = grammar.find(rule);
    if (!index) {
        throw std::invalid_argument("min_completion_depth: unknown rule <" + std::string(rule) + ">");
    }
    return grammar.min_depth(*index);
}

Grammar factor_rule(Grammar const& grammar, std::string_view rule, std::string_view new_name)
{
    auto const index = grammar.find(rule);
    if (!index) {
        throw Error(ErrorKind::grammar, "factor: unknown rule <" + std::string(rule) + ">");
    }
    if (!valid_rule_name(new_name) || grammar.find(new_name)) {
        throw Error(ErrorKind::grammar, "factor: rule name <" + std::string(new_name) + "> is invalid or already used");
    }
    Rule terminal_part { std::string(rule), {} };
    Rule recursive_part { std::string(new_name), {} };
    for (auto const& production : grammar.rule(*index).productions) {
        (production.has_nonterminal() ? recursive_part : terminal_part).productions.push_back(production);
    }
    if (recursive_part.productions.empty() || terminal_part.productions.empty()) {
        throw Error(ErrorKind::grammar,
            "factor: rule <" + std::string(rule) + "> needs both terminal-only productions and productions with nonterminals");
    }
    terminal_part.productions.insert(terminal_part.productions.begin(),
        Production { { Symbol::nonterminal(std::string(new_name)) } });

    std::vector<Rule> rules;
    rules.reserve(grammar.rules().size() + 1);
    for (std::uint32_t r = 0; r < grammar.rules().size(); ++r) {
        if (r == *index) {
            rules.push_back(std::move(terminal_part));
            rules.push_back(std::move(recursive_part));
        }
        else {
            rules.push_back(grammar.rule(r));
        }
    }
    return Grammar(std::move(rules));
}

} // namespace fpge
