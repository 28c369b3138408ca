// agcirc/grammar.hpp - attribute grammar model and structural validation
//
// A grammar is a list of symbols (terminals carry no attributes), a list of
// productions with their dependency edges D(p), and a start symbol.  Symbols
// are referenced by index into AttributeGrammar::symbols; attributes of a
// symbol are referenced by name, and their declaration order (inherited
// first, then synthesized) fixes every index used by the graph algebra.
#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace agcirc {

enum class SymbolKind { nonterminal, terminal };

struct Symbol {
  std::string name;
  SymbolKind kind = SymbolKind::nonterminal;
  std::vector<std::string> inh;
  std::vector<std::string> syn;

  [[nodiscard]] bool is_nonterminal() const noexcept { return kind == SymbolKind::nonterminal; }
  [[nodiscard]] std::size_t attribute_count() const noexcept { return inh.size() + syn.size(); }

  /// Index of `attr` in the combined list inh ++ syn.
  [[nodiscard]] std::optional<std::size_t> attribute_index(std::string_view attr) const {
    for (std::size_t i = 0; i < inh.size(); ++i)
      if (inh[i] == attr) return i;
    for (std::size_t i = 0; i < syn.size(); ++i)
      if (syn[i] == attr) return inh.size() + i;
    return std::nullopt;
  }
  [[nodiscard]] bool is_inherited(std::string_view attr) const {
    return std::find(inh.begin(), inh.end(), attr) != inh.end();
  }
  [[nodiscard]] bool is_synthesized(std::string_view attr) const {
    return std::find(syn.begin(), syn.end(), attr) != syn.end();
  }
  [[nodiscard]] const std::string& attribute_name(std::size_t combined) const {
    return combined < inh.size() ? inh[combined] : syn[combined - inh.size()];
  }

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// An attribute at position 0 (the left-hand side) or i >= 1 (the i-th rhs symbol).
struct AttributeOccurrence {
  std::size_t position = 0;
  std::string attr;

  friend bool operator==(const AttributeOccurrence&, const AttributeOccurrence&) = default;
  friend auto operator<=>(const AttributeOccurrence&, const AttributeOccurrence&) = default;
};

struct DependencyEdge {
  AttributeOccurrence src;
  AttributeOccurrence dst;

  friend bool operator==(const DependencyEdge&, const DependencyEdge&) = default;
  friend auto operator<=>(const DependencyEdge&, const DependencyEdge&) = default;
};

struct Production {
  std::string id;
  std::size_t lhs = 0;
  std::vector<std::size_t> rhs;
  std::vector<DependencyEdge> edges;

  [[nodiscard]] bool is_epsilon() const noexcept { return rhs.empty(); }
  /// Symbol at `position` (0 = lhs).
  [[nodiscard]] std::size_t symbol_at(std::size_t position) const {
    return position == 0 ? lhs : rhs.at(position - 1);
  }

  friend bool operator==(const Production&, const Production&) = default;
};

struct AttributeGrammar {
  std::vector<Symbol> symbols;
  std::vector<Production> productions;
  std::size_t start = 0;

  [[nodiscard]] std::optional<std::size_t> find_symbol(std::string_view name) const {
    for (std::size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i].name == name) return i;
    return std::nullopt;
  }
  [[nodiscard]] std::optional<std::size_t> find_production(std::string_view id) const {
    for (std::size_t i = 0; i < productions.size(); ++i)
      if (productions[i].id == id) return i;
    return std::nullopt;
  }
  [[nodiscard]] std::vector<std::size_t> nonterminals() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i].is_nonterminal()) out.push_back(i);
    return out;
  }
  [[nodiscard]] std::vector<std::size_t> productions_of(std::size_t lhs) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < productions.size(); ++i)
      if (productions[i].lhs == lhs) out.push_back(i);
    return out;
  }

  friend bool operator==(const AttributeGrammar&, const AttributeGrammar&) = default;
};

/// Thrown for malformed grammar sources and invalid grammars handed to a checker.
class GrammarError : public std::runtime_error {
 public:
  GrammarError(std::string code, const std::string& message, std::size_t line = 0,
               std::size_t column = 0)
      : std::runtime_error(format(code, message, line, column)),
        code_(std::move(code)),
        line_(line),
        column_(column) {}

  [[nodiscard]] const std::string& code() const noexcept { return code_; }
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& code, const std::string& message,
                            std::size_t line, std::size_t column) {
    std::string out = code;
    if (line != 0) out += " at " + std::to_string(line) + ":" + std::to_string(column);
    return out + ": " + message;
  }

  std::string code_;
  std::size_t line_;
  std::size_t column_;
};

struct Diagnostic {
  std::string code;
  std::string message;
  std::string location;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ValidationReport {
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;

  [[nodiscard]] bool ok() const noexcept { return errors.empty(); }
  [[nodiscard]] bool has_error(std::string_view code) const {
    return std::any_of(errors.begin(), errors.end(), [&](const Diagnostic& d) { return d.code == code; });
  }
  [[nodiscard]] bool has_warning(std::string_view code) const {
    return std::any_of(warnings.begin(), warnings.end(),
                       [&](const Diagnostic& d) { return d.code == code; });
  }
};

/// Nonterminals that derive at least one finite tree.
inline std::vector<bool> productive_nonterminals(const AttributeGrammar& g) {
  std::vector<bool> productive(g.symbols.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      if (p.lhs >= g.symbols.size() || productive[p.lhs]) continue;
      bool all = std::all_of(p.rhs.begin(), p.rhs.end(), [&](std::size_t s) {
        return s < g.symbols.size() && (!g.symbols[s].is_nonterminal() || productive[s]);
      });
      if (all) productive[p.lhs] = changed = true;
    }
  }
  return productive;
}

/// Productions that can occur in some finite tree rooted at the start symbol.
inline std::vector<bool> useful_productions(const AttributeGrammar& g) {
  const auto productive = productive_nonterminals(g);
  auto usable = [&](const Production& p) {
    return productive[p.lhs] && std::all_of(p.rhs.begin(), p.rhs.end(), [&](std::size_t s) {
             return !g.symbols[s].is_nonterminal() || productive[s];
           });
  };
  std::vector<bool> reached(g.symbols.size(), false);
  std::vector<std::size_t> stack;
  if (g.start < g.symbols.size() && productive[g.start]) {
    reached[g.start] = true;
    stack.push_back(g.start);
  }
  while (!stack.empty()) {
    std::size_t x = stack.back();
    stack.pop_back();
    for (const auto& p : g.productions) {
      if (p.lhs != x || !usable(p)) continue;
      for (std::size_t s : p.rhs)
        if (g.symbols[s].is_nonterminal() && !reached[s]) {
          reached[s] = true;
          stack.push_back(s);
        }
    }
  }
  std::vector<bool> out(g.productions.size(), false);
  for (std::size_t i = 0; i < g.productions.size(); ++i)
    out[i] = reached[g.productions[i].lhs] && usable(g.productions[i]);
  return out;
}

inline ValidationReport validate(const AttributeGrammar& g) {
  ValidationReport report;
  auto error = [&](std::string code, std::string message, std::string location) {
    report.errors.push_back({std::move(code), std::move(message), std::move(location)});
  };

  std::set<std::string> symbol_names;
  for (const auto& sym : g.symbols) {
    const std::string where = "symbol " + sym.name;
    if (sym.name.empty()) error("E_EMPTY_NAME", "symbol with empty name", where);
    if (!symbol_names.insert(sym.name).second)
      error("E_DUPLICATE", "symbol '" + sym.name + "' declared twice", where);
    if (!sym.is_nonterminal() && sym.attribute_count() != 0)
      error("E_TERMINAL_ATTRIBUTES", "terminal '" + sym.name + "' declares attributes", where);
    std::set<std::string> attrs;
    for (const auto* list : {&sym.inh, &sym.syn})
      for (const auto& a : *list) {
        if (a.empty()) error("E_EMPTY_NAME", "attribute with empty name", where);
        if (!attrs.insert(a).second)
          error("E_DUPLICATE", "attribute '" + a + "' declared twice on '" + sym.name + "'", where);
      }
  }

  if (g.start >= g.symbols.size() || !g.symbols[g.start].is_nonterminal())
    error("E_START", "start symbol is not a declared nonterminal", "grammar");

  std::set<std::string> production_ids;
  for (const auto& p : g.productions) {
    const std::string where = "production " + p.id;
    if (p.id.empty()) error("E_EMPTY_NAME", "production with empty id", where);
    if (!production_ids.insert(p.id).second)
      error("E_DUPLICATE", "production id '" + p.id + "' used twice", where);
    if (p.lhs >= g.symbols.size()) {
      error("E_UNDECLARED", "lhs refers to an undeclared symbol", where);
      continue;
    }
    if (!g.symbols[p.lhs].is_nonterminal())
      error("E_LHS_TERMINAL", "lhs '" + g.symbols[p.lhs].name + "' is a terminal", where);
    bool rhs_ok = true;
    for (std::size_t s : p.rhs)
      if (s >= g.symbols.size()) {
        error("E_UNDECLARED", "rhs refers to an undeclared symbol", where);
        rhs_ok = false;
      }
    if (!rhs_ok) continue;

    for (std::size_t e = 0; e < p.edges.size(); ++e) {
      const auto& edge = p.edges[e];
      const std::string ewhere = where + ", edge " + std::to_string(e + 1);
      bool occurrences_ok = true;
      for (const auto* occ : {&edge.src, &edge.dst}) {
        if (occ->position > p.rhs.size()) {
          error("E_OCCURRENCE", "position " + std::to_string(occ->position) + " out of range", ewhere);
          occurrences_ok = false;
        } else if (!g.symbols[p.symbol_at(occ->position)].attribute_index(occ->attr)) {
          error("E_UNDECLARED",
                "'" + occ->attr + "' is not an attribute of '" +
                    g.symbols[p.symbol_at(occ->position)].name + "'",
                ewhere);
          occurrences_ok = false;
        }
      }
      if (!occurrences_ok) continue;
      const Symbol& target = g.symbols[p.symbol_at(edge.dst.position)];
      bool defined = edge.dst.position == 0 ? target.is_synthesized(edge.dst.attr)
                                            : target.is_inherited(edge.dst.attr);
      if (!defined)
        error("E_TARGET",
              "edge target must be a synthesized attribute of the lhs or an inherited "
              "attribute of an rhs symbol",
              ewhere);
    }
  }

  if (report.errors.empty()) {
    const auto productive = productive_nonterminals(g);
    for (std::size_t i = 0; i < g.symbols.size(); ++i)
      if (g.symbols[i].is_nonterminal() && !productive[i])
        report.warnings.push_back({"W_NONPRODUCTIVE",
                                   "nonterminal '" + g.symbols[i].name + "' derives no finite tree",
                                   "symbol " + g.symbols[i].name});
  }
  return report;
}

/// Throws GrammarError with the first validation error, if any.
inline void require_valid(const AttributeGrammar& g) {
  auto report = validate(g);
  if (!report.ok()) {
    const auto& e = report.errors.front();
    throw GrammarError(e.code, e.message + " (" + e.location + ")");
  }
}

}  // namespace agcirc
