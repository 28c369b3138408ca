// agcirc/grammar_io.hpp - reading and writing the line-oriented grammar format
//
//   # comment
//   nonterminal A inh(i) syn(s)
//   terminal t
//   start S
//   production p1: S -> A t { A.s -> A.i; A.s -> S.v; }
//   production p2: A -> ; { A.i -> A.s; }
//
// An occurrence is `Name.attr`.  When Name occurs more than once among
// lhs, rhs1 .. rhsk it must be written `Name[n].attr`, where n counts those
// occurrences from 1 with the lhs first.
#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "agcirc/grammar.hpp"

namespace agcirc {

namespace detail {

struct Token {
  enum class Kind { ident, number, punct, end } kind = Kind::end;
  std::string text;
  std::size_t column = 0;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> tokenize_line(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.column = i + 1;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < line.size() && ident_char(line[j])) ++j;
      t.kind = Token::Kind::ident;
      t.text = std::string(line.substr(i, j - i));
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      t.kind = Token::Kind::number;
      t.text = std::string(line.substr(i, j - i));
      i = j;
    } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      t.kind = Token::Kind::punct;
      t.text = "->";
      i += 2;
    } else if (std::string_view("():;,{}.[]").find(c) != std::string_view::npos) {
      t.kind = Token::Kind::punct;
      t.text = std::string(1, c);
      ++i;
    } else {
      throw GrammarError("E_SYNTAX", std::string("unexpected character '") + c + "'", line_no, i + 1);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.column = line.size() + 1;
  out.push_back(end);
  return out;
}

class LineCursor {
 public:
  LineCursor(std::vector<Token> tokens, std::size_t line) : tokens_(std::move(tokens)), line_(line) {}

  const Token& peek() const { return tokens_[pos_]; }
  bool at_end() const { return peek().kind == Token::Kind::end; }
  bool peek_punct(std::string_view p) const {
    return peek().kind == Token::Kind::punct && peek().text == p;
  }
  bool accept_punct(std::string_view p) {
    if (!peek_punct(p)) return false;
    ++pos_;
    return true;
  }
  const Token& expect_punct(std::string_view p) {
    if (!peek_punct(p)) fail("expected '" + std::string(p) + "'");
    return tokens_[pos_++];
  }
  const Token& expect_ident(std::string_view what) {
    if (peek().kind != Token::Kind::ident) fail("expected " + std::string(what));
    return tokens_[pos_++];
  }
  const Token& expect_number() {
    if (peek().kind != Token::Kind::number) fail("expected a number");
    return tokens_[pos_++];
  }
  void expect_end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw GrammarError("E_SYNTAX", message, line_, peek().column);
  }
  std::size_t line() const { return line_; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

struct RawOccurrence {
  std::string symbol;
  std::size_t index = 0;  // 0 when written without [n]
  std::string attr;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct RawProduction {
  std::string id;
  std::string lhs;
  std::vector<std::pair<std::string, std::size_t>> rhs;  // name, column
  std::vector<std::pair<RawOccurrence, RawOccurrence>> edges;
  std::size_t line = 0;
  std::size_t lhs_column = 0;
};

inline std::vector<std::string> parse_attribute_list(LineCursor& cur) {
  std::vector<std::string> out;
  cur.expect_punct("(");
  if (cur.accept_punct(")")) return out;
  do {
    out.push_back(cur.expect_ident("attribute name").text);
  } while (cur.accept_punct(","));
  cur.expect_punct(")");
  return out;
}

inline RawOccurrence parse_occurrence(LineCursor& cur) {
  RawOccurrence occ;
  const Token& name = cur.expect_ident("symbol name");
  occ.symbol = name.text;
  occ.line = cur.line();
  occ.column = name.column;
  if (cur.accept_punct("[")) {
    occ.index = std::stoul(cur.expect_number().text);
    if (occ.index == 0) throw GrammarError("E_SYNTAX", "occurrence index is 1-based", cur.line(), name.column);
    cur.expect_punct("]");
  }
  cur.expect_punct(".");
  occ.attr = cur.expect_ident("attribute name").text;
  return occ;
}

inline RawProduction parse_production(LineCursor& cur) {
  RawProduction p;
  p.line = cur.line();
  p.id = cur.expect_ident("production id").text;
  cur.expect_punct(":");
  const Token& lhs = cur.expect_ident("lhs symbol");
  p.lhs = lhs.text;
  p.lhs_column = lhs.column;
  cur.expect_punct("->");
  while (cur.peek().kind == Token::Kind::ident) {
    const Token& t = cur.expect_ident("rhs symbol");
    p.rhs.emplace_back(t.text, t.column);
  }
  cur.accept_punct(";");
  if (cur.accept_punct("{")) {
    while (!cur.accept_punct("}")) {
      auto src = parse_occurrence(cur);
      cur.expect_punct("->");
      auto dst = parse_occurrence(cur);
      p.edges.emplace_back(std::move(src), std::move(dst));
      if (!cur.peek_punct("}")) cur.expect_punct(";");
    }
  }
  cur.expect_end();
  return p;
}

inline AttributeOccurrence resolve_occurrence(const AttributeGrammar& g, const Production& p,
                                              const RawOccurrence& raw) {
  auto sym = g.find_symbol(raw.symbol);
  if (!sym) throw GrammarError("E_UNDECLARED", "undeclared symbol '" + raw.symbol + "'", raw.line, raw.column);
  std::vector<std::size_t> positions;
  for (std::size_t pos = 0; pos <= p.rhs.size(); ++pos)
    if (p.symbol_at(pos) == *sym) positions.push_back(pos);
  if (positions.empty())
    throw GrammarError("E_OCCURRENCE", "'" + raw.symbol + "' does not occur in production " + p.id,
                       raw.line, raw.column);
  std::size_t position;
  if (raw.index == 0) {
    if (positions.size() > 1)
      throw GrammarError("E_AMBIGUOUS", "'" + raw.symbol + "' occurs " + std::to_string(positions.size()) +
                                            " times; write " + raw.symbol + "[n]." + raw.attr,
                         raw.line, raw.column);
    position = positions.front();
  } else {
    if (raw.index > positions.size())
      throw GrammarError("E_OCCURRENCE", "'" + raw.symbol + "[" + std::to_string(raw.index) + "]' out of range",
                         raw.line, raw.column);
    position = positions[raw.index - 1];
  }
  if (!g.symbols[*sym].attribute_index(raw.attr))
    throw GrammarError("E_UNDECLARED", "'" + raw.attr + "' is not an attribute of '" + raw.symbol + "'",
                       raw.line, raw.column);
  return {position, raw.attr};
}

/// Occurrence as written in source: Name.attr or Name[n].attr.
inline std::string occurrence_source(const AttributeGrammar& g, const Production& p,
                                     const AttributeOccurrence& occ) {
  const std::size_t sym = p.symbol_at(occ.position);
  std::size_t count = 0, ordinal = 0;
  for (std::size_t pos = 0; pos <= p.rhs.size(); ++pos)
    if (p.symbol_at(pos) == sym) {
      ++count;
      if (pos == occ.position) ordinal = count;
    }
  std::string out = g.symbols[sym].name;
  if (count > 1) out += "[" + std::to_string(ordinal) + "]";
  return out + "." + occ.attr;
}

}  // namespace detail

inline AttributeGrammar parse_ag(std::string_view text) {
  using namespace detail;
  AttributeGrammar g;
  std::vector<RawProduction> raw_productions;
  std::optional<std::pair<std::string, std::pair<std::size_t, std::size_t>>> start;

  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    begin = end + 1;

    LineCursor cur(tokenize_line(line, line_no), line_no);
    if (cur.at_end()) continue;
    const Token& kw = cur.expect_ident("a statement keyword");
    if (kw.text == "nonterminal" || kw.text == "terminal") {
      const Token& name = cur.expect_ident("symbol name");
      if (g.find_symbol(name.text))
        throw GrammarError("E_DUPLICATE", "symbol '" + name.text + "' declared twice", line_no, name.column);
      Symbol sym{name.text, kw.text == "terminal" ? SymbolKind::terminal : SymbolKind::nonterminal, {}, {}};
      bool seen_inh = false, seen_syn = false;
      while (!cur.at_end()) {
        const Token& which = cur.expect_ident("inh(...) or syn(...)");
        if (sym.kind == SymbolKind::terminal)
          throw GrammarError("E_TERMINAL_ATTRIBUTES", "terminals carry no attributes", line_no, which.column);
        if (which.text == "inh" && !seen_inh) {
          sym.inh = parse_attribute_list(cur);
          seen_inh = true;
        } else if (which.text == "syn" && !seen_syn) {
          sym.syn = parse_attribute_list(cur);
          seen_syn = true;
        } else {
          throw GrammarError("E_SYNTAX", "unexpected '" + which.text + "'", line_no, which.column);
        }
      }
      std::set<std::string> seen;
      for (const auto* list : {&sym.inh, &sym.syn})
        for (const auto& a : *list)
          if (!seen.insert(a).second)
            throw GrammarError("E_DUPLICATE", "attribute '" + a + "' declared twice on '" + sym.name + "'",
                               line_no, name.column);
      g.symbols.push_back(std::move(sym));
    } else if (kw.text == "start") {
      const Token& name = cur.expect_ident("start symbol");
      cur.expect_end();
      if (start) throw GrammarError("E_START", "start symbol given twice", line_no, kw.column);
      start = {name.text, {line_no, name.column}};
    } else if (kw.text == "production") {
      raw_productions.push_back(parse_production(cur));
    } else {
      throw GrammarError("E_SYNTAX", "unknown statement '" + kw.text + "'", line_no, kw.column);
    }
  }

  if (start) {
    auto s = g.find_symbol(start->first);
    if (!s)
      throw GrammarError("E_UNDECLARED", "undeclared start symbol '" + start->first + "'", start->second.first,
                         start->second.second);
    if (!g.symbols[*s].is_nonterminal())
      throw GrammarError("E_START", "start symbol '" + start->first + "' is a terminal", start->second.first,
                         start->second.second);
    g.start = *s;
  } else {
    auto nts = g.nonterminals();
    if (nts.empty()) throw GrammarError("E_START", "grammar declares no nonterminal");
    g.start = nts.front();
  }

  for (const auto& raw : raw_productions) {
    if (g.find_production(raw.id))
      throw GrammarError("E_DUPLICATE", "production id '" + raw.id + "' used twice", raw.line, 1);
    Production p;
    p.id = raw.id;
    auto lhs = g.find_symbol(raw.lhs);
    if (!lhs) throw GrammarError("E_UNDECLARED", "undeclared symbol '" + raw.lhs + "'", raw.line, raw.lhs_column);
    if (!g.symbols[*lhs].is_nonterminal())
      throw GrammarError("E_LHS_TERMINAL", "lhs '" + raw.lhs + "' is a terminal", raw.line, raw.lhs_column);
    p.lhs = *lhs;
    for (const auto& [name, column] : raw.rhs) {
      auto s = g.find_symbol(name);
      if (!s) throw GrammarError("E_UNDECLARED", "undeclared symbol '" + name + "'", raw.line, column);
      p.rhs.push_back(*s);
    }
    for (const auto& [src, dst] : raw.edges) {
      DependencyEdge e{resolve_occurrence(g, p, src), resolve_occurrence(g, p, dst)};
      const Symbol& target = g.symbols[p.symbol_at(e.dst.position)];
      bool defined = e.dst.position == 0 ? target.is_synthesized(e.dst.attr) : target.is_inherited(e.dst.attr);
      if (!defined)
        throw GrammarError("E_TARGET",
                           "edge target " + dst.symbol + "." + dst.attr +
                               " must be a synthesized attribute of the lhs or an inherited attribute of an "
                               "rhs symbol",
                           dst.line, dst.column);
      p.edges.push_back(std::move(e));
    }
    g.productions.push_back(std::move(p));
  }

  require_valid(g);
  return g;
}

inline std::string serialize_ag(const AttributeGrammar& g) {
  std::ostringstream out;
  auto list = [&](const char* kw, const std::vector<std::string>& attrs) {
    if (attrs.empty()) return;
    out << ' ' << kw << '(';
    for (std::size_t i = 0; i < attrs.size(); ++i) out << (i ? ", " : "") << attrs[i];
    out << ')';
  };
  for (const auto& sym : g.symbols) {
    if (sym.is_nonterminal()) {
      out << "nonterminal " << sym.name;
      list("inh", sym.inh);
      list("syn", sym.syn);
    } else {
      out << "terminal " << sym.name;
    }
    out << '\n';
  }
  out << "start " << g.symbols.at(g.start).name << '\n';
  for (const auto& p : g.productions) {
    out << "production " << p.id << ": " << g.symbols[p.lhs].name << " ->";
    for (std::size_t s : p.rhs) out << ' ' << g.symbols[s].name;
    if (p.rhs.empty()) out << " ;";
    if (!p.edges.empty()) {
      out << " {";
      for (const auto& e : p.edges)
        out << ' ' << detail::occurrence_source(g, p, e.src) << " -> " << detail::occurrence_source(g, p, e.dst)
            << ';';
      out << " }";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace agcirc
