#include "stablegl/folang/parser.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <set>

#include "stablegl/error.hpp"
#include "stablegl/folang/macros.hpp"

namespace stablegl::fol {

namespace {

enum class Tok { Upper, Lower, Int, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    const int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({std::isupper(static_cast<unsigned char>(c)) ? Tok::Upper : Tok::Lower,
                     std::string(s.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Int, std::string(s.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    for (std::string_view sym : {"->", "!=", ":="}) {
      if (s.substr(i).starts_with(sym)) {
        out.push_back({Tok::Sym, std::string(sym), l, cl});
        advance(2);
        goto next;
      }
    }
    if (std::string_view("()[],:@^-=~!&|").find(c) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, c), l, cl});
      advance(1);
      continue;
    }
    throw SyntaxError("unexpected character '" + std::string(1, c) + "'", l, cl, {});
  next:;
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

const std::set<std::string> kKeywords{"exists", "forall", "in",       "group",
                                      "order3", "conj",   "commconj", "uptoconj"};

class Parser {
 public:
  Parser(std::vector<Token> toks, const MacroRegistry* macros) : toks_(std::move(toks)), macros_(macros) {}

  FormulaPtr formula() { return implies(); }

  TermPtr term() {
    TermPtr t = factor();
    while (starts_factor()) t = product(t, factor());
    return t;
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail({"end of input"});
  }

  Definition definition() {
    Definition d;
    if (peek().kind != Tok::Lower) fail({"macro name"});
    d.name = take().text;
    expect("(");
    if (!at(")")) {
      for (;;) {
        if (peek().kind != Tok::Upper || peek().text == "E") fail({"parameter name"});
        d.params.push_back(take().text);
        if (!accept(",")) break;
      }
    }
    expect(")");
    expect(":=");
    d.body = formula();
    expect_end();
    return d;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token take() { return toks_[pos_++]; }
  bool at(std::string_view sym) const { return peek().kind == Tok::Sym && peek().text == sym; }
  bool at_word(std::string_view w) const { return peek().kind == Tok::Lower && peek().text == w; }
  bool accept(std::string_view sym) {
    if (!at(sym)) return false;
    ++pos_;
    return true;
  }
  void expect(std::string_view sym) {
    if (!accept(sym)) fail({"'" + std::string(sym) + "'"});
  }
  void expect_word(std::string_view w) {
    if (!at_word(w)) fail({"'" + std::string(w) + "'"});
    ++pos_;
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    const std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError("unexpected " + found, t.line, t.col, std::move(expected));
  }

  bool starts_factor() const {
    return peek().kind == Tok::Upper || at("(");
  }

  TermPtr primary() {
    if (peek().kind == Tok::Upper) {
      const std::string name = take().text;
      if (name == "E") return identity_term();
      for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
        if (*it == name) return var(name);
      return param(name);
    }
    if (accept("(")) {
      TermPtr t = term();
      expect(")");
      return t;
    }
    fail({"term"});
  }

  TermPtr factor() {
    TermPtr t = primary();
    while (accept("^")) {
      const bool negative = accept("-");
      if (peek().kind != Tok::Int) fail({"integer exponent"});
      const std::string digits = take().text;
      int e = 0;
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), e);
      if (ec != std::errc()) fail({"small integer exponent"});
      if (negative && e == 1)
        t = inverse(t);
      else
        t = power(t, negative ? -e : e);
    }
    return t;
  }

  FormulaPtr implies() {
    FormulaPtr a = disj();
    if (accept("->")) return implication(a, implies());
    return a;
  }
  FormulaPtr disj() {
    FormulaPtr a = conj();
    while (accept("|")) a = disjunction(a, conj());
    return a;
  }
  FormulaPtr conj() {
    FormulaPtr a = unary();
    while (accept("&")) a = conjunction(a, unary());
    return a;
  }
  FormulaPtr unary() {
    if (accept("!")) return negation(unary());
    return atom();
  }

  FormulaPtr atom() {
    if (at_word("exists") || at_word("forall")) return quantifier();
    if (peek().kind == Tok::Lower) {
      if (kKeywords.count(peek().text) || !(peek(1).kind == Tok::Sym && peek(1).text == "("))
        fail({"term", "macro call", "quantifier"});
      return macro();
    }
    if (at("(")) {
      // Either a parenthesized formula or a relation whose left term starts
      // with '('; try the relation first.
      const std::size_t save = pos_;
      const std::size_t scope = scope_.size();
      try {
        return relation();
      } catch (const SyntaxError& first) {
        const std::size_t first_pos = pos_;
        pos_ = save;
        scope_.resize(scope);
        try {
          ++pos_;
          FormulaPtr f = formula();
          expect(")");
          return f;
        } catch (const SyntaxError& second) {
          if (first_pos > pos_) throw first;
          throw;
        }
      }
    }
    return relation();
  }

  FormulaPtr relation() {
    TermPtr l = term();
    if (accept("=")) return equal_atom(l, term());
    if (accept("~")) return conj_atom(l, term());
    if (accept("!=")) return not_equal_atom(l, term());
    fail({"'='", "'~'", "'!='"});
  }

  FormulaPtr macro() {
    const Token name = take();
    expect("(");
    std::vector<TermPtr> args;
    if (!at(")")) {
      args.push_back(term());
      while (accept(",")) args.push_back(term());
    }
    expect(")");
    const MacroRegistry& reg = macros_ ? *macros_ : MacroRegistry::builtin_names();
    if (!reg.contains(name.text))
      throw UnknownMacro("line " + std::to_string(name.line) + ":" + std::to_string(name.col) +
                         ": unknown macro '" + name.text + "'");
    if (reg.arity(name.text) != static_cast<int>(args.size()))
      throw SyntaxError("macro '" + name.text + "' takes " + std::to_string(reg.arity(name.text)) +
                            " argument(s)",
                        name.line, name.col, {});
    return macro_call(name.text, std::move(args));
  }

  FormulaPtr quantifier() {
    const bool is_exists = take().text == "exists";
    if (peek().kind != Tok::Upper || peek().text == "E") fail({"variable name"});
    const std::string v = take().text;
    expect_word("in");
    Domain d;
    if (at_word("group")) {
      ++pos_;
      d.kind = Domain::Kind::Group;
    } else if (at_word("order3")) {
      ++pos_;
      d.kind = Domain::Kind::Order3;
    } else if (at_word("conj")) {
      ++pos_;
      d.kind = Domain::Kind::Conj;
      expect("(");
      d.of = term();
      expect(")");
    } else if (at_word("commconj")) {
      ++pos_;
      d.kind = Domain::Kind::CommConj;
      expect("(");
      d.of = term();
      expect(",");
      d.with = term();
      expect(")");
    } else {
      fail({"'group'", "'order3'", "'conj'", "'commconj'"});
    }
    expect("@");
    if (peek().kind == Tok::Upper && peek().text == "N") {
      ++pos_;
    } else if (peek().kind == Tok::Int) {
      d.bound = std::stoi(take().text);
    } else {
      fail({"'N'", "integer bound"});
    }
    if (at_word("uptoconj")) {
      ++pos_;
      d.uptoconj = true;
    }
    expect(":");
    scope_.push_back(v);
    FormulaPtr body = formula();
    scope_.pop_back();
    return is_exists ? exists(v, std::move(d), body) : forall(v, std::move(d), body);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
  const MacroRegistry* macros_;
};

}  // namespace

FormulaPtr parse(std::string_view source, const MacroRegistry* macros) {
  Parser p(lex(source), macros);
  FormulaPtr f = p.formula();
  p.expect_end();
  return f;
}

TermPtr parse_term(std::string_view source) {
  Parser p(lex(source), nullptr);
  TermPtr t = p.term();
  p.expect_end();
  return t;
}

Definition parse_definition(std::string_view source, const MacroRegistry* macros) {
  Parser p(lex(source), macros);
  return p.definition();
}

}  // namespace stablegl::fol
