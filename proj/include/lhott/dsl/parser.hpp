#pragma once

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lhott/dsl/ast.hpp"

namespace lhott::dsl {

struct Token {
  enum class Kind { Ident, Number, String, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  Position pos;
};

inline std::string describe(const Token& t) {
  switch (t.kind) {
    case Token::Kind::End: return "end of input";
    case Token::Kind::String: return "string \"" + t.text + "\"";
    default: return "`" + t.text + "`";
  }
}

/// Splits source text into tokens; `#` starts a comment running to the end of the line.
inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n')
        ++line, col = 1;
      else
        ++col;
    }
  };
  auto digit = [&](std::size_t k) { return k < src.size() && std::isdigit(static_cast<unsigned char>(src[k])); };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Position pos{line, col};
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      out.push_back({Token::Kind::Ident, std::string(src.substr(start, j - start)), pos});
      advance(j - i);
    } else if (digit(i) || (c == '-' && digit(i + 1))) {
      std::size_t j = i + 1;
      while (digit(j)) ++j;
      if (j < src.size() && src[j] == '/' && digit(j + 1)) {
        ++j;
        while (digit(j)) ++j;
      }
      out.push_back({Token::Kind::Number, std::string(src.substr(start, j - start)), pos});
      advance(j - i);
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
      if (j >= src.size() || src[j] != '"') throw SourceError(ErrorKind::ParseError, pos, "unterminated string");
      out.push_back({Token::Kind::String, std::string(src.substr(i + 1, j - i - 1)), pos});
      advance(j + 1 - i);
    } else {
      static constexpr std::string_view two[] = {"->", "<-", "<="};
      std::string text;
      for (auto t : two)
        if (src.substr(i, 2) == t) text = t;
      if (text.empty() && std::string_view("=:;,[]{}").find(c) != std::string_view::npos) text = std::string(1, c);
      if (text.empty())
        throw SourceError(ErrorKind::ParseError, pos, std::string("unexpected character `") + c + "`");
      out.push_back({Token::Kind::Punct, text, pos});
      advance(text.size());
    }
  }
  out.push_back({Token::Kind::End, "", {line, col}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(tokenize(src)) {}

  Program program() {
    Program p;
    while (peek().kind != Token::Kind::End) p.statements.push_back(statement());
    return p;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t at_ = 0;

  const Token& peek(std::size_t k = 0) const { return tokens_[std::min(at_ + k, tokens_.size() - 1)]; }
  const Token& take() { return tokens_[at_ < tokens_.size() - 1 ? at_++ : at_]; }

  [[noreturn]] void expected(const std::set<std::string>& what) const {
    std::string list;
    for (const auto& w : what) list += (list.empty() ? "" : ", ") + w;
    throw SourceError(ErrorKind::ParseError, peek().pos,
                      (what.size() == 1 ? "expected " : "expected one of ") + list + ", found " + describe(peek()));
  }

  bool at_punct(std::string_view p) const { return peek().kind == Token::Kind::Punct && peek().text == p; }
  bool at_word(std::string_view w) const { return peek().kind == Token::Kind::Ident && peek().text == w; }

  void punct(std::string_view p) {
    if (!at_punct(p)) expected({"`" + std::string(p) + "`"});
    take();
  }
  void word(std::string_view w) {
    if (!at_word(w)) expected({"`" + std::string(w) + "`"});
    take();
  }
  std::string ident() {
    if (peek().kind != Token::Kind::Ident) expected({"identifier"});
    return take().text;
  }
  std::size_t natural() {
    if (peek().kind != Token::Kind::Number || peek().text.find_first_of("-/") != std::string::npos)
      expected({"nonnegative integer"});
    return std::stoull(take().text);
  }
  Rational number() {
    if (peek().kind != Token::Kind::Number) expected({"number"});
    auto q = parse_rational(peek().text);
    if (!q) throw SourceError(ErrorKind::ParseError, peek().pos, "malformed rational " + describe(peek()));
    take();
    return *q;
  }

  std::vector<std::size_t> naturals() {
    punct("[");
    std::vector<std::size_t> r;
    if (!at_punct("]")) {
      r.push_back(natural());
      while (at_punct(",")) take(), r.push_back(natural());
    }
    punct("]");
    return r;
  }
  RowLit row() {
    punct("[");
    RowLit r;
    if (!at_punct("]")) {
      r.push_back(number());
      while (at_punct(",")) take(), r.push_back(number());
    }
    punct("]");
    return r;
  }
  MatrixLit matrix() {
    punct("[");
    MatrixLit m;
    if (!at_punct("]")) {
      m.push_back(row());
      while (at_punct(",")) take(), m.push_back(row());
    }
    punct("]");
    return m;
  }
  std::vector<std::vector<std::size_t>> rows_block() {
    punct("{");
    std::vector<std::vector<std::size_t>> rows;
    while (!at_punct("}")) {
      if (!at_punct("[")) expected({"`[`", "`}`"});
      rows.push_back(naturals());
      if (at_punct(",")) take();
    }
    take();
    return rows;
  }
  std::vector<Entry> entries() {
    punct("{");
    std::vector<Entry> es;
    while (!at_punct("}")) {
      if (peek().kind != Token::Kind::Number) expected({"nonnegative integer", "`}`"});
      Entry e;
      e.pos = peek().pos;
      e.id = natural();
      punct(":");
      e.value = matrix();
      es.push_back(std::move(e));
      if (at_punct(",")) take();
    }
    take();
    return es;
  }

  Statement statement() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Ident) {
      if (t.text == "group") return group();
      if (t.text == "groupoid") return groupoid();
      if (t.text == "functor") return functor();
      if (t.text == "system") return system();
      if (t.text == "corr") return corr();
      if (t.text == "kernel") return kernel();
      if (t.text == "print") return command();
    }
    expected({"`group`", "`groupoid`", "`functor`", "`system`", "`corr`", "`kernel`", "`print`"});
  }

  GroupDecl group() {
    GroupDecl d;
    d.pos = take().pos;
    d.name = ident();
    punct("=");
    if (at_word("cyclic"))
      take(), d.kind = GroupDecl::Kind::Cyclic, d.n = natural();
    else if (at_word("symmetric"))
      take(), d.kind = GroupDecl::Kind::Symmetric, d.n = natural();
    else if (at_word("table"))
      take(), d.kind = GroupDecl::Kind::Table, d.rows = rows_block();
    else
      expected({"`cyclic`", "`symmetric`", "`table`"});
    return d;
  }

  GroupoidDecl groupoid() {
    GroupoidDecl d;
    d.pos = take().pos;
    d.name = ident();
    punct("=");
    if (at_word("B")) {
      take(), d.kind = GroupoidDecl::Kind::Deloop, d.first = ident();
    } else if (at_word("discrete")) {
      take(), d.kind = GroupoidDecl::Kind::Discrete, d.n = natural();
    } else if (at_word("action")) {
      take(), d.kind = GroupoidDecl::Kind::Action, d.first = ident();
      word("on");
      d.n = natural();
      d.rows = rows_block();
    } else if (at_word("product") || at_word("union")) {
      d.kind = take().text == "product" ? GroupoidDecl::Kind::Product : GroupoidDecl::Kind::Union;
      d.first = ident();
      d.second = ident();
    } else {
      expected({"`B`", "`discrete`", "`action`", "`product`", "`union`"});
    }
    return d;
  }

  FunctorDecl functor() {
    FunctorDecl d;
    d.pos = take().pos;
    d.name = ident();
    punct(":");
    d.domain = ident();
    punct("->");
    d.codomain = ident();
    punct("=");
    if (at_word("terminal"))
      take(), d.kind = FunctorDecl::Kind::Terminal;
    else if (at_word("id"))
      take(), d.kind = FunctorDecl::Kind::Identity;
    else if (at_word("proj1"))
      take(), d.kind = FunctorDecl::Kind::First;
    else if (at_word("proj2"))
      take(), d.kind = FunctorDecl::Kind::Second;
    else if (at_punct("{")) {
      take();
      d.kind = FunctorDecl::Kind::Explicit;
      word("objects");
      punct(":");
      d.objects = naturals();
      punct(";");
      word("morphisms");
      punct(":");
      d.morphisms = naturals();
      if (at_punct(";")) take();
      punct("}");
    } else {
      expected({"`terminal`", "`id`", "`proj1`", "`proj2`", "`{`"});
    }
    return d;
  }

  SystemDecl system() {
    SystemDecl d;
    d.pos = take().pos;
    d.name = ident();
    word("on");
    d.base = ident();
    punct("=");
    if (at_word("unit")) {
      take();
    } else if (at_word("dims")) {
      take();
      d.unit = false;
      d.dims = naturals();
      if (at_word("trans")) take(), d.transports = entries();
    } else {
      expected({"`unit`", "`dims`"});
    }
    return d;
  }

  CorrDecl corr() {
    CorrDecl d;
    d.pos = take().pos;
    d.name = ident();
    punct("=");
    d.left_base = ident();
    punct("<-");
    d.apex = ident();
    punct("->");
    d.right_base = ident();
    word("via");
    d.left = ident();
    punct(",");
    d.right = ident();
    return d;
  }

  KernelDecl kernel() {
    KernelDecl d;
    d.pos = take().pos;
    d.name = ident();
    word("on");
    d.corr = ident();
    punct(":");
    d.target = ident();
    punct("<=");
    d.source = ident();
    punct("=");
    if (at_word("unit"))
      take();
    else if (at_punct("{"))
      d.unit = false, d.components = entries();
    else
      expected({"`unit`", "`{`"});
    return d;
  }

  Command command() {
    Command c;
    c.pos = take().pos;
    const Token& t = peek();
    auto is = [&](std::string_view w) { return t.kind == Token::Kind::Ident && t.text == w; };
    if (is("card") || is("show")) {
      c.kind = is("card") ? Command::Kind::Card : Command::Kind::Show;
      take();
      c.args = {ident()};
    } else if (is("sum") || is("prod")) {
      c.kind = is("sum") ? Command::Kind::Sum : Command::Kind::Prod;
      take();
      c.args.push_back(ident());
      c.args.push_back(ident());
    } else if (is("transform")) {
      c.kind = Command::Kind::Transform;
      take();
      c.args = {ident()};
      if (at_punct("[")) c.vector = row();
    } else if (is("axioms")) {
      c.kind = Command::Kind::Axioms;
      take();
      c.args.push_back(ident());
      c.args.push_back(ident());
      if (peek().kind == Token::Kind::Ident && !is_statement_keyword(peek().text)) c.args.push_back(ident());
    } else if (is("anomaly")) {
      c.kind = Command::Kind::Anomaly;
      take();
      c.args.push_back(ident());
      c.args.push_back(ident());
    } else if (is("dw")) {
      c.kind = Command::Kind::Dw;
      take();
      c.args = {ident()};
      word("genus");
      c.genus = natural();
    } else if (is("matrix")) {
      c.kind = Command::Kind::Matrix;
      take();
      if (peek().kind != Token::Kind::String) expected({"string"});
      c.path = take().text;
    } else {
      expected({"`card`", "`show`", "`sum`", "`prod`", "`transform`", "`axioms`", "`anomaly`", "`dw`", "`matrix`"});
    }
    return c;
  }

  static bool is_statement_keyword(std::string_view w) {
    return w == "group" || w == "groupoid" || w == "functor" || w == "system" || w == "corr" || w == "kernel" ||
           w == "print";
  }
};

inline Program parse(std::string_view src) { return Parser(src).program(); }

}  // namespace lhott::dsl
