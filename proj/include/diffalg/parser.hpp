#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diffalg/printer.hpp"

namespace diffalg {

/// A parsed tower file: the tower plus named bindings from `let`.
struct TowerDoc {
  Tower tower;
  std::vector<std::pair<std::string, Element>> lets;

  std::optional<Element> lookup(std::string_view name) const {
    for (auto it = lets.rbegin(); it != lets.rend(); ++it)
      if (it->first == name) return tower.adopt(it->second);
    if (auto g = tower.find(name)) return tower.gen(*g);
    return std::nullopt;
  }
};

namespace detail {

struct Token {
  enum Kind { Ident, Int, Sym, End } kind = End;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Token::Ident;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) t.text += take();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Token::Int;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) t.text += take();
      } else if (std::string_view("+-*/^(),=;").find(c) != std::string_view::npos) {
        t.kind = Token::Sym;
        t.text = take();
      } else {
        throw Error(ErrorCode::ParseError, where(line_, col_) + "unexpected character '" + std::string(1, c) + "'");
      }
      out.push_back(std::move(t));
    }
  }

  static std::string where(int line, int col) {
    return "line " + std::to_string(line) + ", column " + std::to_string(col) + ": ";
  }

 private:
  char take() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

inline bool is_phi_kind(std::string_view s) {
  return s == "log" || s == "w1" || s == "w2" || s == "w3" || s == "l1" || s == "l2" || s == "l3";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::End; }
  bool is_sym(std::string_view s, std::size_t k = 0) const { return peek(k).kind == Token::Sym && peek(k).text == s; }
  bool is_ident(std::string_view s, std::size_t k = 0) const { return peek(k).kind == Token::Ident && peek(k).text == s; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw Error(ErrorCode::ParseError, Lexer::where(at.line, at.col) + msg);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, peek()); }

  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  void expect(std::string_view s) {
    if (!is_sym(s)) fail("expected '" + std::string(s) + "'" + found());
    ++pos_;
  }
  std::string ident(const char* what) {
    if (peek().kind != Token::Ident) fail(std::string("expected ") + what + found());
    return next().text;
  }
  std::string found() const {
    if (at_end()) return " but reached the end of input";
    return " but found '" + peek().text + "'";
  }

  /// Attaches a location to semantic errors raised while building values.
  template <class F>
  auto located(const Token& at, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError) throw;
      throw Error(e.code(), Lexer::where(at.line, at.col) + e.detail());
    }
  }

  // expr := sum; sum := prod (('+'|'-') prod)*; prod := unary (('*'|'/') unary)*;
  // unary := '-' unary | power; power := atom ('^' INT)?
  Element expr(const TowerDoc& doc, bool in_form = false) {
    Element acc = product(doc, in_form);
    while (is_sym("+") || is_sym("-")) {
      const bool plus = next().text == "+";
      const Element r = product(doc, in_form);
      acc = plus ? acc + r : acc - r;
    }
    return acc;
  }

  std::vector<Element> args(const TowerDoc& doc, std::size_t lo, std::size_t hi, const std::string& what) {
    const Token at = peek();
    expect("(");
    std::vector<Element> out{expr(doc)};
    while (is_sym(",")) {
      next();
      out.push_back(expr(doc));
    }
    expect(")");
    if (out.size() < lo || out.size() > hi)
      fail(what + " takes " + (lo == hi ? std::to_string(lo) : std::to_string(lo) + " to " + std::to_string(hi)) +
               " arguments, got " + std::to_string(out.size()),
           at);
    return out;
  }

  std::size_t pos_ = 0;

 private:
  Element product(const TowerDoc& doc, bool in_form) {
    Element acc = unary(doc);
    for (;;) {
      if (is_sym("*")) {
        // In a form, "coeff * log(...)" ends the coefficient.
        if (in_form && peek(1).kind == Token::Ident && is_phi_kind(peek(1).text) && is_sym("(", 2)) break;
        next();
        acc = acc * unary(doc);
      } else if (is_sym("/")) {
        const Token at = next();
        const Element d = unary(doc);
        if (d.is_zero()) fail("division by zero", at);
        acc = located(at, [&] { return acc / d; });
      } else {
        break;
      }
    }
    return acc;
  }

  Element unary(const TowerDoc& doc) {
    if (is_sym("-")) {
      next();
      return -unary(doc);
    }
    if (is_sym("+")) {
      next();
      return unary(doc);
    }
    return power(doc);
  }

  Element power(const TowerDoc& doc) {
    Element base = atom(doc);
    if (is_sym("^")) {
      next();
      if (peek().kind != Token::Int) fail("exponent must be a non-negative integer" + found());
      const Token t = next();
      if (t.text.size() > 6) fail("exponent too large", t);
      base = located(t, [&] { return base.pow(static_cast<unsigned>(std::stoul(t.text))); });
      if (is_sym("^")) fail("chained exponents are not allowed; use parentheses");
    }
    return base;
  }

  Element atom(const TowerDoc& doc) {
    const Token t = peek();
    if (t.kind == Token::Int) {
      next();
      return doc.tower.number(BigRat::parse(t.text));
    }
    if (t.kind == Token::Ident) {
      next();
      if (is_sym("(")) fail("unknown function '" + t.text + "'", t);
      if (auto v = doc.lookup(t.text)) return *v;
      throw Error(ErrorCode::UnknownName, Lexer::where(t.line, t.col) + "unknown name '" + t.text + "'");
    }
    if (t.kind == Token::Sym && t.text == "(") {
      next();
      Element e = expr(doc);
      expect(")");
      return e;
    }
    fail("expected an expression" + found());
  }

  std::vector<Token> toks_;
};

inline bool is_keyword(std::string_view s) {
  return s == "const" || s == "var" || s == "gen" || s == "let" || s == "v0" || s == "term";
}

}  // namespace detail

inline TowerDoc parse_tower(std::string_view text) {
  detail::Parser p(text);
  TowerDoc doc;
  const auto check_name = [&](const detail::Token& at, const std::string& name) {
    if (detail::is_keyword(name) || detail::is_phi_kind(name) || name == "d")
      p.fail("'" + name + "' is reserved", at);
  };
  while (!p.at_end()) {
    const detail::Token kw = p.peek();
    if (kw.kind != detail::Token::Ident) p.fail("expected a declaration (const, var, gen or let)" + p.found());
    p.next();
    if (kw.text == "const") {
      for (;;) {
        const detail::Token at = p.peek();
        const std::string name = p.ident("a constant name");
        check_name(at, name);
        doc.tower = p.located(at, [&] { return doc.tower.extend(name, ConstParam{}); });
        if (!p.is_sym(",")) break;
        p.next();
      }
    } else if (kw.text == "var") {
      const detail::Token at = p.peek();
      const std::string name = p.ident("a variable name");
      check_name(at, name);
      p.expect("=");
      if (!p.is_ident("d") || !p.is_sym("/", 1) || !p.is_ident("dx", 2)) p.fail("expected 'd/dx'" + p.found());
      p.pos_ += 3;
      const Element d = p.expr(doc);
      doc.tower = p.located(at, [&] { return doc.tower.extend(name, BaseVar{d}); });
    } else if (kw.text == "gen") {
      const detail::Token at = p.peek();
      const std::string name = p.ident("a generator name");
      check_name(at, name);
      p.expect("=");
      const detail::Token kt = p.peek();
      const std::string kind = p.ident("an extension kind");
      const Tower& t = doc.tower;
      ExtensionKind k;
      if (kind == "int") {
        const auto a = p.args(doc, 1, 2, "int");
        Primitive pr{a[0], {}, {}};
        if (a.size() == 2) pr.antiderivative = a[1];
        k = pr;
      } else if (kind == "log") {
        k = Primitive{t.number(0), LogTag{p.args(doc, 1, 1, "log")[0]}, {}};
      } else if (kind == "exp") {
        k = Exponential{p.args(doc, 1, 1, "exp")[0]};
      } else if (kind == "lambertw") {
        k = LambertW{p.args(doc, 1, 1, "lambertw")[0]};
      } else if (kind == "sqrt") {
        k = AlgebraicSqrt{p.args(doc, 1, 1, "sqrt")[0]};
      } else if (kind == "ellfun") {
        const auto a = p.args(doc, 3, 3, "ellfun");
        k = EllipticFunction{a[0], a[1], a[2]};
      } else if (kind == "ellint") {
        const auto a = p.args(doc, 3, 4, "ellint");
        if (!a[0].is_rational() || !a[0].rational_value().is_integer()) p.fail("ellint kind must be 1, 2 or 3", kt);
        const long kn = a[0].rational_value().numerator().get_si();
        if (kn < 1 || kn > 3) p.fail("ellint kind must be 1, 2 or 3", kt);
        if ((kn == 3) != (a.size() == 4)) p.fail("ellint takes the constant c exactly for kind 3", kt);
        k = Primitive{t.number(0), EllIntegralTag{static_cast<int>(kn), a[1], a[2], t.number(0), t.number(0), a.size() == 4 ? a[3] : t.number(0)}, {}};
      } else {
        p.fail("unknown extension kind '" + kind + "'", kt);
      }
      doc.tower = p.located(at, [&] { return doc.tower.extend(name, k); });
    } else if (kw.text == "let") {
      const detail::Token at = p.peek();
      const std::string name = p.ident("a binding name");
      check_name(at, name);
      if (doc.tower.find(name)) p.fail("'" + name + "' is already a generator", at);
      p.expect("=");
      doc.lets.emplace_back(name, p.expr(doc));
    } else {
      p.fail("expected a declaration (const, var, gen or let) but found '" + kw.text + "'", kw);
    }
    while (p.is_sym(";")) p.next();
  }
  return doc;
}

inline Element parse_expr(std::string_view text, const TowerDoc& doc) {
  detail::Parser p(text);
  Element e = p.expr(doc);
  if (!p.at_end()) p.fail("unexpected input after the expression" + p.found());
  return e;
}

inline LiouvilleForm parse_form(std::string_view text, const TowerDoc& doc) {
  detail::Parser p(text);
  const Tower& t = doc.tower;
  if (!p.is_ident("v0")) p.fail("a form starts with 'v0 ='" + p.found());
  p.next();
  p.expect("=");
  LiouvilleForm form{p.expr(doc, true), {}};
  while (!p.at_end()) {
    while (p.is_sym(";")) p.next();
    if (p.at_end()) break;
    if (!p.is_ident("term")) p.fail("expected 'term'" + p.found());
    const detail::Token at = p.next();
    Element coeff = t.number(1);
    if (!(p.peek().kind == detail::Token::Ident && detail::is_phi_kind(p.peek().text) && p.is_sym("(", 1))) {
      coeff = p.expr(doc, true);
      if (!p.is_sym("*")) p.fail("expected '* <term kind>(...)' after the coefficient" + p.found());
      p.next();
    }
    const detail::Token kt = p.peek();
    const std::string kind = p.ident("a term kind");
    if (!detail::is_phi_kind(kind)) p.fail("unknown term kind '" + kind + "'", kt);
    PhiTerm phi;
    if (kind == "log") {
      phi = LogPhi{p.args(doc, 1, 1, "log")[0]};
    } else if (kind == "w1" || kind == "w2") {
      const auto a = p.args(doc, 4, 4, kind);
      if (kind == "w1") phi = W1Phi{a[0], a[1], a[2], a[3]};
      else phi = W2Phi{a[0], a[1], a[2], a[3]};
    } else if (kind == "w3") {
      const auto a = p.args(doc, 5, 5, kind);
      phi = W3Phi{a[0], a[1], a[2], a[3], a[4]};
    } else if (kind == "l3") {
      const auto a = p.args(doc, 5, 5, kind);
      phi = L3Phi{a[0], a[1], a[2], ThirdKindParam{a[3], a[4]}};
    } else {
      const auto a = p.args(doc, 3, 3, kind);
      if (kind == "l1") phi = L1Phi{a[0], a[1], a[2]};
      else phi = L2Phi{a[0], a[1], a[2]};
    }
    p.located(at, [&] {
      if (!t.is_constant(t.adopt(coeff)))
        throw Error(ErrorCode::NonConstantCoefficient, "coefficient " + to_string(coeff, t) + " is not a constant");
      validate_term(t, phi);
      return 0;
    });
    form.terms.push_back({coeff, phi});
  }
  return form;
}

/// Canonical text of a document; parse_tower of it rebuilds the same document.
inline std::string print_doc(const TowerDoc& doc) {
  const Printer pr(doc.tower);
  std::string s = pr.tower(doc.tower);
  for (const auto& [name, e] : doc.lets) s += "let " + name + " = " + pr.element(e) + '\n';
  return s;
}

/// Same generators with equal defining data, and equal bindings.
inline bool equivalent(const TowerDoc& a, const TowerDoc& b) {
  if (a.tower.size() != b.tower.size() || a.lets.size() != b.lets.size()) return false;
  for (Var g = 0; g < a.tower.size(); ++g) {
    const auto& ga = a.tower.generator(g);
    const auto& gb = b.tower.generator(g);
    if (ga.name != gb.name || ga.kind.index() != gb.kind.index()) return false;
    if (kind_name(ga.kind) != kind_name(gb.kind)) return false;
    std::vector<Element> ea, eb;
    for_each_element(ga.kind, [&](const Element& e) { ea.push_back(e); });
    for_each_element(gb.kind, [&](const Element& e) { eb.push_back(e); });
    if (ea != eb) return false;
  }
  for (std::size_t i = 0; i < a.lets.size(); ++i)
    if (a.lets[i].first != b.lets[i].first || !(a.lets[i].second == b.lets[i].second)) return false;
  return true;
}

inline bool equivalent(const LiouvilleForm& a, const LiouvilleForm& b) {
  if (!(a.v0 == b.v0) || a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (!(a.terms[i].coeff == b.terms[i].coeff) || a.terms[i].phi.index() != b.terms[i].phi.index()) return false;
    std::vector<Element> ea, eb;
    (void)map_phi(a.terms[i].phi, [&](const Element& e) { ea.push_back(e); return e; });
    (void)map_phi(b.terms[i].phi, [&](const Element& e) { eb.push_back(e); return e; });
    if (ea != eb) return false;
  }
  return true;
}

}  // namespace diffalg
