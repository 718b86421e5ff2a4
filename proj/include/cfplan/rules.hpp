#ifndef CFPLAN_RULES_HPP
#define CFPLAN_RULES_HPP

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfplan/rational.hpp"
#include "cfplan/schema.hpp"

namespace cfplan {

class parse_error : public std::runtime_error {
public:
  parse_error(int line, int col, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(col) +
                           ": " + what),
        line(line), col(col) {}
  int line, col;
};

enum class AtomKind { feature_eq, feature_leq, feature_gt, defined };

struct Literal {
  AtomKind kind = AtomKind::feature_eq;
  bool negated = false;     // negation-as-failure; leq/gt are always positive
  std::string subject;      // feature or defined-predicate name
  std::string value;        // symbol for eq/defined
  Rational threshold;       // for leq/gt

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.kind == b.kind && a.negated == b.negated && a.subject == b.subject &&
           a.value == b.value && a.threshold == b.threshold;
  }
};

enum class RuleClass { decision, causal, auxiliary };

struct Rule {
  std::string head_pred;
  std::string head_value;
  std::vector<Literal> body;
  RuleClass cls = RuleClass::decision;

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.head_pred == b.head_pred && a.head_value == b.head_value && a.body == b.body &&
           a.cls == b.cls;
  }
};

struct RuleSet {
  std::vector<Rule> rules;

  std::size_t count(RuleClass c) const {
    std::size_t n = 0;
    for (const auto& r : rules)
      if (r.cls == c) ++n;
    return n;
  }
  bool heads_predicate(const std::string& name) const {
    for (const auto& r : rules)
      if (r.head_pred == name) return true;
    return false;
  }
  friend bool operator==(const RuleSet& a, const RuleSet& b) { return a.rules == b.rules; }
};

namespace detail {

struct Token {
  enum Kind { ident, variable, value, number, lparen, rparen, comma, dot, implies, leq, knot, end };
  Kind kind;
  std::string text;
  int line, col;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_ws();
    int line = line_, col = col_;
    if (pos_ >= src_.size()) return {Token::end, "", line, col};
    char c = src_[pos_];
    if (c == '(') { bump(); return {Token::lparen, "(", line, col}; }
    if (c == ')') { bump(); return {Token::rparen, ")", line, col}; }
    if (c == ',') { bump(); return {Token::comma, ",", line, col}; }
    if (c == '.') {
      // A dot is a clause terminator unless it continues a number (handled below).
      bump();
      return {Token::dot, ".", line, col};
    }
    if (c == ':') {
      bump();
      if (pos_ < src_.size() && src_[pos_] == '-') { bump(); return {Token::implies, ":-", line, col}; }
      throw parse_error(line, col, "expected ':-'");
    }
    if (c == '=') {
      bump();
      if (pos_ < src_.size() && src_[pos_] == '<') { bump(); return {Token::leq, "=<", line, col}; }
      throw parse_error(line, col, "expected '=<'");
    }
    if (c == '\'' || c == '`') {
      // Values are quoted; the corpus also uses TeX-style `v' quoting.
      bump();
      std::string text;
      while (pos_ < src_.size() && src_[pos_] != '\'') {
        if (src_[pos_] == '\n') throw parse_error(line, col, "unterminated quoted value");
        text += src_[pos_];
        bump();
      }
      if (pos_ >= src_.size()) throw parse_error(line, col, "unterminated quoted value");
      bump();
      return {Token::value, text, line, col};
    }
    if (std::isdigit((unsigned char)c) || c == '-') {
      std::string text;
      if (c == '-') { text += c; bump(); }
      bool dot_seen = false;
      while (pos_ < src_.size() &&
             (std::isdigit((unsigned char)src_[pos_]) || (!dot_seen && src_[pos_] == '.' &&
              pos_ + 1 < src_.size() && std::isdigit((unsigned char)src_[pos_ + 1])))) {
        if (src_[pos_] == '.') dot_seen = true;
        text += src_[pos_];
        bump();
      }
      if (text.empty() || text == "-") throw parse_error(line, col, "malformed number");
      return {Token::number, text, line, col};
    }
    if (std::isalpha((unsigned char)c) || c == '_') {
      std::string text;
      while (pos_ < src_.size() &&
             (std::isalnum((unsigned char)src_[pos_]) || src_[pos_] == '_')) {
        text += src_[pos_];
        bump();
      }
      if (text == "not") return {Token::knot, text, line, col};
      if (std::isupper((unsigned char)text[0])) return {Token::variable, text, line, col};
      return {Token::ident, text, line, col};
    }
    throw parse_error(line, col, std::string("unexpected character '") + c + "'");
  }

private:
  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (std::isspace((unsigned char)c)) {
        bump();
      } else {
        break;
      }
    }
  }
  void bump() {
    if (src_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
    ++pos_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

struct RawAtom {
  std::string pred;
  bool value_is_var = false;
  std::string value; // symbol, number text, or variable name
  bool value_is_number = false;
  int line, col;
};

} // namespace detail

/// Parses the rule language into a classified RuleSet. Numeric binder pairs
/// `f(X,N), N=<c` fuse into feature_leq; `not(N=<c)` fuses into feature_gt.
/// Classification and value checking run against the schema.
inline RuleSet parse_program(const std::string& text, const Schema& schema) {
  detail::Lexer lex(text);
  detail::Token tok = lex.next();

  auto expect = [&](detail::Token::Kind k, const char* what) {
    if (tok.kind != k) throw parse_error(tok.line, tok.col, std::string("expected ") + what);
    detail::Token t = tok;
    tok = lex.next();
    return t;
  };

  // atom := ident "(" "X" "," (value | number | variable) ")"
  auto parse_atom = [&]() -> detail::RawAtom {
    detail::RawAtom a;
    detail::Token name = expect(detail::Token::ident, "predicate name");
    a.pred = name.text;
    a.line = name.line;
    a.col = name.col;
    expect(detail::Token::lparen, "'('");
    detail::Token subj = expect(detail::Token::variable, "subject variable");
    if (subj.text != "X")
      throw parse_error(subj.line, subj.col, "subject variable must be 'X'");
    expect(detail::Token::comma, "','");
    if (tok.kind == detail::Token::value) {
      a.value = tok.text;
      tok = lex.next();
    } else if (tok.kind == detail::Token::number) {
      a.value = tok.text;
      a.value_is_number = true;
      tok = lex.next();
    } else if (tok.kind == detail::Token::variable) {
      a.value = tok.text;
      a.value_is_var = true;
      tok = lex.next();
    } else {
      throw parse_error(tok.line, tok.col, "expected value or variable");
    }
    expect(detail::Token::rparen, "')'");
    return a;
  };

  struct PendingClause {
    detail::RawAtom head;
    std::vector<Literal> body;
    std::vector<std::pair<int, int>> body_pos; // line/col per body literal
  };

  std::vector<PendingClause> clauses;

  while (tok.kind != detail::Token::end) {
    PendingClause clause;
    clause.head = parse_atom();
    if (clause.head.value_is_var)
      throw parse_error(clause.head.line, clause.head.col, "rule head value may not be a variable");
    if (tok.kind == detail::Token::implies) {
      tok = lex.next();
      std::map<std::string, std::string> bound; // numvar -> feature
      std::map<std::string, detail::Token> binder_at;
      std::map<std::string, bool> used;
      bool first = true;
      while (first || tok.kind == detail::Token::comma) {
        if (!first) tok = lex.next();
        first = false;
        if (tok.kind == detail::Token::knot) {
          detail::Token nt = tok;
          tok = lex.next();
          if (tok.kind == detail::Token::lparen) {
            // not( N =< c )  ->  feature_gt
            tok = lex.next();
            detail::Token var = expect(detail::Token::variable, "bound variable");
            auto it = bound.find(var.text);
            if (it == bound.end())
              throw parse_error(var.line, var.col, "unbound variable '" + var.text + "'");
            used[var.text] = true;
            expect(detail::Token::leq, "'=<'");
            detail::Token num = expect(detail::Token::number, "number");
            expect(detail::Token::rparen, "')'");
            Literal lit;
            lit.kind = AtomKind::feature_gt;
            lit.subject = it->second;
            lit.threshold = Rational::parse(num.text);
            clause.body.push_back(lit);
            clause.body_pos.emplace_back(var.line, var.col);
          } else {
            detail::RawAtom a = parse_atom();
            if (a.value_is_var)
              throw parse_error(nt.line, nt.col, "'not' does not apply to a numeric binder");
            Literal lit;
            lit.negated = true;
            lit.subject = a.pred;
            lit.value = a.value;
            clause.body.push_back(lit); // kind resolved after classification
            clause.body_pos.emplace_back(a.line, a.col);
          }
        } else if (tok.kind == detail::Token::variable) {
          // N =< c  ->  feature_leq
          detail::Token var = tok;
          tok = lex.next();
          auto it = bound.find(var.text);
          if (it == bound.end())
            throw parse_error(var.line, var.col, "unbound variable '" + var.text + "'");
          used[var.text] = true;
          expect(detail::Token::leq, "'=<'");
          detail::Token num = expect(detail::Token::number, "number");
          Literal lit;
          lit.kind = AtomKind::feature_leq;
          lit.subject = it->second;
          lit.threshold = Rational::parse(num.text);
          clause.body.push_back(lit);
          clause.body_pos.emplace_back(var.line, var.col);
        } else {
          detail::RawAtom a = parse_atom();
          if (a.value_is_var) {
            // numeric binder: f(X,N) introduces N for a following comparison
            if (bound.count(a.value))
              throw parse_error(a.line, a.col, "variable '" + a.value + "' bound twice");
            bound[a.value] = a.pred;
            binder_at.emplace(a.value, detail::Token{detail::Token::variable, a.value, a.line, a.col});
          } else {
            Literal lit;
            lit.subject = a.pred;
            lit.value = a.value;
            clause.body.push_back(lit);
            clause.body_pos.emplace_back(a.line, a.col);
          }
        }
      }
      for (const auto& [var, feat] : bound) {
        (void)feat;
        if (!used[var]) {
          const auto& t = binder_at.at(var);
          throw parse_error(t.line, t.col, "numeric binder '" + var + "' is never compared");
        }
      }
    }
    expect(detail::Token::dot, "'.'");
    clauses.push_back(std::move(clause));
  }

  // Pass 2: classify heads, resolve body atoms, check values against the schema.
  RuleSet rs;
  auto is_head_pred = [&](const std::string& name) {
    for (const auto& c : clauses)
      if (c.head.pred == name) return true;
    return false;
  };

  for (auto& c : clauses) {
    Rule rule;
    rule.head_pred = c.head.pred;
    rule.head_value = c.head.value;
    int fidx = schema.feature_index(c.head.pred);
    if (c.head.pred == schema.decision_predicate) {
      rule.cls = RuleClass::decision;
    } else if (fidx >= 0) {
      rule.cls = RuleClass::causal;
      const FeatureDecl& f = schema.feature(fidx);
      if (f.numeric) {
        Rational v = Rational::parse(c.head.value); // throws on non-number
        if (v < f.min || f.max < v)
          throw parse_error(c.head.line, c.head.col,
                            "head value " + v.str() + " outside domain of '" + f.name + "'");
      } else if (f.value_index(c.head.value) < 0) {
        throw parse_error(c.head.line, c.head.col,
                          "value '" + c.head.value + "' not declared for feature '" + f.name + "'");
      }
    } else {
      rule.cls = RuleClass::auxiliary;
    }

    for (std::size_t li = 0; li < c.body.size(); ++li) {
      Literal& lit = c.body[li];
      const auto [lline, lcol] = c.body_pos[li];
      if (lit.kind == AtomKind::feature_leq || lit.kind == AtomKind::feature_gt) {
        int bf = schema.feature_index(lit.subject);
        if (bf < 0)
          throw parse_error(lline, lcol, "unknown feature or predicate '" + lit.subject + "'");
        if (!schema.feature(bf).numeric)
          throw parse_error(lline, lcol,
                            "comparison on categorical feature '" + lit.subject + "'");
        rule.body.push_back(lit);
        continue;
      }
      int bf = schema.feature_index(lit.subject);
      if (bf >= 0) {
        const FeatureDecl& f = schema.feature(bf);
        if (f.numeric)
          throw parse_error(lline, lcol,
                            "equality test on numeric feature '" + lit.subject + "'");
        if (f.value_index(lit.value) < 0)
          throw parse_error(lline, lcol,
                            "value '" + lit.value + "' not declared for feature '" + f.name + "'");
        lit.kind = AtomKind::feature_eq;
      } else if (is_head_pred(lit.subject) || lit.subject == schema.decision_predicate) {
        lit.kind = AtomKind::defined;
      } else {
        throw parse_error(lline, lcol,
                          "unknown feature or predicate '" + lit.subject + "'");
      }
      rule.body.push_back(lit);
    }
    rs.rules.push_back(std::move(rule));
  }
  return rs;
}

/// Renders a RuleSet back into the rule grammar. parse_program(print_program(rs))
/// is structurally identical to rs.
inline std::string print_program(const RuleSet& rs) {
  std::ostringstream out;
  for (const auto& r : rs.rules) {
    out << r.head_pred << "(X,'" << r.head_value << "')";
    if (!r.body.empty()) {
      out << " :- ";
      int var = 0;
      for (std::size_t i = 0; i < r.body.size(); ++i) {
        const Literal& lit = r.body[i];
        if (i) out << ", ";
        switch (lit.kind) {
          case AtomKind::feature_eq:
          case AtomKind::defined:
            if (lit.negated) out << "not ";
            out << lit.subject << "(X,'" << lit.value << "')";
            break;
          case AtomKind::feature_leq: {
            std::string v = "N" + std::to_string(++var);
            out << lit.subject << "(X," << v << "), " << v << "=<" << lit.threshold.str();
            break;
          }
          case AtomKind::feature_gt: {
            std::string v = "N" + std::to_string(++var);
            out << lit.subject << "(X," << v << "), not(" << v << "=<" << lit.threshold.str() << ")";
            break;
          }
        }
      }
    }
    out << ".\n";
  }
  return out.str();
}

} // namespace cfplan

#endif
