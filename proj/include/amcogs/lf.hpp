// COGS logical forms: AST, parser for both surface syntaxes (compact and the
// dataset's space-tokenized form), printers, and canonical conjunct ordering.
//
// A formula is an optional iota prefix (definite NPs), a conjunction of terms,
// and, for primitives, a lambda prefix. Conjuncts are kept in surface order;
// canonicalOrder() sorts them by the token positions of their arguments, which
// is the order the dataset files use.
#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amcogs/errors.hpp"
#include "amcogs/strings.hpp"

namespace amcogs {

enum class ArgKind { Variable, ProperName, LambdaVar };

struct Argument {
  ArgKind kind = ArgKind::Variable;
  int index = -1;               // Variable: 0-based token position
  std::string name;             // ProperName / LambdaVar
  std::optional<int> alignment; // ProperName: token index cached by convert

  static Argument variable(int idx) {
    if (idx < 0) throw Error("variable index must be >= 0");
    Argument a;
    a.kind = ArgKind::Variable;
    a.index = idx;
    return a;
  }
  static Argument properName(std::string n, std::optional<int> align = std::nullopt) {
    Argument a;
    a.kind = ArgKind::ProperName;
    a.name = std::move(n);
    a.alignment = align;
    return a;
  }
  static Argument lambdaVar(std::string n) {
    if (n != "a" && n != "b" && n != "e")
      throw Error("lambda variable must be one of a, b, e: " + n);
    Argument a;
    a.kind = ArgKind::LambdaVar;
    a.name = std::move(n);
    return a;
  }

  // The alignment cache is derived data and does not take part in equality.
  bool operator==(const Argument& o) const {
    return kind == o.kind && index == o.index && name == o.name;
  }
};

// Token position used for sorting. Unary terms use -1 as their second key.
inline int tokenIndexOf(const Argument& a) {
  switch (a.kind) {
    case ArgKind::Variable:
      return a.index;
    case ArgKind::ProperName:
      if (!a.alignment) throw UnalignedName("proper name has no alignment: " + a.name);
      return *a.alignment;
    case ArgKind::LambdaVar:
      throw Error("lambda variables carry no token position");
  }
  throw Error("unreachable");
}

struct Term {
  std::vector<std::string> predicateParts; // 1..3 parts, e.g. {"bowl","nmod","on"}
  std::vector<Argument> args;              // 1..2 (0 only for bare primitives)

  Term() = default;
  Term(std::vector<std::string> parts, std::vector<Argument> as)
      : predicateParts(std::move(parts)), args(std::move(as)) {}

  bool unary() const { return args.size() == 1; }
  bool binary() const { return args.size() == 2; }
  const std::string& lemma() const { return predicateParts.front(); }
  std::string predicate() const { return join(predicateParts, "."); }

  bool operator==(const Term&) const = default;
};

struct LogicalForm {
  std::vector<Term> iotaTerms;  // definite-NP prefix, each term unary
  std::vector<Term> conjuncts;
  // Present iff this is a primitive. Empty vector = bare one-word primitive
  // (e.g. the proper-name primitive "Paula").
  std::optional<std::vector<std::string>> lambdaPrefix;

  bool isPrimitive() const { return lambdaPrefix.has_value(); }
  bool isBareName() const { return isPrimitive() && lambdaPrefix->empty(); }

  bool operator==(const LogicalForm&) const = default;

  void validate() const {
    if (!iotaTerms.empty() && isPrimitive())
      throw Error("iota prefix cannot occur in a primitive");
    for (const Term& t : iotaTerms) {
      if (!t.unary() || t.args[0].kind != ArgKind::Variable)
        throw Error("iota terms must be unary over a variable");
      if (t.predicateParts.size() != 1) throw Error("iota predicate must have one part");
    }
    for (const Term& t : conjuncts) {
      if (t.args.empty()) {
        if (!isBareName() || conjuncts.size() != 1)
          throw Error("zero-argument term outside a bare primitive");
        continue;
      }
      if (t.args.size() > 2) throw ArityError("term with more than two arguments");
      if (t.predicateParts.empty() || t.predicateParts.size() > 3)
        throw Error("predicate must have 1 to 3 parts");
      if (t.unary() && t.predicateParts.size() != 1)
        throw Error("unary term must have a single predicate part");
      if (t.binary() && t.args[0].kind == ArgKind::ProperName)
        throw Error("first argument of a binary term must not be a proper name");
      for (const Argument& a : t.args) {
        bool isLambda = a.kind == ArgKind::LambdaVar;
        if (isPrimitive() && !isLambda && !isBareName())
          throw Error("primitive conjuncts may use only lambda variables");
        if (!isPrimitive() && isLambda)
          throw Error("lambda variable outside a primitive");
      }
    }
  }
};

enum class LfFormat { Compact, Tokenized };

namespace detail {

struct Lexeme {
  enum Kind {
    LParen,
    RParen,
    Comma,
    Dot,
    Semi,
    Star,
    Underscore,
    And,
    Lambda,
    Ident,
    Number,
    End
  } kind;
  std::string text;
  std::size_t offset;
};

inline std::vector<Lexeme> lexLf(std::string_view s) {
  std::vector<Lexeme> out;
  std::size_t i = 0;
  auto push = [&](Lexeme::Kind k, std::string t, std::size_t off) {
    out.push_back({k, std::move(t), off});
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t off = i;
    switch (c) {
      case '(': push(Lexeme::LParen, "(", off); ++i; continue;
      case ')': push(Lexeme::RParen, ")", off); ++i; continue;
      case ',': push(Lexeme::Comma, ",", off); ++i; continue;
      case '.': push(Lexeme::Dot, ".", off); ++i; continue;
      case ';': push(Lexeme::Semi, ";", off); ++i; continue;
      case '*': push(Lexeme::Star, "*", off); ++i; continue;
      case '_': push(Lexeme::Underscore, "_", off); ++i; continue;
      default: break;
    }
    // UTF-8 conjunction and lambda symbols
    if (s.substr(i).starts_with("\xE2\x88\xA7")) {  // ∧
      push(Lexeme::And, "AND", off);
      i += 3;
      continue;
    }
    if (s.substr(i).starts_with("\xCE\xBB")) {  // λ
      push(Lexeme::Lambda, "LAMBDA", off);
      i += 2;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      push(Lexeme::Number, std::string(s.substr(i, j - i)), off);
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      std::string word(s.substr(i, j - i));
      if (word == "AND")
        push(Lexeme::And, word, off);
      else if (word == "LAMBDA")
        push(Lexeme::Lambda, word, off);
      else
        push(Lexeme::Ident, word, off);
      i = j;
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", off);
  }
  push(Lexeme::End, "", s.size());
  return out;
}

class LfParser {
 public:
  explicit LfParser(std::string_view text) : toks_(lexLf(text)) {}

  LogicalForm parse() {
    LogicalForm lf;
    if (peek().kind == Lexeme::Lambda) {
      std::vector<std::string> prefix;
      while (peek().kind == Lexeme::Lambda) {
        next();
        const Lexeme& v = expect(Lexeme::Ident, "lambda variable");
        if (v.text != "a" && v.text != "b" && v.text != "e")
          throw SyntaxError("lambda variable must be a, b or e", v.offset);
        if (std::find(prefix.begin(), prefix.end(), v.text) != prefix.end())
          throw SyntaxError("duplicate lambda variable " + v.text, v.offset);
        prefix.push_back(v.text);
        expect(Lexeme::Dot, "'.' after lambda variable");
      }
      lambdaVars_ = prefix;
      lf.lambdaPrefix = std::move(prefix);
      lf.conjuncts = parseConjunction();
      expect(Lexeme::End, "end of formula");
      lf.validate();
      return lf;
    }
    // Bare one-word primitive ("Paula", "shark").
    if (peek().kind == Lexeme::Ident && toks_[pos_ + 1].kind == Lexeme::End) {
      lf.lambdaPrefix.emplace();
      lf.conjuncts.push_back(Term({next().text}, {}));
      lf.validate();
      return lf;
    }
    while (peek().kind == Lexeme::Star) {
      next();
      Term t = parseTerm();
      if (!t.unary() || t.args[0].kind != ArgKind::Variable)
        throw SyntaxError("iota term must be unary over a variable", peek().offset);
      expect(Lexeme::Semi, "';' after iota term");
      lf.iotaTerms.push_back(std::move(t));
    }
    lf.conjuncts = parseConjunction();
    expect(Lexeme::End, "end of formula");
    lf.validate();
    return lf;
  }

 private:
  std::vector<Term> parseConjunction() {
    std::vector<Term> terms;
    terms.push_back(parseTerm());
    while (peek().kind == Lexeme::And) {
      next();
      terms.push_back(parseTerm());
    }
    return terms;
  }

  Term parseTerm() {
    Term t;
    t.predicateParts.push_back(expect(Lexeme::Ident, "predicate name").text);
    while (peek().kind == Lexeme::Dot) {
      next();
      t.predicateParts.push_back(expect(Lexeme::Ident, "predicate part").text);
      if (t.predicateParts.size() > 3)
        throw SyntaxError("predicate has more than 3 parts", peek().offset);
    }
    expect(Lexeme::LParen, "'('");
    t.args.push_back(parseArg());
    if (peek().kind == Lexeme::Comma) {
      next();
      t.args.push_back(parseArg());
    }
    if (peek().kind == Lexeme::Comma)
      throw ArityError("term with more than two arguments");
    expect(Lexeme::RParen, "')'");
    return t;
  }

  Argument parseArg() {
    const Lexeme& l = expect(Lexeme::Ident, "argument");
    // "x _ 3" (tokenized) or "x_3" / "x" (compact)
    if (l.text == "x" && peek().kind == Lexeme::Underscore) {
      next();
      const Lexeme& n = expect(Lexeme::Number, "variable index");
      return Argument::variable(std::stoi(n.text));
    }
    if (l.text.size() > 2 && l.text.rfind("x_", 0) == 0 &&
        std::all_of(l.text.begin() + 2, l.text.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      return Argument::variable(std::stoi(l.text.substr(2)));
    if (lambdaVars_) {
      if (std::find(lambdaVars_->begin(), lambdaVars_->end(), l.text) == lambdaVars_->end())
        throw SyntaxError("argument '" + l.text + "' is not a bound lambda variable",
                          l.offset);
      return Argument::lambdaVar(l.text);
    }
    return Argument::properName(l.text);
  }

  const Lexeme& peek() const { return toks_[pos_]; }
  const Lexeme& next() { return toks_[pos_++]; }
  const Lexeme& expect(Lexeme::Kind k, const std::string& what) {
    if (toks_[pos_].kind != k)
      throw SyntaxError("expected " + what + ", got '" + toks_[pos_].text + "'",
                        toks_[pos_].offset);
    return toks_[pos_++];
  }

  std::vector<Lexeme> toks_;
  std::size_t pos_ = 0;
  std::optional<std::vector<std::string>> lambdaVars_;
};

inline void termTokens(const Term& t, std::vector<std::string>& out) {
  for (std::size_t i = 0; i < t.predicateParts.size(); ++i) {
    if (i) out.push_back(".");
    out.push_back(t.predicateParts[i]);
  }
  out.push_back("(");
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out.push_back(",");
    const Argument& a = t.args[i];
    if (a.kind == ArgKind::Variable) {
      out.push_back("x");
      out.push_back("_");
      out.push_back(std::to_string(a.index));
    } else {
      out.push_back(a.name);
    }
  }
  out.push_back(")");
}

inline std::string termCompact(const Term& t) {
  std::string s = t.predicate() + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) s += ",";
    const Argument& a = t.args[i];
    s += a.kind == ArgKind::Variable ? "x_" + std::to_string(a.index) : a.name;
  }
  return s + ")";
}

}  // namespace detail

inline LogicalForm parseLf(std::string_view text) {
  return detail::LfParser(text).parse();
}

inline std::string printLf(const LogicalForm& lf, LfFormat format) {
  lf.validate();
  if (lf.isBareName()) return lf.conjuncts[0].lemma();
  if (!lf.isPrimitive() && lf.conjuncts.empty())
    throw Error("refusing to print an empty conjunction");

  if (format == LfFormat::Compact) {
    std::string s;
    if (lf.isPrimitive())
      for (const std::string& v : *lf.lambdaPrefix) s += "LAMBDA " + v + ". ";
    for (const Term& t : lf.iotaTerms) s += "*" + detail::termCompact(t) + "; ";
    std::vector<std::string> cs;
    for (const Term& t : lf.conjuncts) cs.push_back(detail::termCompact(t));
    return s + join(cs, " AND ");
  }

  std::vector<std::string> toks;
  if (lf.isPrimitive())
    for (const std::string& v : *lf.lambdaPrefix) {
      toks.push_back("LAMBDA");
      toks.push_back(v);
      toks.push_back(".");
    }
  for (const Term& t : lf.iotaTerms) {
    toks.push_back("*");
    detail::termTokens(t, toks);
    toks.push_back(";");
  }
  for (std::size_t i = 0; i < lf.conjuncts.size(); ++i) {
    if (i) toks.push_back("AND");
    detail::termTokens(lf.conjuncts[i], toks);
  }
  return join(toks, " ");
}

// Sorts iota terms by their variable's token index and conjuncts by
// (first-arg index, second-arg index or -1), keeping equal keys stable.
// Primitives have no token positions and are returned unchanged.
inline LogicalForm canonicalOrder(const LogicalForm& lf) {
  if (lf.isPrimitive()) return lf;
  LogicalForm out = lf;
  // Keys are computed up front so a missing proper-name alignment surfaces
  // even when no comparison would have touched it.
  auto sortByKey = [](std::vector<Term>& terms, auto key) {
    std::vector<std::pair<decltype(key(terms[0])), std::size_t>> order;
    for (std::size_t i = 0; i < terms.size(); ++i) order.push_back({key(terms[i]), i});
    std::stable_sort(order.begin(), order.end());
    std::vector<Term> sorted;
    sorted.reserve(terms.size());
    for (const auto& [k, i] : order) sorted.push_back(std::move(terms[i]));
    terms = std::move(sorted);
  };
  sortByKey(out.iotaTerms,
            [](const Term& t) { return std::pair<int, int>(tokenIndexOf(t.args[0]), 0); });
  sortByKey(out.conjuncts, [](const Term& t) {
    return std::pair<int, int>(tokenIndexOf(t.args[0]),
                               t.binary() ? tokenIndexOf(t.args[1]) : -1);
  });
  return out;
}

}  // namespace amcogs
