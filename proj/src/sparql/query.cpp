// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/sparql/query.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>

namespace tinykg::sparql {

QuerySyntaxError::QuerySyntaxError(std::size_t line, std::size_t column,
                                   std::string message)
    : QueryError("query syntax error at line " + std::to_string(line) +
                 ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

UnknownPrefixError::UnknownPrefixError(std::string prefix, std::size_t line,
                                       std::size_t column)
    : QueryError("unknown prefix '" + prefix + "' at line " +
                 std::to_string(line) + ", column " + std::to_string(column)),
      prefix_(std::move(prefix)) {}

UnsupportedFeatureError::UnsupportedFeatureError(std::string keyword)
    : QueryError("unsupported feature " + keyword), keyword_(std::move(keyword)) {}

InvalidRegexError::InvalidRegexError(std::string pattern,
                                     const std::string& reason)
    : QueryError("invalid regex \"" + pattern + "\": " + reason),
      pattern_(std::move(pattern)) {}

std::string filter_variable(const FilterExpr& f) {
  return std::visit(
      [](const auto& expr) -> std::string {
        if constexpr (std::is_same_v<std::decay_t<decltype(expr)>,
                                     CompareFilter>) {
          return expr.lhs.variable;
        } else {
          return expr.target.variable;
        }
      },
      f);
}

namespace {

bool word_char(unsigned char c) { return std::isalnum(c) || c == '_'; }
bool pname_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-';
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// Keywords that name SPARQL features outside the supported subset.
const std::set<std::string>& unsupported_keywords() {
  static const std::set<std::string> kWords = {
      "OPTIONAL", "UNION",  "MINUS",    "BIND",      "VALUES",  "SERVICE",
      "GRAPH",    "GROUP",  "HAVING",   "LIMIT",     "OFFSET",  "DISTINCT",
      "REDUCED",  "FROM",   "CONSTRUCT", "ASK",      "DESCRIBE", "INSERT",
      "DELETE",   "LOAD",   "CLEAR",    "EXISTS",    "NOT",     "BASE",
      "DESC",     "WITH",   "CREATE",   "DROP"};
  return kWords;
}

class QueryParser {
 public:
  QueryParser(std::string_view text, const rdf::PrefixMap& known)
      : text_(text) {
    ast_.prefixes = known;
  }

  QueryAst parse() {
    prologue();
    select_clause();
    where_clause();
    solution_modifiers();
    skip_ws();
    if (!at_end()) fail("end of query");
    validate();
    return std::move(ast_);
  }

 private:
  struct Mark {
    std::size_t line;
    std::size_t col;
  };

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  char get() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  Mark mark() const { return {line_, col_}; }

  [[noreturn]] void fail(const std::string& expected) const {
    throw QuerySyntaxError(line_, col_, "expected " + expected);
  }
  [[noreturn]] void fail_at(Mark m, const std::string& message) const {
    throw QuerySyntaxError(m.line, m.col, message);
  }

  void skip_ws() {
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') get();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        get();
      } else {
        break;
      }
    }
  }

  // Reads a bare word without consuming it.
  // Names a nested group by what follows it, so "{ ... } UNION" reports UNION.
  std::string group_keyword() const {
    std::size_t i = pos_;
    int depth = 0;
    for (; i < text_.size(); ++i) {
      if (text_[i] == '{') ++depth;
      if (text_[i] == '}' && --depth == 0) break;
    }
    ++i;
    while (i < text_.size() && std::isspace(static_cast<unsigned char>(text_[i]))) ++i;
    std::size_t j = i;
    while (j < text_.size() && std::isalpha(static_cast<unsigned char>(text_[j]))) ++j;
    std::string w = upper(std::string(text_.substr(i, j - i)));
    return w == "UNION" || w == "MINUS" ? w : "nested group";
  }

  std::string peek_word() const {
    std::size_t i = pos_;
    while (i < text_.size() && word_char(static_cast<unsigned char>(text_[i]))) ++i;
    if (i < text_.size() && text_[i] == ':') return {};  // prefixed name
    return std::string(text_.substr(pos_, i - pos_));
  }

  bool accept_keyword(std::string_view kw) {
    skip_ws();
    std::string w = peek_word();
    if (upper(w) != kw) return false;
    for (std::size_t i = 0; i < w.size(); ++i) get();
    return true;
  }

  void reject_unsupported(const std::string& word) const {
    std::string u = upper(word);
    if (unsupported_keywords().contains(u)) throw UnsupportedFeatureError(u);
  }

  void expect(char c, const std::string& what) {
    skip_ws();
    if (peek() != c) fail(what);
    get();
  }

  void prologue() {
    while (true) {
      skip_ws();
      std::string w = upper(peek_word());
      if (w == "PREFIX") {
        accept_keyword("PREFIX");
        skip_ws();
        std::string name;
        while (pname_char(static_cast<unsigned char>(peek())) || peek() == '.') {
          name += get();
        }
        if (peek() != ':') fail("prefix name followed by ':'");
        get();
        skip_ws();
        ast_.prefixes[name] = iri_ref();
        continue;
      }
      reject_unsupported(w);
      return;
    }
  }

  void select_clause() {
    skip_ws();
    std::string w = upper(peek_word());
    reject_unsupported(w);
    if (!accept_keyword("SELECT")) fail("SELECT");
    skip_ws();
    reject_unsupported(peek_word());
    if (peek() == '*') throw UnsupportedFeatureError("SELECT *");
    while (true) {
      skip_ws();
      if (peek() != '?' && peek() != '$') break;
      Mark m = mark();
      std::string v = variable();
      projection_marks_.push_back(m);
      ast_.projection.push_back(std::move(v));
    }
    if (ast_.projection.empty()) fail("at least one projected variable");
    skip_ws();
    reject_unsupported(peek_word());
  }

  void where_clause() {
    accept_keyword("WHERE");
    expect('{', "'{' opening the WHERE clause");
    while (true) {
      skip_ws();
      if (at_end()) fail("'}' closing the WHERE clause");
      char c = peek();
      if (c == '}') {
        get();
        return;
      }
      if (c == '.') {
        get();
        continue;
      }
      if (c == '{') throw UnsupportedFeatureError(group_keyword());
      std::string w = peek_word();
      if (!w.empty() && w != "a") {
        std::string u = upper(w);
        if (u == "FILTER") {
          accept_keyword("FILTER");
          filter();
          continue;
        }
        reject_unsupported(u);
      }
      triples_block();
    }
  }

  void solution_modifiers() {
    skip_ws();
    std::string w = upper(peek_word());
    if (w == "ORDER") {
      accept_keyword("ORDER");
      if (!accept_keyword("BY")) fail("BY after ORDER");
      skip_ws();
      std::string dir = upper(peek_word());
      reject_unsupported(dir);
      OrderBy ob;
      Mark m = mark();
      if (dir == "ASC") {
        accept_keyword("ASC");
        expect('(', "'(' after ASC");
        skip_ws();
        m = mark();
        ob.variable = variable();
        expect(')', "')' after ASC variable");
      } else {
        ob.variable = variable();
      }
      order_mark_ = m;
      ast_.order_by = ob;
      skip_ws();
      w = upper(peek_word());
      if (w == "ASC" || w == "DESC" || peek() == '?') {
        throw UnsupportedFeatureError("multiple ORDER BY keys");
      }
    }
    reject_unsupported(w);
  }

  std::string variable() {
    skip_ws();
    if (peek() != '?' && peek() != '$') fail("a variable");
    get();
    std::string name;
    while (word_char(static_cast<unsigned char>(peek()))) name += get();
    if (name.empty()) fail("variable name");
    return name;
  }

  std::string iri_ref() {
    if (peek() != '<') fail("'<' starting an IRI");
    get();
    std::string out;
    while (!at_end() && peek() != '>') {
      char c = get();
      if (std::isspace(static_cast<unsigned char>(c))) fail("'>' closing the IRI");
      out += c;
    }
    if (at_end() || out.empty()) fail("'>' closing a non-empty IRI");
    get();
    return out;
  }

  rdf::Term make_iri(std::string text, Mark m) {
    try {
      return rdf::Term::iri(std::move(text));
    } catch (const rdf::StructuralError& e) {
      fail_at(m, std::string("invalid IRI: ") + e.what());
    }
  }

  rdf::Term prefixed_name() {
    Mark m = mark();
    std::string prefix;
    while (pname_char(static_cast<unsigned char>(peek())) ||
           (peek() == '.' && pname_char(static_cast<unsigned char>(peek(1))))) {
      prefix += get();
    }
    if (peek() != ':') fail("':' in prefixed name");
    get();
    std::string local;
    while (pname_char(static_cast<unsigned char>(peek())) ||
           (peek() == '.' && pname_char(static_cast<unsigned char>(peek(1))))) {
      local += get();
    }
    auto it = ast_.prefixes.find(prefix);
    if (it == ast_.prefixes.end()) throw UnknownPrefixError(prefix, m.line, m.col);
    return make_iri(it->second + local, m);
  }

  rdf::Term iri() {
    Mark m = mark();
    if (peek() == '<') return make_iri(iri_ref(), m);
    return prefixed_name();
  }

  rdf::Term number() {
    Mark m = mark();
    std::string lex;
    if (peek() == '+' || peek() == '-') lex += get();
    while (std::isdigit(static_cast<unsigned char>(peek()))) lex += get();
    bool dot = false;
    bool exp = false;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      dot = true;
      lex += get();
      while (std::isdigit(static_cast<unsigned char>(peek()))) lex += get();
    }
    if (peek() == 'e' || peek() == 'E') {
      exp = true;
      lex += get();
      if (peek() == '+' || peek() == '-') lex += get();
      while (std::isdigit(static_cast<unsigned char>(peek()))) lex += get();
    }
    if (!rdf::Decimal::parse(lex)) fail_at(m, "malformed number '" + lex + "'");
    const std::string& dt =
        exp ? rdf::xsd::kDouble : (dot ? rdf::xsd::kDecimal : rdf::xsd::kInteger);
    return rdf::Term::literal(std::move(lex), dt);
  }

  std::string string_body() {
    char quote = get();
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("closing quote");
      char c = get();
      if (c == quote) return out;
      if (c == '\\') {
        if (at_end()) fail("escape sequence");
        char e = get();
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '"': out += '"'; break;
          case '\'': out += '\''; break;
          case '\\': out += '\\'; break;
          default: fail("a valid escape sequence");
        }
        continue;
      }
      out += c;
    }
  }

  rdf::Term string_literal() {
    Mark m = mark();
    std::string lex = string_body();
    if (peek() == '@') {
      get();
      std::string lang;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')
        lang += get();
      return rdf::Term::lang_literal(std::move(lex), std::move(lang));
    }
    if (peek() == '^' && peek(1) == '^') {
      get();
      get();
      rdf::Term dt = iri();
      try {
        return rdf::Term::literal(std::move(lex), dt.value());
      } catch (const rdf::StructuralError& e) {
        fail_at(m, e.what());
      }
    }
    return rdf::Term::literal(std::move(lex));
  }

  PatternTerm pattern_term(bool predicate_position) {
    skip_ws();
    char c = peek();
    if (c == '?' || c == '$') return Variable{variable()};
    if (c == '<') return iri();
    if (c == '_' && peek(1) == ':') throw UnsupportedFeatureError("blank node in pattern");
    if (c == '[') throw UnsupportedFeatureError("blank node in pattern");
    if (c == '(') throw UnsupportedFeatureError("collection");
    if (predicate_position) {
      if (c == 'a' && !pname_char(static_cast<unsigned char>(peek(1))) &&
          peek(1) != ':') {
        get();
        return rdf::Term::iri(rdf::kRdfType);
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == ':') return iri();
      fail("a predicate (variable, IRI, prefixed name or 'a')");
    }
    if (c == '"' || c == '\'') return string_literal();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return number();
    }
    std::string w = peek_word();
    if (w == "true" || w == "false") {
      for (std::size_t i = 0; i < w.size(); ++i) get();
      return rdf::Term::literal(w, std::string(rdf::xsd::kNamespace) + "boolean");
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == ':') return iri();
    fail("a term (variable, IRI, prefixed name or literal)");
  }

  void triples_block() {
    Mark subject_mark = mark();
    PatternTerm subject = pattern_term(false);
    if (auto* t = std::get_if<rdf::Term>(&subject); t && t->is_literal()) {
      fail_at(subject_mark, "a subject that is not a literal");
    }
    while (true) {
      PatternTerm predicate = pattern_term(true);
      while (true) {
        PatternTerm object = pattern_term(false);
        ast_.patterns.push_back(TriplePattern{subject, predicate, object});
        skip_ws();
        if (peek() != ',') break;
        get();
      }
      skip_ws();
      if (peek() != ';') break;
      while (peek() == ';') {
        get();
        skip_ws();
      }
      if (peek() == '.' || peek() == '}') break;
      std::string w = upper(peek_word());
      if (w == "FILTER") break;
    }
    skip_ws();
    if (peek() == '.') {
      get();
      return;
    }
    if (peek() == '}' || upper(peek_word()) == "FILTER") return;
    fail("'.', ';', ',' or '}' after a triple pattern");
  }

  Operand operand() {
    skip_ws();
    if (peek() == '?' || peek() == '$') {
      Mark m = mark();
      Operand op{variable(), false};
      filter_marks_.push_back(m);
      return op;
    }
    std::string w = peek_word();
    if (upper(w) == "STR") {
      accept_keyword("STR");
      expect('(', "'(' after str");
      skip_ws();
      Mark m = mark();
      Operand op{variable(), true};
      filter_marks_.push_back(m);
      expect(')', "')' closing str(...)");
      return op;
    }
    if (!w.empty()) {
      reject_unsupported(w);
      throw UnsupportedFeatureError("function " + w);
    }
    fail("a variable or str(?variable)");
  }

  std::optional<CompareOp> comparison() {
    skip_ws();
    char c = peek();
    char n = peek(1);
    if (c == '<' && n == '=') { get(); get(); return CompareOp::kLessEqual; }
    if (c == '>' && n == '=') { get(); get(); return CompareOp::kGreaterEqual; }
    if (c == '!' && n == '=') { get(); get(); return CompareOp::kNotEqual; }
    if (c == '<') { get(); return CompareOp::kLess; }
    if (c == '>') { get(); return CompareOp::kGreater; }
    if (c == '=') { get(); return CompareOp::kEqual; }
    return std::nullopt;
  }

  static CompareOp flipped(CompareOp op) {
    switch (op) {
      case CompareOp::kLess: return CompareOp::kGreater;
      case CompareOp::kLessEqual: return CompareOp::kGreaterEqual;
      case CompareOp::kGreater: return CompareOp::kLess;
      case CompareOp::kGreaterEqual: return CompareOp::kLessEqual;
      default: return op;
    }
  }

  rdf::Term numeric_constant() {
    skip_ws();
    char c = peek();
    Mark m = mark();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
        c == '.') {
      return number();
    }
    if (c == '"' || c == '\'') {
      rdf::Term t = string_literal();
      if (t.is_numeric()) return t;
      fail_at(m, "comparison constants must be numeric literals");
    }
    fail("a numeric constant");
  }

  FilterExpr regex_call() {
    accept_keyword("REGEX");
    expect('(', "'(' after regex");
    Operand target = operand();
    expect(',', "',' after the regex target");
    skip_ws();
    if (peek() != '"' && peek() != '\'') fail("a string pattern");
    std::string pattern = string_body();
    std::string flags;
    skip_ws();
    if (peek() == ',') {
      get();
      skip_ws();
      if (peek() != '"' && peek() != '\'') fail("a string of regex flags");
      flags = string_body();
    }
    expect(')', "')' closing regex(...)");
    for (char f : flags) {
      if (f != 'i') throw UnsupportedFeatureError(std::string("regex flag '") + f + "'");
    }
    if (flags.size() > 1) flags = "i";
    try {
      std::regex re(pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw InvalidRegexError(pattern, e.what());
    }
    return RegexFilter{std::move(target), std::move(pattern), std::move(flags)};
  }

  FilterExpr filter_body() {
    skip_ws();
    if (upper(peek_word()) == "REGEX") return regex_call();
    char c = peek();
    if (c == '?' || c == '$' || std::isalpha(static_cast<unsigned char>(c))) {
      Operand lhs = operand();
      auto op = comparison();
      if (!op) fail("a comparison operator");
      return CompareFilter{std::move(lhs), *op, numeric_constant()};
    }
    rdf::Term constant = numeric_constant();
    auto op = comparison();
    if (!op) fail("a comparison operator");
    return CompareFilter{operand(), flipped(*op), std::move(constant)};
  }

  void filter() {
    skip_ws();
    FilterExpr expr;
    if (peek() == '(') {
      get();
      expr = filter_body();
      skip_ws();
      if (peek() == '&' || peek() == '|') {
        throw UnsupportedFeatureError(peek() == '&' ? "&&" : "||");
      }
      expect(')', "')' closing FILTER");
    } else if (upper(peek_word()) == "REGEX") {
      expr = regex_call();
    } else {
      std::string w = peek_word();
      if (!w.empty()) {
        reject_unsupported(w);
        throw UnsupportedFeatureError("function " + w);
      }
      fail("'(' or regex after FILTER");
    }
    ast_.filters.push_back(std::move(expr));
  }

  void validate() const {
    if (ast_.patterns.empty()) {
      throw QuerySyntaxError(line_, col_, "WHERE clause has no triple patterns");
    }
    std::set<std::string> bound;
    for (const auto& p : ast_.patterns) {
      for (const PatternTerm* t : {&p.subject, &p.predicate, &p.object}) {
        if (auto* v = std::get_if<Variable>(t)) bound.insert(v->name);
      }
    }
    for (std::size_t i = 0; i < ast_.projection.size(); ++i) {
      if (!bound.contains(ast_.projection[i])) {
        fail_at(projection_marks_[i], "projected variable ?" +
                                          ast_.projection[i] +
                                          " does not occur in any pattern");
      }
    }
    for (std::size_t i = 0; i < ast_.filters.size(); ++i) {
      std::string v = filter_variable(ast_.filters[i]);
      if (!bound.contains(v)) {
        fail_at(filter_marks_[i],
                "filter variable ?" + v + " does not occur in any pattern");
      }
    }
    if (ast_.order_by && !bound.contains(ast_.order_by->variable)) {
      fail_at(order_mark_, "ORDER BY variable ?" + ast_.order_by->variable +
                               " does not occur in any pattern");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  QueryAst ast_;
  std::vector<Mark> projection_marks_;
  std::vector<Mark> filter_marks_;
  Mark order_mark_{1, 1};
};

}  // namespace

QueryAst parse_query(std::string_view text, const rdf::PrefixMap& known_prefixes) {
  return QueryParser(text, known_prefixes).parse();
}

}  // namespace tinykg::sparql
