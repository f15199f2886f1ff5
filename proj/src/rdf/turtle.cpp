// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/rdf/turtle.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <unordered_map>

namespace tinykg::rdf {

TurtleSyntaxError::TurtleSyntaxError(std::size_t line, std::size_t column,
                                     std::string expected)
    : Error("turtle syntax error at line " + std::to_string(line) +
            ", column " + std::to_string(column) + ": expected " + expected),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

UndefinedPrefixError::UndefinedPrefixError(std::string prefix,
                                           std::size_t line,
                                           std::size_t column)
    : Error("undefined prefix '" + prefix + "' at line " +
            std::to_string(line) + ", column " + std::to_string(column)),
      prefix_(std::move(prefix)) {}

namespace {

bool name_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool name_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-';
}

class TurtleParser {
 public:
  explicit TurtleParser(std::string_view text) : text_(text) {}

  Graph parse() {
    skip_ws();
    while (!at_end()) {
      if (peek() == '@') {
        directive();
      } else if (keyword_ahead("PREFIX")) {
        sparql_prefix();
      } else {
        triples();
        expect('.', "'.' after triples");
      }
      skip_ws();
    }
    return std::move(graph_);
  }

 private:
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

  [[noreturn]] void fail(std::string expected) const {
    throw TurtleSyntaxError(line_, col_, std::move(expected));
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

  void expect(char c, const char* what) {
    skip_ws();
    if (peek() != c) fail(what);
    get();
  }

  bool keyword_ahead(std::string_view word) const {
    if (text_.size() - pos_ < word.size()) return false;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) != word[i])
        return false;
    }
    return !name_char(static_cast<unsigned char>(peek(word.size())));
  }

  void directive() {
    get();  // '@'
    std::string word;
    while (std::isalpha(static_cast<unsigned char>(peek()))) word += get();
    if (word != "prefix") fail("'@prefix' (other directives are unsupported)");
    prefix_binding();
    expect('.', "'.' after @prefix");
  }

  void sparql_prefix() {
    for (int i = 0; i < 6; ++i) get();
    prefix_binding();
  }

  void prefix_binding() {
    skip_ws();
    std::string name;
    while (name_char(static_cast<unsigned char>(peek())) || peek() == '.') {
      name += get();
    }
    if (peek() != ':') fail("prefix name followed by ':'");
    get();
    skip_ws();
    graph_.bind_prefix(name, iri_ref());
  }

  std::string iri_ref() {
    if (peek() != '<') fail("'<' starting an IRI");
    get();
    std::string out;
    while (!at_end() && peek() != '>') {
      char c = get();
      if (std::isspace(static_cast<unsigned char>(c))) {
        fail("'>' closing the IRI (whitespace is not allowed)");
      }
      out += c;
    }
    if (at_end()) fail("'>' closing the IRI");
    get();
    if (out.empty()) fail("a non-empty IRI");
    return out;
  }

  Term iri_term(std::string text) {
    try {
      return Term::iri(std::move(text));
    } catch (const StructuralError& e) {
      fail(std::string("a valid IRI (") + e.what() + ")");
    }
  }

  Term prefixed_name() {
    std::size_t line = line_, col = col_;
    std::string prefix;
    while (name_char(static_cast<unsigned char>(peek())) ||
           (peek() == '.' && name_char(static_cast<unsigned char>(peek(1))))) {
      prefix += get();
    }
    if (peek() != ':') fail("':' in prefixed name");
    get();
    std::string local;
    while (name_char(static_cast<unsigned char>(peek())) || peek() == ':' ||
           (peek() == '.' && name_char(static_cast<unsigned char>(peek(1))))) {
      local += get();
    }
    auto it = graph_.prefixes().find(prefix);
    if (it == graph_.prefixes().end()) {
      throw UndefinedPrefixError(prefix, line, col);
    }
    return iri_term(it->second + local);
  }

  Term iri() {
    if (peek() == '<') return iri_term(iri_ref());
    return prefixed_name();
  }

  Term blank_label() {
    get();  // '_'
    get();  // ':'
    std::string label;
    while (name_char(static_cast<unsigned char>(peek())) ||
           (peek() == '.' && name_char(static_cast<unsigned char>(peek(1))))) {
      label += get();
    }
    if (label.empty()) fail("blank-node label after '_:'");
    auto it = labels_.find(label);
    if (it == labels_.end()) {
      it = labels_.emplace(label, graph_.fresh_blank()).first;
    }
    return it->second;
  }

  void triples() {
    skip_ws();
    if (peek() == '[') {
      Term subject = property_list_node();
      skip_ws();
      if (peek() != '.') predicate_object_list(subject);
      return;
    }
    Term subject = subject_term();
    predicate_object_list(subject);
  }

  Term subject_term() {
    char c = peek();
    if (c == '_' && peek(1) == ':') return blank_label();
    if (c == '<' || c == ':' || name_start(static_cast<unsigned char>(c))) {
      return iri();
    }
    if (c == '(') fail("a subject (collections are unsupported)");
    fail("a subject (IRI, prefixed name or blank node)");
  }

  // '[' predicateObjectList? ']'
  Term property_list_node() {
    get();  // '['
    Term node = graph_.fresh_blank();
    skip_ws();
    if (peek() != ']') predicate_object_list(node);
    expect(']', "']' closing the blank-node property list");
    return node;
  }

  void predicate_object_list(const Term& subject) {
    while (true) {
      skip_ws();
      Term predicate = verb();
      object_list(subject, predicate);
      skip_ws();
      if (peek() != ';') return;
      while (peek() == ';') {
        get();
        skip_ws();
      }
      if (peek() == '.' || peek() == ']' || at_end()) return;
    }
  }

  Term verb() {
    if (peek() == 'a' && !name_char(static_cast<unsigned char>(peek(1))) &&
        peek(1) != ':') {
      get();
      return Term::iri(kRdfType);
    }
    char c = peek();
    if (c == '<' || c == ':' || name_start(static_cast<unsigned char>(c))) {
      return iri();
    }
    fail("a predicate (IRI, prefixed name or 'a')");
  }

  void object_list(const Term& subject, const Term& predicate) {
    while (true) {
      skip_ws();
      Term obj = object();
      graph_.insert(Triple{subject, predicate, std::move(obj)});
      skip_ws();
      if (peek() != ',') return;
      get();
    }
  }

  Term object() {
    char c = peek();
    if (c == '[') return property_list_node();
    if (c == '_' && peek(1) == ':') return blank_label();
    if (c == '"' || c == '\'') return string_literal();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return numeric_literal();
    }
    if (keyword_ahead("TRUE") && peek() == 't') {
      for (int i = 0; i < 4; ++i) get();
      return Term::literal("true", std::string(xsd::kNamespace) + "boolean");
    }
    if (keyword_ahead("FALSE") && peek() == 'f') {
      for (int i = 0; i < 5; ++i) get();
      return Term::literal("false", std::string(xsd::kNamespace) + "boolean");
    }
    if (c == '(') fail("an object (collections are unsupported)");
    if (c == '<' || c == ':' || name_start(static_cast<unsigned char>(c))) {
      return iri();
    }
    fail("an object (IRI, blank node or literal)");
  }

  Term numeric_literal() {
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
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        fail("exponent digits");
      }
      while (std::isdigit(static_cast<unsigned char>(peek()))) lex += get();
    }
    if (!Decimal::parse(lex)) fail("a number");
    const std::string& dt =
        exp ? xsd::kDouble : (dot ? xsd::kDecimal : xsd::kInteger);
    return Term::literal(std::move(lex), dt);
  }

  void append_utf8(std::string& out, unsigned long cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  Term string_literal() {
    char quote = get();
    bool long_form = peek() == quote && peek(1) == quote;
    if (long_form) {
      get();
      get();
    }
    std::string lex;
    while (true) {
      if (at_end() || (!long_form && peek() == '\n')) {
        fail("closing quote of string literal");
      }
      char c = get();
      if (c == quote && !long_form) break;
      if (c == quote && peek() == quote && peek(1) == quote) {
        get();
        get();
        break;
      }
      if (c != '\\') {
        lex += c;
        continue;
      }
      if (at_end()) fail("escape sequence");
      char e = get();
      switch (e) {
        case 'n': lex += '\n'; break;
        case 'r': lex += '\r'; break;
        case 't': lex += '\t'; break;
        case 'b': lex += '\b'; break;
        case 'f': lex += '\f'; break;
        case '"': lex += '"'; break;
        case '\'': lex += '\''; break;
        case '\\': lex += '\\'; break;
        case 'u':
        case 'U': {
          int n = e == 'u' ? 4 : 8;
          std::string hex;
          for (int i = 0; i < n; ++i) {
            if (!std::isxdigit(static_cast<unsigned char>(peek()))) {
              fail("hex digits in \\u escape");
            }
            hex += get();
          }
          append_utf8(lex, std::stoul(hex, nullptr, 16));
          break;
        }
        default:
          fail("a valid escape sequence");
      }
    }
    if (peek() == '@') {
      get();
      std::string lang;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')
        lang += get();
      if (lang.empty()) fail("language tag after '@'");
      return Term::lang_literal(std::move(lex), std::move(lang));
    }
    if (peek() == '^' && peek(1) == '^') {
      get();
      get();
      Term dt = iri();
      try {
        return Term::literal(std::move(lex), dt.value());
      } catch (const StructuralError& e) {
        fail(std::string("a literal valid for its datatype (") + e.what() +
             ")");
      }
    }
    return Term::literal(std::move(lex));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  Graph graph_;
  std::unordered_map<std::string, Term> labels_;
};

bool plain_local(std::string_view local) {
  if (local.empty()) return true;
  if (local.front() == '-') return false;
  return std::all_of(local.begin(), local.end(), [](char c) {
    return name_char(static_cast<unsigned char>(c));
  });
}

class TurtleWriter {
 public:
  explicit TurtleWriter(const PrefixMap& prefixes) : prefixes_(prefixes) {}

  std::string iri(const std::string& text) const {
    const std::pair<const std::string, std::string>* best = nullptr;
    for (const auto& entry : prefixes_) {
      const std::string& ns = entry.second;
      if (ns.empty() || !text.starts_with(ns)) continue;
      if (!plain_local(std::string_view(text).substr(ns.size()))) continue;
      if (best == nullptr || ns.size() > best->second.size()) best = &entry;
    }
    if (best == nullptr) return "<" + text + ">";
    return best->first + ":" + text.substr(best->second.size());
  }

  std::string term(const Term& t) const {
    if (t.is_iri()) return iri(t.value());
    if (t.is_blank()) return "_:" + t.value();
    return literal(t);
  }

 private:
  static bool matches(const std::string& s, const std::regex& re) {
    return std::regex_match(s, re);
  }

  std::string literal(const Term& t) const {
    static const std::regex kInt(R"([+-]?[0-9]+)");
    static const std::regex kDec(R"([+-]?[0-9]*\.[0-9]+)");
    static const std::regex kDbl(
        R"([+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)[eE][+-]?[0-9]+)");
    const std::string& dt = t.datatype();
    const std::string& lex = t.value();
    if (dt == xsd::kInteger && matches(lex, kInt)) return lex;
    if (dt == xsd::kDecimal && matches(lex, kDec)) return lex;
    if (dt == xsd::kDouble && matches(lex, kDbl)) return lex;
    std::string quoted = "\"";
    for (unsigned char c : lex) {
      switch (c) {
        case '"': quoted += "\\\""; break;
        case '\\': quoted += "\\\\"; break;
        case '\n': quoted += "\\n"; break;
        case '\r': quoted += "\\r"; break;
        case '\t': quoted += "\\t"; break;
        default:
          if (c < 0x20) {
            static const char* kHex = "0123456789ABCDEF";
            quoted += "\\u00";
            quoted += kHex[c >> 4];
            quoted += kHex[c & 0xF];
          } else {
            quoted += static_cast<char>(c);
          }
      }
    }
    quoted += '"';
    if (!t.language().empty()) return quoted + "@" + t.language();
    if (dt == xsd::kString) return quoted;
    return quoted + "^^" + iri(dt);
  }

  const PrefixMap& prefixes_;
};

}  // namespace

Graph parse_turtle(std::string_view text) {
  return TurtleParser(text).parse();
}

std::string serialize_turtle(const Graph& g) {
  std::string out;
  for (const auto& [name, ns] : g.prefixes()) {
    out += "@prefix " + name + ": <" + ns + "> .\n";
  }
  if (g.empty()) return out;
  if (!out.empty()) out += "\n";

  TurtleWriter w(g.prefixes());
  const Term* subject = nullptr;
  const Term* predicate = nullptr;
  for (const Triple& t : g.triples()) {
    if (subject == nullptr || t.subject != *subject) {
      if (subject != nullptr) out += " .\n\n";
      out += w.term(t.subject) + " ";
      subject = &t.subject;
      predicate = nullptr;
    }
    if (predicate == nullptr || t.predicate != *predicate) {
      if (predicate != nullptr) out += " ;\n    ";
      out += t.predicate.value() == kRdfType ? "a" : w.iri(t.predicate.value());
      out += " " + w.term(t.object);
      predicate = &t.predicate;
    } else {
      out += ", " + w.term(t.object);
    }
  }
  out += " .\n";
  return out;
}

}  // namespace tinykg::rdf
