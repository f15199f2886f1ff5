// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/rdf/term.hpp"

#include <array>
#include <cctype>

namespace tinykg::rdf {
namespace {

bool bad_iri_char(unsigned char c) {
  return std::isspace(c) || c == '<' || c == '>' || c == '"' || c < 0x20;
}

bool label_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c == '.';
}

}  // namespace

bool is_numeric_datatype(std::string_view datatype) {
  if (!datatype.starts_with(xsd::kNamespace)) return false;
  static constexpr std::array<std::string_view, 17> kNumeric = {
      "integer",         "decimal",          "double",
      "float",           "int",              "long",
      "short",           "byte",             "nonNegativeInteger",
      "positiveInteger", "negativeInteger",  "nonPositiveInteger",
      "unsignedInt",     "unsignedLong",     "unsignedShort",
      "unsignedByte",    "unsignedInteger"};
  auto local = datatype.substr(xsd::kNamespace.size());
  for (auto name : kNumeric) {
    if (local == name) return true;
  }
  return false;
}

Term Term::iri(std::string text) {
  if (text.empty()) throw StructuralError("empty IRI");
  for (unsigned char c : text) {
    if (bad_iri_char(c)) {
      throw StructuralError("IRI contains whitespace or a delimiter: " + text);
    }
  }
  Term t;
  t.kind_ = TermKind::kIri;
  t.value_ = std::move(text);
  return t;
}

Term Term::blank(std::string label) {
  if (label.empty()) throw StructuralError("empty blank-node label");
  for (unsigned char c : label) {
    if (!label_char(c)) {
      throw StructuralError("invalid blank-node label: " + label);
    }
  }
  Term t;
  t.kind_ = TermKind::kBlankNode;
  t.value_ = std::move(label);
  return t;
}

Term Term::literal(std::string lexical, std::string datatype) {
  if (datatype.empty()) throw StructuralError("literal without datatype");
  for (unsigned char c : datatype) {
    if (bad_iri_char(c)) throw StructuralError("invalid datatype IRI");
  }
  if (is_numeric_datatype(datatype) && !Decimal::parse(lexical)) {
    throw StructuralError("not a numeric lexical form: \"" + lexical + "\"");
  }
  if (datatype == xsd::kInteger &&
      lexical.find_first_of(".eE") != std::string::npos) {
    throw StructuralError("not an integer lexical form: \"" + lexical + "\"");
  }
  Term t;
  t.kind_ = TermKind::kLiteral;
  t.value_ = std::move(lexical);
  t.datatype_ = std::move(datatype);
  return t;
}

Term Term::lang_literal(std::string lexical, std::string language) {
  if (language.empty()) throw StructuralError("empty language tag");
  for (unsigned char c : language) {
    if (!std::isalnum(c) && c != '-') {
      throw StructuralError("invalid language tag: " + language);
    }
  }
  Term t;
  t.kind_ = TermKind::kLiteral;
  t.value_ = std::move(lexical);
  t.datatype_ = kRdfLangString;
  t.language_ = std::move(language);
  return t;
}

Term Term::integer(std::int64_t value) {
  return literal(std::to_string(value), xsd::kInteger);
}

Term Term::decimal(std::string lexical) {
  return literal(std::move(lexical), xsd::kDecimal);
}

std::optional<Decimal> Term::numeric_value() const {
  if (!is_numeric()) return std::nullopt;
  return Decimal::parse(value_);
}

std::string Term::to_string() const {
  switch (kind_) {
    case TermKind::kIri:
      return "<" + value_ + ">";
    case TermKind::kBlankNode:
      return "_:" + value_;
    case TermKind::kLiteral:
      break;
  }
  std::string out = "\"";
  for (char c : value_) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  if (!language_.empty()) return out + "@" + language_;
  if (datatype_ != xsd::kString) out += "^^<" + datatype_ + ">";
  return out;
}

std::size_t TermHash::operator()(const Term& t) const noexcept {
  std::size_t h = std::hash<std::string>{}(t.value());
  h ^= std::hash<std::string>{}(t.datatype()) + 0x9e3779b97f4a7c15ULL +
       (h << 6) + (h >> 2);
  h ^= static_cast<std::size_t>(t.kind()) * 0x100000001b3ULL;
  return h;
}

void check_triple(const Triple& t) {
  if (t.subject.is_literal()) {
    throw StructuralError("literal in subject position: " +
                          t.subject.to_string());
  }
  if (!t.predicate.is_iri()) {
    throw StructuralError("predicate must be an IRI: " +
                          t.predicate.to_string());
  }
  if (t.subject.value().empty() || t.predicate.value().empty()) {
    throw StructuralError("empty term in triple");
  }
}

}  // namespace tinykg::rdf
