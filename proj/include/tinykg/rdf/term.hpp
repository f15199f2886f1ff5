// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "tinykg/error.hpp"
#include "tinykg/rdf/numeric.hpp"

namespace tinykg::rdf {

namespace xsd {
inline constexpr std::string_view kNamespace =
    "http://www.w3.org/2001/XMLSchema#";
inline const std::string kString = std::string(kNamespace) + "string";
inline const std::string kInteger = std::string(kNamespace) + "integer";
inline const std::string kDecimal = std::string(kNamespace) + "decimal";
inline const std::string kDouble = std::string(kNamespace) + "double";
inline const std::string kDate = std::string(kNamespace) + "date";
}  // namespace xsd

inline constexpr std::string_view kRdfNamespace =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline const std::string kRdfType = std::string(kRdfNamespace) + "type";
inline const std::string kRdfLangString =
    std::string(kRdfNamespace) + "langString";

/// Violation of the term or triple well-formedness rules.
class StructuralError : public Error {
 public:
  using Error::Error;
};

enum class TermKind : std::uint8_t { kIri, kBlankNode, kLiteral };

/// True for the XSD numeric datatypes whose lexical forms must parse as
/// numbers (integer, decimal, double, float and the integer subtypes).
bool is_numeric_datatype(std::string_view datatype);

/// An RDF term: IRI, blank node, or literal. Immutable value type.
///
/// Ordering is by kind, then value (IRI text, blank label or lexical form),
/// then datatype, then language tag.
class Term {
 public:
  Term() = default;

  static Term iri(std::string text);
  static Term blank(std::string label);
  /// Throws StructuralError when a numeric datatype is paired with a lexical
  /// form that is not a number.
  static Term literal(std::string lexical, std::string datatype = xsd::kString);
  static Term lang_literal(std::string lexical, std::string language);
  static Term integer(std::int64_t value);
  /// Decimal literal from an already-valid lexical form such as "8.8".
  static Term decimal(std::string lexical);

  TermKind kind() const { return kind_; }
  bool is_iri() const { return kind_ == TermKind::kIri; }
  bool is_blank() const { return kind_ == TermKind::kBlankNode; }
  bool is_literal() const { return kind_ == TermKind::kLiteral; }

  /// IRI text, blank-node label, or literal lexical form.
  const std::string& value() const { return value_; }
  const std::string& datatype() const { return datatype_; }
  const std::string& language() const { return language_; }

  bool is_numeric() const {
    return is_literal() && is_numeric_datatype(datatype_);
  }
  /// Exact numeric value for numeric literals.
  std::optional<Decimal> numeric_value() const;

  /// N-Triples rendering, used in diagnostics and tests.
  std::string to_string() const;

  auto operator<=>(const Term&) const = default;

 private:
  TermKind kind_ = TermKind::kIri;
  std::string value_;
  std::string datatype_;
  std::string language_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept;
};

/// Subject is an IRI or blank node; predicate is an IRI.
struct Triple {
  Term subject;
  Term predicate;
  Term object;

  auto operator<=>(const Triple&) const = default;
};

/// Throws StructuralError when `t` violates the position rules.
void check_triple(const Triple& t);

}  // namespace tinykg::rdf
