// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/rdf/graph.hpp"

#include <algorithm>

namespace tinykg::rdf {

Graph::Graph(const Graph& other)
    : triples_(other.triples_),
      prefixes_(other.prefixes_),
      blank_labels_(other.blank_labels_),
      next_blank_(other.next_blank_) {
  rebuild_indexes();
}

Graph& Graph::operator=(const Graph& other) {
  if (this != &other) {
    Graph copy(other);
    *this = std::move(copy);
  }
  return *this;
}

void Graph::rebuild_indexes() {
  by_subject_.clear();
  by_predicate_.clear();
  by_object_.clear();
  for (const Triple& t : triples_) {
    by_subject_[t.subject].push_back(&t);
    by_predicate_[t.predicate].push_back(&t);
    by_object_[t.object].push_back(&t);
  }
}

void Graph::note_blank(const Term& t) {
  if (t.is_blank()) blank_labels_.insert(t.value());
}

bool Graph::insert(Triple t) {
  check_triple(t);
  auto [it, added] = triples_.insert(std::move(t));
  if (!added) return false;
  const Triple* stored = &*it;
  by_subject_[stored->subject].push_back(stored);
  by_predicate_[stored->predicate].push_back(stored);
  by_object_[stored->object].push_back(stored);
  note_blank(stored->subject);
  note_blank(stored->object);
  return true;
}

void Graph::for_each_match(
    const Term* s, const Term* p, const Term* o,
    const std::function<void(const Triple&)>& visit) const {
  const std::vector<const Triple*>* candidates = nullptr;
  auto narrow = [&candidates](const Index& index, const Term* key) {
    if (key == nullptr) return true;
    auto it = index.find(*key);
    if (it == index.end()) return false;
    if (candidates == nullptr || it->second.size() < candidates->size()) {
      candidates = &it->second;
    }
    return true;
  };
  if (!narrow(by_subject_, s) || !narrow(by_predicate_, p) ||
      !narrow(by_object_, o)) {
    return;
  }
  auto agrees = [&](const Triple& t) {
    return (s == nullptr || t.subject == *s) &&
           (p == nullptr || t.predicate == *p) &&
           (o == nullptr || t.object == *o);
  };
  if (candidates == nullptr) {
    for (const Triple& t : triples_) visit(t);
    return;
  }
  for (const Triple* t : *candidates) {
    if (agrees(*t)) visit(*t);
  }
}

std::vector<Triple> Graph::match(const std::optional<Term>& s,
                                 const std::optional<Term>& p,
                                 const std::optional<Term>& o) const {
  std::vector<Triple> out;
  for_each_match(s ? &*s : nullptr, p ? &*p : nullptr, o ? &*o : nullptr,
                 [&out](const Triple& t) { out.push_back(t); });
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Graph::count_with(int position, const Term& term) const {
  const Index& index = position == 0   ? by_subject_
                       : position == 1 ? by_predicate_
                                       : by_object_;
  auto it = index.find(term);
  return it == index.end() ? 0 : it->second.size();
}

std::optional<Term> Graph::object_of(const Term& s, const Term& p) const {
  auto objects = objects_of(s, p);
  if (objects.empty()) return std::nullopt;
  return objects.front();
}

std::vector<Term> Graph::objects_of(const Term& s, const Term& p) const {
  std::vector<Term> out;
  for_each_match(&s, &p, nullptr,
                 [&out](const Triple& t) { out.push_back(t.object); });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Term> Graph::subjects_of(const Term& p, const Term& o) const {
  std::vector<Term> out;
  for_each_match(nullptr, &p, &o,
                 [&out](const Triple& t) { out.push_back(t.subject); });
  std::sort(out.begin(), out.end());
  return out;
}

void Graph::bind_prefix(std::string name, std::string ns) {
  prefixes_[std::move(name)] = std::move(ns);
}

Term Graph::fresh_blank() {
  std::string label;
  do {
    label = "b" + std::to_string(next_blank_++);
  } while (blank_labels_.contains(label));
  blank_labels_.insert(label);
  return Term::blank(std::move(label));
}

void Graph::merge(const Graph& other) {
  std::unordered_map<std::string, Term> relabel;
  auto map_term = [&](const Term& t) -> Term {
    if (!t.is_blank()) return t;
    auto it = relabel.find(t.value());
    if (it == relabel.end()) {
      it = relabel.emplace(t.value(), fresh_blank()).first;
    }
    return it->second;
  };
  for (const Triple& t : other.triples_) {
    insert(Triple{map_term(t.subject), t.predicate, map_term(t.object)});
  }
  for (const auto& [name, ns] : other.prefixes_) {
    prefixes_.try_emplace(name, ns);
  }
}

}  // namespace tinykg::rdf
