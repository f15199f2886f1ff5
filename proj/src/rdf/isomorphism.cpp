// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

// Blank-node-insensitive graph equality: colour refinement over blank nodes,
// then a backtracking search restricted to equally coloured candidates.

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "tinykg/rdf/graph.hpp"

namespace tinykg::rdf {
namespace {

struct BlankView {
  std::vector<std::string> labels;
  std::unordered_map<std::string, std::size_t> id;
  // Triples touching each blank node.
  std::vector<std::vector<const Triple*>> touching;
  std::vector<const Triple*> ground;
};

BlankView view_of(const Graph& g) {
  BlankView v;
  auto add = [&v](const Term& t) {
    if (!t.is_blank()) return;
    if (v.id.emplace(t.value(), v.labels.size()).second) {
      v.labels.push_back(t.value());
      v.touching.emplace_back();
    }
  };
  for (const Triple& t : g.triples()) {
    add(t.subject);
    add(t.object);
    if (!t.subject.is_blank() && !t.object.is_blank()) {
      v.ground.push_back(&t);
      continue;
    }
    if (t.subject.is_blank()) v.touching[v.id[t.subject.value()]].push_back(&t);
    if (t.object.is_blank() && t.object != t.subject) {
      v.touching[v.id[t.object.value()]].push_back(&t);
    }
  }
  return v;
}

std::string render(const Term& t, const Term& self, const BlankView& v,
                   const std::vector<std::size_t>& colour) {
  if (!t.is_blank()) return t.to_string();
  if (t == self) return "*";
  return "_" + std::to_string(colour[v.id.at(t.value())]);
}

// One refinement round; colour ids are shared between both graphs through
// `palette` so equal signatures get equal colours.
std::vector<std::size_t> refine(const BlankView& v,
                                const std::vector<std::size_t>& colour,
                                std::map<std::string, std::size_t>& palette) {
  std::vector<std::size_t> next(v.labels.size());
  for (std::size_t b = 0; b < v.labels.size(); ++b) {
    Term self = Term::blank(v.labels[b]);
    std::vector<std::string> parts;
    for (const Triple* t : v.touching[b]) {
      parts.push_back(render(t->subject, self, v, colour) + " " +
                      t->predicate.to_string() + " " +
                      render(t->object, self, v, colour));
    }
    std::sort(parts.begin(), parts.end());
    std::string sig = std::to_string(colour[b]) + "|";
    for (auto& p : parts) sig += p + "\n";
    next[b] = palette.emplace(sig, palette.size()).first->second;
  }
  return next;
}

class Matcher {
 public:
  Matcher(const Graph& b, const BlankView& va,
          const BlankView& vb, std::vector<std::size_t> ca,
          std::vector<std::size_t> cb)
      : b_(b), va_(va), vb_(vb), ca_(std::move(ca)), cb_(std::move(cb)),
        map_(va.labels.size(), kUnset), used_(vb.labels.size(), false) {
    for (std::size_t i = 0; i < va.labels.size(); ++i) order_.push_back(i);
    std::map<std::size_t, std::size_t> class_size;
    for (auto c : ca_) ++class_size[c];
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t x, std::size_t y) {
                       return class_size[ca_[x]] < class_size[ca_[y]];
                     });
  }

  bool run() { return assign(0); }

 private:
  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  bool mapped(const Term& t, Term& out) const {
    if (!t.is_blank()) {
      out = t;
      return true;
    }
    std::size_t m = map_[va_.id.at(t.value())];
    if (m == kUnset) return false;
    out = Term::blank(vb_.labels[m]);
    return true;
  }

  bool consistent(std::size_t blank) const {
    for (const Triple* t : va_.touching[blank]) {
      Term s, o;
      if (!mapped(t->subject, s) || !mapped(t->object, o)) continue;
      if (!b_.contains(Triple{s, t->predicate, o})) return false;
    }
    return true;
  }

  bool assign(std::size_t k) {
    if (k == order_.size()) return true;
    std::size_t blank = order_[k];
    for (std::size_t cand = 0; cand < vb_.labels.size(); ++cand) {
      if (used_[cand] || cb_[cand] != ca_[blank]) continue;
      map_[blank] = cand;
      used_[cand] = true;
      if (consistent(blank) && assign(k + 1)) return true;
      used_[cand] = false;
      map_[blank] = kUnset;
    }
    return false;
  }

  const Graph& b_;
  const BlankView& va_;
  const BlankView& vb_;
  std::vector<std::size_t> ca_;
  std::vector<std::size_t> cb_;
  std::vector<std::size_t> map_;
  std::vector<bool> used_;
  std::vector<std::size_t> order_;
};

}  // namespace

bool isomorphic(const Graph& a, const Graph& b) {
  if (a.size() != b.size()) return false;
  BlankView va = view_of(a);
  BlankView vb = view_of(b);
  if (va.labels.size() != vb.labels.size()) return false;
  if (va.ground.size() != vb.ground.size()) return false;
  for (const Triple* t : va.ground) {
    if (!b.contains(*t)) return false;
  }

  std::vector<std::size_t> ca(va.labels.size(), 0);
  std::vector<std::size_t> cb(vb.labels.size(), 0);
  std::size_t rounds = va.labels.size() + 1;
  for (std::size_t r = 0; r < rounds; ++r) {
    std::map<std::string, std::size_t> palette;
    auto na = refine(va, ca, palette);
    auto nb = refine(vb, cb, palette);
    auto distinct = [](std::vector<std::size_t> c) {
      std::sort(c.begin(), c.end());
      return std::unique(c.begin(), c.end()) - c.begin();
    };
    bool stable = distinct(na) == distinct(ca) && distinct(nb) == distinct(cb);
    ca = std::move(na);
    cb = std::move(nb);
    if (stable) break;
  }
  auto sa = ca;
  auto sb = cb;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return false;

  return Matcher(b, va, vb, std::move(ca), std::move(cb)).run();
}

}  // namespace tinykg::rdf
