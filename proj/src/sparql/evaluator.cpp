// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/sparql/evaluator.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <regex>

namespace tinykg::sparql {

int Solution::column(std::string_view variable) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i] == variable) return static_cast<int>(i);
  }
  return -1;
}

bool order_less(const rdf::Term& a, const rdf::Term& b) {
  auto rank = [](const rdf::Term& t) {
    if (t.is_blank()) return 0;
    if (t.is_iri()) return 1;
    return t.is_numeric() ? 2 : 3;
  };
  int ra = rank(a);
  int rb = rank(b);
  if (ra != rb) return ra < rb;
  if (ra == 2) {
    auto va = a.numeric_value();
    auto vb = b.numeric_value();
    if (*va != *vb) return *va < *vb;
  }
  return a < b;
}

namespace {

struct CompiledFilter {
  const FilterExpr* expr;
  int variable;
  std::optional<rdf::Decimal> constant;
  std::optional<std::regex> regex;
};

struct Slot {
  bool is_variable;
  int variable;          // when is_variable
  const rdf::Term* term;  // when constant
};

struct CompiledPattern {
  Slot slots[3];
};

bool compare(const rdf::Decimal& lhs, CompareOp op, const rdf::Decimal& rhs) {
  switch (op) {
    case CompareOp::kLess: return lhs < rhs;
    case CompareOp::kLessEqual: return lhs <= rhs;
    case CompareOp::kGreater: return lhs > rhs;
    case CompareOp::kGreaterEqual: return lhs >= rhs;
    case CompareOp::kEqual: return lhs == rhs;
    case CompareOp::kNotEqual: return lhs != rhs;
  }
  return false;
}

bool passes(const CompiledFilter& f, const rdf::Term& value) {
  if (const auto* cmp = std::get_if<CompareFilter>(f.expr)) {
    // str() yields a plain string, which never compares with a number.
    if (cmp->lhs.as_string || !f.constant) return false;
    auto v = value.numeric_value();
    if (!v) return false;
    return compare(*v, cmp->op, *f.constant);
  }
  const auto& rx = std::get<RegexFilter>(*f.expr);
  const std::string* text = nullptr;
  if (rx.target.as_string) {
    if (value.is_blank()) return false;
    text = &value.value();
  } else {
    if (!value.is_literal()) return false;
    if (value.datatype() != rdf::xsd::kString &&
        value.datatype() != rdf::kRdfLangString) {
      return false;
    }
    text = &value.value();
  }
  return std::regex_search(*text, *f.regex);
}

class Engine {
 public:
  Engine(const QueryAst& q, const rdf::Graph& g) : query_(q), graph_(g) {}

  Solution run() {
    compile();
    order_patterns();
    binding_.assign(names_.size(), nullptr);
    search(0);
    finish();
    return std::move(solution_);
  }

 private:
  int var_id(const std::string& name) {
    auto [it, added] = ids_.emplace(name, static_cast<int>(names_.size()));
    if (added) names_.push_back(name);
    return it->second;
  }

  void compile() {
    for (const auto& p : query_.patterns) {
      CompiledPattern cp{};
      const PatternTerm* parts[3] = {&p.subject, &p.predicate, &p.object};
      for (int k = 0; k < 3; ++k) {
        if (const auto* v = std::get_if<Variable>(parts[k])) {
          cp.slots[k] = Slot{true, var_id(v->name), nullptr};
        } else {
          cp.slots[k] = Slot{false, -1, &std::get<rdf::Term>(*parts[k])};
        }
      }
      patterns_.push_back(cp);
    }
    for (const auto& f : query_.filters) {
      CompiledFilter cf{&f, var_id(filter_variable(f)), std::nullopt, std::nullopt};
      if (const auto* cmp = std::get_if<CompareFilter>(&f)) {
        cf.constant = cmp->constant.numeric_value();
      } else {
        const auto& rx = std::get<RegexFilter>(f);
        auto flags = std::regex::ECMAScript;
        if (rx.flags.find('i') != std::string::npos) flags |= std::regex::icase;
        try {
          cf.regex.emplace(rx.pattern, flags);
        } catch (const std::regex_error& e) {
          throw InvalidRegexError(rx.pattern, e.what());
        }
      }
      filters_.push_back(std::move(cf));
    }
  }

  // Greedy static join order: most bound positions first, then the
  // smallest index bucket among the constants.
  void order_patterns() {
    std::vector<bool> bound(names_.size(), false);
    std::vector<bool> used(patterns_.size(), false);
    for (std::size_t step = 0; step < patterns_.size(); ++step) {
      std::size_t best = patterns_.size();
      int best_bound = -1;
      std::size_t best_bucket = 0;
      for (std::size_t i = 0; i < patterns_.size(); ++i) {
        if (used[i]) continue;
        int nbound = 0;
        std::size_t bucket = graph_.size() + 1;
        for (int k = 0; k < 3; ++k) {
          const Slot& s = patterns_[i].slots[k];
          if (!s.is_variable) {
            ++nbound;
            bucket = std::min(bucket, graph_.count_with(k, *s.term));
          } else if (bound[s.variable]) {
            ++nbound;
          }
        }
        if (nbound > best_bound || (nbound == best_bound && bucket < best_bucket)) {
          best = i;
          best_bound = nbound;
          best_bucket = bucket;
        }
      }
      used[best] = true;
      order_.push_back(best);
      for (const Slot& s : patterns_[best].slots) {
        if (s.is_variable) bound[s.variable] = true;
      }
      // Filters become checkable at the step binding their variable.
      std::vector<const CompiledFilter*> ready;
      for (const auto& f : filters_) {
        if (bound[f.variable] && !scheduled_.contains(&f)) {
          scheduled_.insert(&f);
          ready.push_back(&f);
        }
      }
      checks_.push_back(std::move(ready));
    }
  }

  void search(std::size_t depth) {
    if (depth == order_.size()) {
      std::vector<rdf::Term> row;
      row.reserve(query_.projection.size());
      for (const auto& name : query_.projection) {
        row.push_back(*binding_[ids_.at(name)]);
      }
      solution_.rows.push_back(std::move(row));
      return;
    }
    const CompiledPattern& p = patterns_[order_[depth]];
    const rdf::Term* key[3];
    for (int k = 0; k < 3; ++k) {
      const Slot& s = p.slots[k];
      key[k] = s.is_variable ? binding_[s.variable] : s.term;
    }
    graph_.for_each_match(key[0], key[1], key[2], [&](const rdf::Triple& t) {
      const rdf::Term* parts[3] = {&t.subject, &t.predicate, &t.object};
      std::vector<int> newly;
      bool ok = true;
      for (int k = 0; k < 3 && ok; ++k) {
        const Slot& s = p.slots[k];
        if (!s.is_variable) continue;
        const rdf::Term*& b = binding_[s.variable];
        if (b == nullptr) {
          b = parts[k];
          newly.push_back(s.variable);
        } else if (*b != *parts[k]) {
          ok = false;
        }
      }
      if (ok) {
        for (const CompiledFilter* f : checks_[depth]) {
          if (!passes(*f, *binding_[f->variable])) {
            ok = false;
            break;
          }
        }
      }
      if (ok) search(depth + 1);
      for (int v : newly) binding_[v] = nullptr;
    });
  }

  void finish() {
    solution_.variables = query_.projection;
    auto& rows = solution_.rows;
    if (!query_.order_by) {
      std::sort(rows.begin(), rows.end());
      return;
    }
    int col = -1;
    for (std::size_t i = 0; i < query_.projection.size(); ++i) {
      if (query_.projection[i] == query_.order_by->variable) col = static_cast<int>(i);
    }
    if (col < 0) {
      // Ordering by an unprojected variable: re-evaluate with it projected.
      QueryAst extended = query_;
      extended.projection.push_back(query_.order_by->variable);
      Solution wide = Engine(extended, graph_).run();
      for (auto& r : wide.rows) r.pop_back();
      solution_.rows = std::move(wide.rows);
      return;
    }
    bool asc = query_.order_by->ascending;
    std::sort(rows.begin(), rows.end(),
              [col, asc](const std::vector<rdf::Term>& a,
                         const std::vector<rdf::Term>& b) {
                const auto& x = a[col];
                const auto& y = b[col];
                if (order_less(x, y)) return asc;
                if (order_less(y, x)) return !asc;
                return a < b;
              });
  }

  const QueryAst& query_;
  const rdf::Graph& graph_;
  std::map<std::string, int> ids_;
  std::vector<std::string> names_;
  std::vector<CompiledPattern> patterns_;
  std::vector<CompiledFilter> filters_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<const CompiledFilter*>> checks_;
  std::set<const CompiledFilter*> scheduled_;
  std::vector<const rdf::Term*> binding_;
  Solution solution_;
};

}  // namespace

Solution evaluate(const QueryAst& query, const rdf::Graph& graph) {
  return Engine(query, graph).run();
}

}  // namespace tinykg::sparql
