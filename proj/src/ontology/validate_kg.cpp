// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/ontology/validate_kg.hpp"

#include <map>
#include <set>

#include "tinykg/ontology/mapping.hpp"
#include "tinykg/ontology/vocabulary.hpp"

namespace tinykg::ontology {

ValidationReport validate_kg(const rdf::Graph& g) {
  ValidationReport report;
  auto add = [&report](Severity s, const rdf::Term& node, std::string msg) {
    report.findings.push_back(Finding{s, node.to_string(), std::move(msg)});
  };

  std::set<rdf::Term> model_inputs;
  for (const rdf::Term& nn : model_nodes(g)) {
    for (const rdf::Term& in : g.objects_of(nn, vocab::kHasInput)) {
      model_inputs.insert(in);
    }
    try {
      ModelDescriptor m = triples_to_model(g, nn);
      if (m.layers.empty()) add(Severity::kWarning, nn, "model has no layers");
    } catch (const IncompleteDescriptionError& e) {
      add(Severity::kError, nn, "missing " + e.property());
    } catch (const ValidationError& e) {
      for (const auto& f : e.fields()) add(Severity::kError, nn, f);
    }
  }

  std::map<std::string, rdf::Term> seen_ids;
  for (const rdf::Term& dev : device_nodes(g)) {
    try {
      DeviceDescriptor d = triples_to_device(g, dev);
      auto [it, fresh] = seen_ids.emplace(d.device_id, dev);
      if (!fresh) {
        add(Severity::kError, dev,
            "duplicate device_id '" + d.device_id + "' (also " +
                it->second.to_string() + ")");
      }
    } catch (const IncompleteDescriptionError& e) {
      add(Severity::kError, dev, "missing " + e.property());
    } catch (const ValidationError& e) {
      for (const auto& f : e.fields()) add(Severity::kError, dev, f);
    }
  }

  for (const rdf::Term* type : {&vocab::kRam, &vocab::kFlash}) {
    for (const rdf::Term& mem : g.subjects_of(vocab::kType, *type)) {
      auto units = g.objects_of(mem, vocab::kUnitCode);
      if (units.empty()) {
        add(Severity::kError, mem, "missing unitCode");
        continue;
      }
      for (const rdf::Term& u : units) {
        if (u != vocab::kKilobyte) {
          add(Severity::kError, mem, "unit mismatch: " + u.to_string() +
                                         " instead of om:kilobyte");
        }
      }
    }
  }

  for (const rdf::Triple& t : g.match(std::nullopt, vocab::kProvideInput, std::nullopt)) {
    if (!model_inputs.contains(t.object)) {
      add(Severity::kError, t.subject,
          "dangling sensor: provides input to " + t.object.to_string() +
              ", which is no model's input");
    }
  }
  return report;
}

}  // namespace tinykg::ontology
