// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/match/matchmaker.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "tinykg/match/verbatim.hpp"
#include "tinykg/ontology/vocabulary.hpp"
#include "tinykg/sparql/evaluator.hpp"
#include "tinykg/sparql/query.hpp"

namespace tinykg::match {

namespace vocab = ontology::vocab;
using ontology::SensorKind;

const rdf::Term& MatchRow::at(std::string_view name) const {
  for (const auto& [k, v] : columns) {
    if (k == name) return v;
  }
  throw std::out_of_range("no column " + std::string(name));
}

namespace {

// The anchors below are fragments of the shipped queries. A mismatch means
// the query files changed shape and the templates must follow.
void replace_once(std::string& text, std::string_view from,
                  std::string_view to) {
  auto pos = text.find(from);
  if (pos == std::string::npos) {
    throw std::logic_error("query template anchor not found: " +
                           std::string(from));
  }
  text.replace(pos, from.size(), to);
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

void check_non_negative(const std::optional<Kilobytes>& kb, const char* field,
                        std::vector<std::string>& bad) {
  if (kb && kb->tenths() < 0) bad.emplace_back(field);
}

// One provideInput clause per sensor; a single sensor keeps the shipped
// variable name so the examples reproduce exactly.
std::string sensor_clauses(const std::vector<SensorKind>& sensors) {
  std::string out;
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    std::string var = sensors.size() == 1 ? "?sensor"
                                          : "?sensor_" + std::to_string(i + 1);
    out += "    " + var + " ssn_extend:provideInput ?input;\n";
    out += "        a sosa_extend:" + sensors[i].name() + " .\n";
  }
  return out;
}

std::vector<SensorKind> distinct(std::vector<SensorKind> sensors) {
  std::sort(sensors.begin(), sensors.end());
  sensors.erase(std::unique(sensors.begin(), sensors.end()), sensors.end());
  return sensors;
}

void apply_runtime(std::string& q, const ModelQuerySpec& spec) {
  if (!spec.runtime) return;
  replace_once(q, "        ssn:hasInput ?input;\n",
               "        ssn:hasInput ?input;\n"
               "        nnet:hasRuntimePlatform " +
                   quote(*spec.runtime) + " ;\n");
}

void validate_spec(const ModelQuerySpec& spec) {
  std::vector<std::string> bad;
  check_non_negative(spec.max_ram_kb, "max_ram_kb", bad);
  check_non_negative(spec.max_flash_kb, "max_flash_kb", bad);
  if (!bad.empty()) throw ontology::ValidationError(bad);
}

std::vector<MatchRow> run(const rdf::Graph& kg, const std::string& text,
                          const std::string& subject_var) {
  auto ast = sparql::parse_query(text, vocab::standard_prefixes());
  auto projection = ast.projection;
  if (std::find(ast.projection.begin(), ast.projection.end(), subject_var) ==
      ast.projection.end()) {
    ast.projection.push_back(subject_var);
  }
  auto solution = sparql::evaluate(ast, kg);
  int subject_col = solution.column(subject_var);
  std::vector<int> cols;
  for (const auto& v : projection) cols.push_back(solution.column(v));

  std::vector<MatchRow> rows;
  std::set<rdf::Term> seen;
  for (const auto& r : solution.rows) {
    const auto& subject = r[static_cast<std::size_t>(subject_col)];
    if (!seen.insert(subject).second) continue;
    MatchRow row;
    row.subject = subject;
    for (std::size_t i = 0; i < projection.size(); ++i) {
      row.columns.emplace_back(projection[i],
                               r[static_cast<std::size_t>(cols[i])]);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Sensor kinds feeding each model's input.
std::map<rdf::Term, std::set<SensorKind>> model_sensors(const rdf::Graph& kg) {
  static constexpr std::string_view kText =
      "SELECT ?nn ?kind\n"
      "WHERE {\n"
      "    ?nn a nnet:NeuralNetwork ;\n"
      "        ssn:hasInput ?input .\n"
      "    ?sensor ssn_extend:provideInput ?input ;\n"
      "        a ?kind .\n"
      "}\n";
  auto ast = sparql::parse_query(kText, vocab::standard_prefixes());
  auto solution = sparql::evaluate(ast, kg);
  std::map<rdf::Term, std::set<SensorKind>> out;
  for (const auto& r : solution.rows) {
    auto& entry = out[r[0]];
    const auto& iri = r[1].value();
    if (!r[1].is_iri() || iri.rfind(vocab::kSosaExtend, 0) != 0) continue;
    if (auto kind = SensorKind::parse(iri.substr(vocab::kSosaExtend.size()))) {
      entry.insert(*kind);
    }
  }
  return out;
}

}  // namespace

std::string devices_query(const DeviceQuerySpec& spec) {
  std::vector<std::string> bad;
  check_non_negative(spec.min_ram_kb, "min_ram_kb", bad);
  check_non_negative(spec.min_flash_kb, "min_flash_kb", bad);
  if (!bad.empty()) throw ontology::ValidationError(bad);

  auto sensors = distinct(spec.required_sensors);
  std::string mcu = "?system_" + std::to_string(sensors.size() + 1);
  std::string block;
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    block += "        ssn:hasSubSystem ?system_" + std::to_string(i + 1) + " ;\n";
  }
  block += "        ssn:hasSubSystem " + mcu + " .\n";
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    block += "    ?system_" + std::to_string(i + 1) + " a sosa_extend:" +
             sensors[i].name() + " .\n";
  }
  block += "    " + mcu + " a s3n:MicroController ;\n";

  std::string q(verbatim::kQuery1);
  replace_once(q,
               "        ssn:hasSubSystem ?system_1 ;\n"
               "        ssn:hasSubSystem ?system_2 ;\n"
               "        ssn:hasSubSystem ?system_3 .\n"
               "    ?system_1 a sosa_extend:Accelerometer .\n"
               "    ?system_2 a sosa_extend:Gyroscope .\n"
               "    ?system_3 a s3n:MicroController ;\n",
               block);
  replace_once(q, "FILTER (?RAM >= 116)",
               "FILTER (?RAM >= " + spec.min_ram_kb.to_string() + ")");
  replace_once(q, "FILTER (?Flash >= 531)",
               "FILTER (?Flash >= " + spec.min_flash_kb.to_string() + ")");
  return q;
}

std::string models_query(const ModelQuerySpec& spec) {
  validate_spec(spec);
  std::string q(verbatim::kQuery2);
  replace_once(q,
               "    ?sensor ssn_extend:provideInput ?input;\n"
               "        a sosa_extend:Camera .\n",
               sensor_clauses(distinct(spec.available_sensors)));
  apply_runtime(q, spec);
  replace_once(q, "    FILTER (?RAM <= 127)\n",
               spec.max_ram_kb ? "    FILTER (?RAM <= " +
                                     spec.max_ram_kb->to_string() + ")\n"
                               : "");
  replace_once(q, "    FILTER (?Flash <= 576)\n",
               spec.max_flash_kb ? "    FILTER (?Flash <= " +
                                       spec.max_flash_kb->to_string() + ")\n"
                                 : "");
  return q;
}

std::string browse_query(const ModelQuerySpec& spec) {
  validate_spec(spec);
  std::string q(verbatim::kQuery3);
  replace_once(q,
               "    ?sensor ssn_extend:provideInput ?input;\n"
               "        a sosa_extend:Microphone .\n",
               sensor_clauses(distinct(spec.available_sensors)));
  apply_runtime(q, spec);

  std::string extra;
  if (spec.max_ram_kb) {
    extra += "    FILTER (?Min_RAM <= " + spec.max_ram_kb->to_string() + ")\n";
  }
  if (spec.max_flash_kb) {
    extra +=
        "    FILTER (?Min_Flash <= " + spec.max_flash_kb->to_string() + ")\n";
  }
  if (spec.description_regex) {
    replace_once(q, "FILTER regex(?description, \"yes/no\", \"i\")",
                 "FILTER regex(?description, " +
                     quote(*spec.description_regex) + ", \"i\")");
  } else {
    replace_once(q, "        schema:description ?description;\n", "");
    replace_once(q, "    FILTER regex(?description, \"yes/no\", \"i\")\n", "");
  }
  if (spec.dataset_regex) {
    replace_once(q, "FILTER regex(str(?dataset), \"speech_commands\", \"i\")",
                 "FILTER regex(str(?dataset), " + quote(*spec.dataset_regex) +
                     ", \"i\")");
  } else {
    replace_once(q, "        nnet:trainingDataset ?dataset ;\n", "");
    replace_once(q, "    FILTER regex(str(?dataset), \"speech_commands\", \"i\")\n",
                 "");
  }
  replace_once(q, "}ORDER BY ?Acc",
               extra + (spec.order_by_metric ? "}ORDER BY ?Acc" : "}"));
  return q;
}

std::vector<MatchRow> devices_for_model(const rdf::Graph& kg,
                                        const DeviceQuerySpec& spec) {
  return run(kg, devices_query(spec), "Board");
}

std::vector<MatchRow> models_for_device(const rdf::Graph& kg,
                                        const ModelQuerySpec& spec) {
  // The shipped query selects models fed by a given sensor. Compatibility
  // needs the model's sensors to be a subset of the board's, which a basic
  // graph pattern cannot express, so candidates are fetched without the
  // sensor clause and the subset test runs on the result.
  ModelQuerySpec candidates = spec;
  candidates.available_sensors.clear();
  auto rows = run(kg, models_query(candidates), "nn");
  auto sensors = model_sensors(kg);
  std::set<SensorKind> offered(spec.available_sensors.begin(),
                               spec.available_sensors.end());
  std::erase_if(rows, [&](const MatchRow& row) {
    auto it = sensors.find(row.subject);
    if (it == sensors.end()) return false;
    return !std::includes(offered.begin(), offered.end(), it->second.begin(),
                          it->second.end());
  });
  return rows;
}

std::vector<MatchRow> browse_models(const rdf::Graph& kg,
                                    const ModelQuerySpec& spec) {
  return run(kg, browse_query(spec), "nn");
}

DeviceQuerySpec requirements(const ontology::ModelDescriptor& m) {
  return {{m.sensors.begin(), m.sensors.end()}, m.min_ram_kb, m.min_flash_kb};
}

ModelQuerySpec capabilities(const ontology::DeviceDescriptor& d) {
  ModelQuerySpec spec;
  spec.available_sensors.assign(d.sensors.begin(), d.sensors.end());
  spec.max_ram_kb = d.ram_kb;
  spec.max_flash_kb = d.flash_kb;
  return spec;
}

bool compatible(const ontology::ModelDescriptor& m,
                const ontology::DeviceDescriptor& d) {
  return std::includes(d.sensors.begin(), d.sensors.end(), m.sensors.begin(),
                       m.sensors.end()) &&
         m.min_ram_kb <= d.ram_kb && m.min_flash_kb <= d.flash_kb;
}

}  // namespace tinykg::match
