// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/ontology/vocabulary.hpp"

namespace tinykg::ontology::vocab {

rdf::PrefixMap standard_prefixes() {
  return {
      {"rdf", kRdf},
      {"rdfs", kRdfs},
      {"schema", kSchema},
      {"om", kOm},
      {"ssn", kSsn},
      {"s3n", kS3n},
      {"sosa", kSosa},
      {"td", kTd},
      {"sosa_extend", kSosaExtend},
      {"ssn_extend", kSsnExtend},
      {"s3n_extend", kS3nExtend},
      {"nnet", kNnet},
      {"ssn-system", kSsnSystem},
      {"xsd", kXsd},
      {"model", kModelBase},
      {"device", kDeviceBase},
  };
}

}  // namespace tinykg::ontology::vocab
