// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "tinykg/rdf/graph.hpp"
#include "tinykg/rdf/term.hpp"

/// Namespaces and terms of the TinyML neural-network ontology together with
/// the W3C sensor and Thing Description vocabularies it builds on.
namespace tinykg::ontology::vocab {

// Namespaces, byte-identical to the published prefix block.
inline const std::string kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline const std::string kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline const std::string kSchema = "https://schema.org";
inline const std::string kOm =
    "http://www.ontology-of-units-of-measure.org/resource/om-2/";
inline const std::string kSsn = "http://www.w3.org/ns/ssn/";
inline const std::string kS3n = "http://w3id.org/s3n/";
inline const std::string kSosa = "http://www.w3.org/ns/sosa/";
inline const std::string kTd = "http://www.w3.org/ns/td#";
inline const std::string kSosaExtend = "http://tinyml-schema.org/sosa_extend#";
inline const std::string kSsnExtend = "http://tinyml-schema.org/ssn_extend#";
inline const std::string kS3nExtend = "http://tinyml-schema.org/s3n_extend#";
inline const std::string kNnet = "http://tinyml-schema.org/networkschema#";
// Used by the published queries but never declared alongside the others.
inline const std::string kSsnSystem = "http://www.w3.org/ns/ssn/systems/";
inline const std::string kXsd = "http://www.w3.org/2001/XMLSchema#";

// Instance namespaces for minted node IRIs.
inline const std::string kModelBase = "http://tinyml-schema.org/neuralnetwork/";
inline const std::string kDeviceBase = "http://tinyml-schema.org/device/";

inline rdf::Term term(const std::string& ns, const char* local) {
  return rdf::Term::iri(ns + local);
}

// rdf / rdfs
inline const rdf::Term kType = term(kRdf, "type");
inline const rdf::Term kComment = term(kRdfs, "comment");

// nnet
inline const rdf::Term kNeuralNetwork = term(kNnet, "NeuralNetwork");
inline const rdf::Term kHasCategory = term(kNnet, "hasCategory");
inline const rdf::Term kHasMetric = term(kNnet, "hasMetric");
inline const rdf::Term kTop1Accuracy = term(kNnet, "Top_1_accuracy");
inline const rdf::Term kHasMetricValue = term(kNnet, "hasMetricValue");
inline const rdf::Term kHasMacs = term(kNnet, "hasMultiplyAccumulateOps");
inline const rdf::Term kTrainingDataset = term(kNnet, "trainingDataset");
inline const rdf::Term kClassification = term(kNnet, "Classification");
inline const rdf::Term kRegression = term(kNnet, "Regression");
inline const rdf::Term kHasRuntimePlatform = term(kNnet, "hasRuntimePlatform");
inline const rdf::Term kHasProvenance = term(kNnet, "hasProvenance");
// Layer structure.
inline const rdf::Term kLayer = term(kNnet, "Layer");
inline const rdf::Term kInputLayer = term(kNnet, "InputLayer");
inline const rdf::Term kMiddleLayer = term(kNnet, "MiddleLayer");
inline const rdf::Term kOutputLayer = term(kNnet, "OutputLayer");
inline const rdf::Term kHasLayer = term(kNnet, "hasLayer");
inline const rdf::Term kHasIndex = term(kNnet, "hasIndex");
inline const rdf::Term kHasType = term(kNnet, "hasType");
inline const rdf::Term kHasInputShape = term(kNnet, "hasInputShape");
inline const rdf::Term kHasOutputShape = term(kNnet, "hasOutputShape");
inline const rdf::Term kHasQuantization = term(kNnet, "hasQuantization");
inline const rdf::Term kHasScale = term(kNnet, "hasScale");
inline const rdf::Term kHasZeroPoint = term(kNnet, "hasZeroPoint");
inline const rdf::Term kHasDataType = term(kNnet, "hasDataType");

// schema.org
inline const rdf::Term kIdentifier = term(kSchema, "identifier");
inline const rdf::Term kName = term(kSchema, "name");
inline const rdf::Term kDescription = term(kSchema, "description");
inline const rdf::Term kValue = term(kSchema, "value");
inline const rdf::Term kMinValue = term(kSchema, "minValue");
inline const rdf::Term kUnitCode = term(kSchema, "unitCode");
inline const rdf::Term kSoftwareSourceCode = term(kSchema, "SoftwareSourceCode");
inline const rdf::Term kCreator = term(kSchema, "creator");
inline const rdf::Term kCitation = term(kSchema, "citation");
inline const rdf::Term kCodeRepository = term(kSchema, "codeRepository");
inline const rdf::Term kDateCreated = term(kSchema, "dateCreated");

inline const rdf::Term kKilobyte = term(kOm, "kilobyte");

// SSN / SOSA / S3N
inline const rdf::Term kHasInput = term(kSsn, "hasInput");
inline const rdf::Term kHasOutput = term(kSsn, "hasOutput");
inline const rdf::Term kInput = term(kSsn, "Input");
inline const rdf::Term kOutput = term(kSsn, "Output");
inline const rdf::Term kHasSubSystem = term(kSsn, "hasSubSystem");
inline const rdf::Term kInCondition = term(kSsnSystem, "inCondition");
inline const rdf::Term kHasSystemProperty = term(kSsnSystem, "hasSystemProperty");
inline const rdf::Term kSmartSensor = term(kS3n, "SmartSensor");
inline const rdf::Term kMicroController = term(kS3n, "MicroController");
inline const rdf::Term kAlgorithm = term(kS3n, "Algorithm");
inline const rdf::Term kHasProcedureFeature = term(kS3n, "hasProcedureFeature");
inline const rdf::Term kHasSystemCapability = term(kS3n, "hasSystemCapability");
inline const rdf::Term kMemory = term(kS3n, "Memory");
inline const rdf::Term kRam = term(kS3nExtend, "RAM");
inline const rdf::Term kFlash = term(kS3nExtend, "Flash");
inline const rdf::Term kCamera = term(kSosaExtend, "Camera");
inline const rdf::Term kMicrophone = term(kSosaExtend, "Microphone");
inline const rdf::Term kAccelerometer = term(kSosaExtend, "Accelerometer");
inline const rdf::Term kGyroscope = term(kSosaExtend, "Gyroscope");
inline const rdf::Term kProvideInput = term(kSsnExtend, "provideInput");

// Thing Description
inline const rdf::Term kTitle = term(kTd, "title");
inline const rdf::Term kHasForm = term(kTd, "hasForm");
inline const rdf::Term kHref = term(kTd, "href");
inline const rdf::Term kProtocol = term(kTd, "protocol");

/// Every namespace above keyed by its conventional short name, including
/// `ssn-system`, `xsd` and the `model`/`device` instance namespaces.
rdf::PrefixMap standard_prefixes();

}  // namespace tinykg::ontology::vocab
