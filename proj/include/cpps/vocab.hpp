#pragma once

namespace cpps::vocab {

// Namespaces
inline constexpr const char* kRdfNs = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr const char* kRdfsNs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr const char* kXsdNs = "http://www.w3.org/2001/XMLSchema#";
inline constexpr const char* kSosaNs = "http://www.w3.org/ns/sosa/";
/// Reserved namespace for result-stream binding triples.
inline constexpr const char* kBindNs = "http://cpps.example/binding#";

// rdf:
inline constexpr const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

// xsd: datatypes
inline constexpr const char* kXsdString = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr const char* kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr const char* kXsdDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr const char* kXsdDouble = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr const char* kXsdBoolean = "http://www.w3.org/2001/XMLSchema#boolean";

// sosa: classes
inline constexpr const char* kSosaPlatform = "http://www.w3.org/ns/sosa/Platform";
inline constexpr const char* kSosaSensor = "http://www.w3.org/ns/sosa/Sensor";
inline constexpr const char* kSosaObservation = "http://www.w3.org/ns/sosa/Observation";
inline constexpr const char* kSosaFeatureOfInterest = "http://www.w3.org/ns/sosa/FeatureOfInterest";

// sosa: properties
inline constexpr const char* kSosaHosts = "http://www.w3.org/ns/sosa/hosts";
inline constexpr const char* kSosaObserves = "http://www.w3.org/ns/sosa/observes";
inline constexpr const char* kSosaMadeBySensor = "http://www.w3.org/ns/sosa/madeBySensor";
inline constexpr const char* kSosaHasFeatureOfInterest =
    "http://www.w3.org/ns/sosa/hasFeatureOfInterest";
inline constexpr const char* kSosaHasSimpleResult = "http://www.w3.org/ns/sosa/hasSimpleResult";

// Artifact bases
inline constexpr const char* kStreamBase = "http://cpps.example/stream/";
inline constexpr const char* kPlantBase = "http://cpps.example/plant/";

} // namespace cpps::vocab
