#pragma once

#include <map>
#include <string>
#include <string_view>

#include "cpps/graph.hpp"

namespace cpps {

/// Prefix map preloaded into every parse: rdf:, rdfs:, xsd:, sosa:.
std::map<std::string, std::string> default_prefixes();

/// Parses the supported Turtle subset: @prefix directives, IRIs, prefixed
/// names, typed and plain literals, bare numeric literals, blank node labels,
/// the `a` keyword, `.`-terminated statements, `;` predicate lists and `,`
/// object lists. Throws ParseError with line/column on bad input, unknown
/// prefixes, or malformed IRIs.
StaticGraph parse_turtle(std::string_view text);

/// Writes a graph so that parse_turtle(serialize_turtle(g)) == g. Subjects
/// are sorted; known prefixes are applied where they shorten IRIs.
std::string serialize_turtle(const StaticGraph& graph);

} // namespace cpps
