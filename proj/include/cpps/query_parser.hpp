#pragma once

#include <string_view>
#include <vector>

#include "cpps/query_ast.hpp"

namespace cpps {

/// Parses one REGISTER STREAM|QUERY block. Prefixed names are expanded using
/// the block's PREFIX clauses plus the default rdf/rdfs/xsd/sosa prefixes.
/// Throws ParseError (with position) on lexical errors, syntax errors,
/// duplicate PREFIX declarations, unknown prefixes, or malformed durations.
RegisteredQuery parse_query(std::string_view text);

/// Parses a query file: one or more REGISTER blocks.
std::vector<RegisteredQuery> parse_queries(std::string_view text);

/// Parses a duration token such as "24h", "1m", "500ms". Units: ms s m h d.
Duration parse_duration(std::string_view token);

} // namespace cpps
