// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "cpir/pir_scheme.hpp"
#include "cpir/privacy_audit.hpp"
#include "cpir/simulator.hpp"
#include "cpir/storage_code.hpp"

// File and wire formats. Messages, databases and rows are 1-based in every
// external format.
namespace cpir::formats {

/// Header line "N,K,M,q", then one line of K symbols per message row,
/// messages concatenated.
void write_messages(std::ostream& out, const CodeParams& params, const MessageSet& messages);
/// Throws Io on malformed input and InvalidParams/FieldTooSmall on bad headers.
MessageSet read_messages(std::istream& in, CodeParams& params);

/// Header line "N,K,M,q,n", then one stored symbol per line in
/// message-major, row-minor order.
void write_database(std::ostream& out, const CodeParams& params, const DatabaseContents& db);
DatabaseContents read_database(std::istream& in, CodeParams& params);

std::string database_filename(std::size_t index);

nlohmann::json params_json(const CodeParams& params);

/// {params, desired?, databases:[[{terms:[[m,r],...]},...]]}; `desired` is
/// written only when `include_private` is set.
nlohmann::json plan_json(const QueryPlan& plan, bool include_private);

/// Query table grouped repetition x round x database, rows shown by their
/// interleaved index as x<row>[<message>].
void write_query_table(std::ostream& out, const QueryPlan& plan);

nlohmann::json report_json(const RetrievalReport& report);

nlohmann::json audit_json(const ShapeReport& exact, const std::vector<EmpiricalReport>& empirical,
                          std::uint32_t trials, double threshold);

} // namespace cpir::formats
