// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>

#include "json.hpp"

#include "cpir/protocol.hpp"
#include "cpir/report.hpp"
#include "cpir/scheme.hpp"

namespace cpir::io {

using nlohmann::json;

/// Full parameter set plus "p" and the generator rows. Keys sort
/// lexicographically on output, so dumps are byte-stable.
json scheme_to_json(const Scheme& s);
/// Reads "M", "N", "K" and optionally "p" and "generator".
Scheme scheme_from_json(const json& j);

json database_to_json(const Database& db, const Scheme& s);
/// Checks the stored dimensions against the records and returns the
/// Vandermonde scheme for the stored (M, N, K, p) alongside the records.
std::pair<Scheme, Database> database_from_json(const json& j);

/// "server" is 1-based.
json share_to_json(const ShareTable& share, const Field& field);
std::pair<ShareTable, Field> share_from_json(const json& j);

json transcript_to_json(const Transcript& t);
json report_to_json(const Report& r);

json read_file(const std::string& path);
/// Compact dump followed by a newline.
void write_file(const std::string& path, const json& j);

}  // namespace cpir::io
