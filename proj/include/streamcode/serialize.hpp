// JSON forms of fields, elements, matrices, block codes and conformance
// reports. Elements are nested coefficient arrays following the tower
// layers; prime-field elements are plain integers.

#pragma once

#include <string>

#include "json.hpp"
#include "streamcode/blockcodes.hpp"
#include "streamcode/conformance.hpp"

namespace streamcode::serialize {

using Json = nlohmann::ordered_json;

Json field_to_json(const gf::FieldSpec& spec);
gf::FieldSpec field_from_json(const Json& j);

Json element_to_json(const gf::FieldElement& x);
gf::FieldElement element_from_json(const gf::Field& field, const Json& j);

/// Array of rows.
Json matrix_to_json(const gf::Matrix& m);
gf::Matrix matrix_from_json(const gf::Field& field, const Json& j);

Json code_to_json(const BlockCode& code);
/// Trusts the dump: nothing is re-certified, only shapes and fields checked.
BlockCode code_from_json(const Json& j);

std::string dump_code(const BlockCode& code);
BlockCode load_code(const std::string& text);
void save_code_file(const BlockCode& code, const std::string& path);
BlockCode load_code_file(const std::string& path);

Json report_to_json(const conformance::ConformanceReport& report);

}  // namespace streamcode::serialize
