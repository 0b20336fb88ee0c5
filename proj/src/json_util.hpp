// Internal helpers shared by the JSON writers/readers. Writers are hand
// rolled so equal inputs always produce byte-identical dumps; readers go
// through nlohmann::json.
#pragma once

#include "bimlog/params.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace bimlog::detail {

std::string json_escape(std::string_view s);

void append_json_param_value(std::string& out, const ParamValue& v);

/// Appends `"params": [...]` (without a trailing comma or newline) at the
/// given indent, one `{"name": ..., "value": ...}` object per line.
void append_json_params(std::string& out, const ParamList& params, const std::string& indent);

ParamValue param_value_from_json(const nlohmann::json& j);

ParamList params_from_json(const nlohmann::json& j);

} // namespace bimlog::detail
