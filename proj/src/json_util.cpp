#include "json_util.hpp"

#include "bimlog/codec.hpp"
#include "bimlog/errors.hpp"

#include <cstdio>

namespace bimlog::detail {

std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void append_json_param_value(std::string& out, const ParamValue& v) {
    struct V {
        std::string& out;
        void operator()(double d) const { out += format_real_token(d); }
        void operator()(std::int64_t i) const { out += std::to_string(i); }
        void operator()(const std::string& s) const {
            out += '"';
            out += json_escape(s);
            out += '"';
        }
        void operator()(bool b) const { out += b ? "true" : "false"; }
        void operator()(const ElementRef& r) const {
            out += "{\"ref\": ";
            out += std::to_string(r.id);
            out += '}';
        }
    };
    std::visit(V{out}, v);
}

void append_json_params(std::string& out, const ParamList& params, const std::string& indent) {
    if (params.empty()) {
        out += indent + "\"params\": []";
        return;
    }
    out += indent + "\"params\": [\n";
    for (std::size_t i = 0; i < params.size(); ++i) {
        out += indent + "  {\"name\": \"" + json_escape(params[i].first) + "\", \"value\": ";
        append_json_param_value(out, params[i].second);
        out += i + 1 < params.size() ? "},\n" : "}\n";
    }
    out += indent + "]";
}

ParamValue param_value_from_json(const nlohmann::json& j) {
    if (j.is_number_float()) return j.get<double>();
    if (j.is_number_integer() || j.is_number_unsigned()) return j.get<std::int64_t>();
    if (j.is_string()) return j.get<std::string>();
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_object() && j.contains("ref") && j["ref"].is_number_integer())
        return ElementRef{j["ref"].get<std::int64_t>()};
    throw ValidationError("unsupported parameter value in JSON input");
}

ParamList params_from_json(const nlohmann::json& j) {
    ParamList params;
    if (j.is_null()) return params;
    if (!j.is_array()) throw ValidationError("params must be an array of name/value objects");
    for (const nlohmann::json& jp : j) {
        if (!jp.is_object() || !jp.contains("name") || !jp["name"].is_string() ||
            !jp.contains("value"))
            throw ValidationError("parameter entries need a name and a value");
        params.emplace_back(jp["name"].get<std::string>(), param_value_from_json(jp["value"]));
    }
    return params;
}

} // namespace bimlog::detail
