#include "bimlog/model.hpp"

#include "bimlog/codec.hpp"
#include "bimlog/errors.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cmath>

namespace bimlog {
namespace {

bool is_comment_key(const std::string& text) {
    if (text.empty() || text.size() > 18) return false;
    return std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; });
}

const std::string* comment_text(const ParamList& params) {
    const ParamValue* v = find_param(params, "Comments");
    if (!v) return nullptr;
    return std::get_if<std::string>(v);
}

void check_geometry_shape(Subtype subtype, const GeometricBase& geometry) {
    const bool curve = is_curve(geometry);
    switch (subtype) {
        case Subtype::RectWall:
            if (!curve) throw ValidationError("RectWall geometry must be a curve");
            return;
        case Subtype::ProfileWall:
            if (!std::holds_alternative<Profile>(geometry))
                throw ValidationError("ProfileWall geometry must be a Profile");
            return;
        case Subtype::FlatFloor:
        case Subtype::SlopedFloor:
            if (!std::holds_alternative<CurveLoop>(geometry))
                throw ValidationError("floor geometry must be a CurveLoop");
            return;
        case Subtype::HostedInstance:
        case Subtype::FreeColumn:
            if (!std::holds_alternative<LocationPoint>(geometry))
                throw ValidationError("geometry must be a LocationPoint");
            return;
        case Subtype::SlantedColumn:
            if (!std::holds_alternative<Line>(geometry))
                throw ValidationError("SlantedColumn geometry must be a Line axis");
            return;
    }
}

void check_override_kind(std::string_view name, const ParamValue& value) {
    if (auto kind = canonical_param_kind(name); kind && *kind != kind_of(value)) {
        throw ValidationError("parameter '" + std::string(name) + "' must be " +
                              (*kind == ParamKind::Real ? "a real" : "text"));
    }
}

} // namespace

// --- Index maintenance -------------------------------------------------------------

void ModelState::index_comment(const ElementRecord& rec) {
    const std::string* text = comment_text(rec.params);
    if (!text || !is_comment_key(*text)) return;
    auto [it, inserted] = comment_index_.emplace(*text, rec.id);
    if (!inserted)
        throw ValidationError("Comments value '" + *text + "' is already bound to element " +
                              std::to_string(it->second));
}

void ModelState::unindex_comment(const ElementRecord& rec) {
    const std::string* text = comment_text(rec.params);
    if (!text || !is_comment_key(*text)) return;
    auto it = comment_index_.find(*text);
    if (it != comment_index_.end() && it->second == rec.id) comment_index_.erase(it);
}

// --- Core operations -----------------------------------------------------------------

ElementId ModelState::add_element(Category category, Subtype subtype, GeometricBase geometry,
                                  const ParamList& overrides, std::optional<ElementId> host) {
    if (!subtype_matches_category(category, subtype))
        throw ValidationError("subtype does not belong to category");
    check_geometry_shape(subtype, geometry);
    validate_geometry(geometry);

    if (subtype == Subtype::HostedInstance) {
        if (!host) throw ReferenceError("hosted instance requires a host element");
        if (!is_live(*host))
            throw ReferenceError("host element " + std::to_string(*host) + " is not live");
        if (elements_.at(*host).category != Category::Wall)
            throw ValidationError("host element must be a Wall");
    } else if (host) {
        throw ValidationError("only hosted instances carry a host");
    }

    ElementRecord rec;
    rec.category = category;
    rec.subtype = subtype;
    rec.geometry = std::move(geometry);
    rec.host = host;
    for (const ParamSpec& spec : canonical_params(category))
        rec.params.emplace_back(std::string(spec.name), default_param_value(spec));
    for (const auto& [name, value] : overrides) {
        check_override_kind(name, value);
        bool found = false;
        for (auto& [n, v] : rec.params) {
            if (n == name) {
                v = value;
                found = true;
                break;
            }
        }
        if (!found) rec.params.emplace_back(name, value);
    }

    // Injectivity check before any state changes.
    if (const std::string* text = comment_text(rec.params);
        text && is_comment_key(*text) && comment_index_.count(*text))
        throw ValidationError("Comments value '" + *text + "' is already bound");

    rec.id = next_id_++;
    auto [it, inserted] = elements_.emplace(rec.id, std::move(rec));
    index_comment(it->second);
    return it->first;
}

void ModelState::patch_element(ElementId id, const std::optional<GeometricBase>& geometry,
                               const ParamList& patch) {
    if (!is_live(id)) throw ReferenceError("element " + std::to_string(id) + " is not live");
    ElementRecord& rec = elements_.at(id);

    if (geometry) {
        check_geometry_shape(rec.subtype, *geometry);
        validate_geometry(*geometry);
    }
    for (const auto& [name, value] : patch) {
        check_override_kind(name, value);
        if (name == "Comments") {
            const std::string& text = std::get<std::string>(value);
            if (is_comment_key(text)) {
                auto it = comment_index_.find(text);
                if (it != comment_index_.end() && it->second != id)
                    throw ValidationError("Comments value '" + text +
                                          "' is already bound to element " +
                                          std::to_string(it->second));
            }
        }
    }

    // All checks passed; mutate.
    if (geometry) rec.geometry = *geometry;
    bool comments_changed = false;
    std::string old_comment;
    if (const std::string* text = comment_text(rec.params)) old_comment = *text;
    for (const auto& [name, value] : patch) {
        if (name == "Comments") comments_changed = true;
        bool found = false;
        for (auto& [n, v] : rec.params) {
            if (n == name) {
                v = value;
                found = true;
                break;
            }
        }
        if (!found) rec.params.emplace_back(name, value);
    }
    if (comments_changed) {
        if (is_comment_key(old_comment)) {
            auto it = comment_index_.find(old_comment);
            if (it != comment_index_.end() && it->second == id) comment_index_.erase(it);
        }
        index_comment(rec);
    }
}

void ModelState::remove_element(ElementId id) {
    if (!is_live(id)) throw ReferenceError("element " + std::to_string(id) + " is not live");
    const ElementRecord& rec = elements_.at(id);
    if (rec.category == Category::Wall) {
        std::vector<ElementId> children;
        for (const auto& [cid, child] : elements_)
            if (child.host && *child.host == id) children.push_back(cid);
        for (ElementId cid : children) {
            unindex_comment(elements_.at(cid));
            elements_.erase(cid);
        }
    }
    unindex_comment(rec);
    elements_.erase(id);
}

std::optional<ElementId> ModelState::lookup_by_comment(std::string_view original_id) const {
    auto it = comment_index_.find(std::string(original_id));
    if (it == comment_index_.end()) return std::nullopt;
    return it->second;
}

bool ModelState::is_live(ElementId id) const {
    return elements_.count(id) != 0;
}

const ElementRecord& ModelState::element(ElementId id) const {
    auto it = elements_.find(id);
    if (it == elements_.end())
        throw ReferenceError("element " + std::to_string(id) + " is not live");
    return it->second;
}

std::map<Category, std::int64_t> ModelState::category_counts() const {
    std::map<Category, std::int64_t> counts;
    for (Category c : {Category::Wall, Category::Floor, Category::Window, Category::Door,
                       Category::Column})
        counts[c] = 0;
    for (const auto& [id, rec] : elements_) counts[rec.category]++;
    return counts;
}

// --- Volumes ----------------------------------------------------------------------------

namespace {

double positive_real_param(const ElementRecord& rec, std::string_view name) {
    const ParamValue* v = find_param(rec.params, name);
    if (!v || !std::holds_alternative<double>(*v))
        throw ValidationError("element " + std::to_string(rec.id) + " is missing parameter '" +
                              std::string(name) + "'");
    double value = std::get<double>(*v);
    if (!(value > 0.0))
        throw ValidationError("parameter '" + std::string(name) + "' of element " +
                              std::to_string(rec.id) + " must be positive");
    return value;
}

double real_param(const ElementRecord& rec, std::string_view name) {
    const ParamValue* v = find_param(rec.params, name);
    if (!v || !std::holds_alternative<double>(*v))
        throw ValidationError("element " + std::to_string(rec.id) + " is missing parameter '" +
                              std::string(name) + "'");
    return std::get<double>(*v);
}

} // namespace

double ModelState::element_volume(ElementId id) const {
    const ElementRecord& rec = element(id);
    switch (rec.subtype) {
        case Subtype::RectWall:
            return curve_length(rec.geometry) * positive_real_param(rec, "Height") *
                   positive_real_param(rec, "Width");
        case Subtype::ProfileWall:
            return profile_area(std::get<Profile>(rec.geometry)) *
                   positive_real_param(rec, "Width");
        case Subtype::FlatFloor:
            return loop_area(std::get<CurveLoop>(rec.geometry)) *
                   positive_real_param(rec, "Thickness");
        case Subtype::SlopedFloor: {
            const double slope = real_param(rec, "SlopeAngle");
            const double c = std::cos(slope);
            if (!(c > 0.0))
                throw ValidationError("SlopeAngle of element " + std::to_string(rec.id) +
                                      " must stay below a right angle");
            return loop_area(std::get<CurveLoop>(rec.geometry)) *
                   positive_real_param(rec, "Thickness") / c;
        }
        case Subtype::HostedInstance: {
            const ElementRecord& wall = element(*rec.host);
            return positive_real_param(rec, "Width") * positive_real_param(rec, "Height") *
                   positive_real_param(wall, "Width");
        }
        case Subtype::FreeColumn:
            return positive_real_param(rec, "b") * positive_real_param(rec, "h") *
                   positive_real_param(rec, "Height");
        case Subtype::SlantedColumn:
            return positive_real_param(rec, "b") * positive_real_param(rec, "h") *
                   curve_length(rec.geometry);
    }
    throw ValidationError("unknown subtype");
}

Vec3 representative_point(const ElementRecord& rec) {
    return std::visit(
        [&](const auto& g) -> Vec3 {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, LocationPoint>) {
                return g.point;
            } else if constexpr (std::is_same_v<T, CurveLoop>) {
                return loop_centroid(g);
            } else if constexpr (std::is_same_v<T, Profile>) {
                if (g.loops.empty()) throw ValidationError("profile must have at least one loop");
                return loop_centroid(g.loops.front());
            } else {
                return evaluate_curve(Curve{g}, 0.5);
            }
        },
        rec.geometry);
}

// --- Dump / load -------------------------------------------------------------------------

std::string ModelState::dump_json() const {
    std::string out;
    out += "{\n";
    out += "  \"schema\": \"";
    out += kModelSchema;
    out += "\",\n";
    out += "  \"nextId\": " + std::to_string(next_id_) + ",\n";
    if (elements_.empty()) {
        out += "  \"elements\": []\n";
    } else {
        out += "  \"elements\": [\n";
        std::size_t n = 0;
        for (const auto& [id, rec] : elements_) {
            out += "    {\n";
            out += "      \"id\": " + std::to_string(id) + ",\n";
            out += "      \"category\": \"" + std::string(to_string(rec.category)) + "\",\n";
            out += "      \"subtype\": \"" + std::string(to_string(rec.subtype)) + "\",\n";
            out += "      \"geometry\": \"" +
                   detail::json_escape(serialize_geometry(rec.geometry)) + "\",\n";
            out += "      \"host\": ";
            out += rec.host ? std::to_string(*rec.host) : "null";
            out += ",\n";
            detail::append_json_params(out, rec.params, "      ");
            out += '\n';
            out += ++n < elements_.size() ? "    },\n" : "    }\n";
        }
        out += "  ]\n";
    }
    out += "}\n";
    return out;
}

ModelState ModelState::from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("model dump is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string())
        throw ValidationError("model dump has no schema tag");
    if (j["schema"].get<std::string>() != kModelSchema)
        throw ValidationError("unsupported model schema '" + j["schema"].get<std::string>() +
                              "'");
    if (!j.contains("nextId") || !j["nextId"].is_number_integer() || !j.contains("elements") ||
        !j["elements"].is_array())
        throw ValidationError("model dump must carry nextId and elements");

    std::vector<ElementRecord> records;
    for (const nlohmann::json& je : j["elements"]) {
        ElementRecord rec;
        if (!je.contains("id") || !je["id"].is_number_integer())
            throw ValidationError("model element needs an integer id");
        rec.id = je["id"].get<std::int64_t>();
        auto cat = parse_category(je.value("category", std::string{}));
        auto sub = parse_subtype(je.value("subtype", std::string{}));
        if (!cat || !sub) throw ValidationError("model element has a bad category or subtype");
        rec.category = *cat;
        rec.subtype = *sub;
        if (!je.contains("geometry") || !je["geometry"].is_string())
            throw ValidationError("model element needs serialized geometry");
        rec.geometry = parse_geometry(je["geometry"].get<std::string>());
        if (je.contains("host") && !je["host"].is_null())
            rec.host = je["host"].get<std::int64_t>();
        if (je.contains("params")) rec.params = detail::params_from_json(je["params"]);
        records.push_back(std::move(rec));
    }
    return restore(std::move(records), j["nextId"].get<std::int64_t>());
}

ModelState ModelState::restore(std::vector<ElementRecord> records, ElementId next_id) {
    ModelState state;
    ElementId max_id = 0;
    for (ElementRecord& rec : records) {
        if (rec.id < 1) throw ValidationError("element ids must be positive");
        if (!subtype_matches_category(rec.category, rec.subtype))
            throw ValidationError("subtype does not belong to category");
        check_geometry_shape(rec.subtype, rec.geometry);
        validate_geometry(rec.geometry);
        if ((rec.subtype == Subtype::HostedInstance) != rec.host.has_value())
            throw ValidationError("host is present exactly for hosted instances");
        // Fill any missing canonical parameters defensively.
        ParamList canonical;
        for (const ParamSpec& spec : canonical_params(rec.category)) {
            if (const ParamValue* v = find_param(rec.params, spec.name)) {
                check_override_kind(spec.name, *v);
                canonical.emplace_back(std::string(spec.name), *v);
            } else {
                canonical.emplace_back(std::string(spec.name), default_param_value(spec));
            }
        }
        for (const auto& [name, value] : rec.params)
            if (!find_param(canonical, name)) canonical.emplace_back(name, value);
        rec.params = std::move(canonical);

        max_id = std::max(max_id, rec.id);
        auto [it, inserted] = state.elements_.emplace(rec.id, std::move(rec));
        if (!inserted) throw ValidationError("duplicate element id in model dump");
    }
    for (const auto& [id, rec] : state.elements_) {
        if (rec.host) {
            auto host = state.elements_.find(*rec.host);
            if (host == state.elements_.end())
                throw ValidationError("host of element " + std::to_string(id) + " is not live");
            if (host->second.category != Category::Wall)
                throw ValidationError("host of element " + std::to_string(id) +
                                      " must be a Wall");
        }
        state.index_comment(rec);
    }
    if (next_id <= max_id)
        throw ValidationError("nextId must exceed every live element id");
    state.next_id_ = next_id;
    return state;
}

} // namespace bimlog
