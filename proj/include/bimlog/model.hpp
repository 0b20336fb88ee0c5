#pragma once

#include "bimlog/geometry.hpp"
#include "bimlog/params.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bimlog {

/// One live element. params always contains the category's canonical names
/// (defaults filled in), in canonical order, extras appended; host is present
/// exactly for HostedInstance elements and refers to a live Wall.
struct ElementRecord {
    ElementId id = 0;
    Category category = Category::Wall;
    Subtype subtype = Subtype::RectWall;
    GeometricBase geometry;
    ParamList params;
    std::optional<ElementId> host;
};

/// The parametric building model: live elements, a monotone id allocator and
/// an index from "Comments" text (when it is a decimal integer) to the element
/// carrying it. The index is injective; elements sort by id.
class ModelState {
public:
    /// Validates pairing, geometry and host, fills canonical defaults, applies
    /// overrides, allocates the next id. Returns the new element's id.
    ElementId add_element(Category category, Subtype subtype, GeometricBase geometry,
                          const ParamList& overrides = {},
                          std::optional<ElementId> host = std::nullopt);

    /// Applies a geometry replacement (same shape rules as adding) and/or a
    /// parameter patch (upsert by name). Atomic: validates before mutating.
    void patch_element(ElementId id, const std::optional<GeometricBase>& geometry,
                       const ParamList& patch);

    /// Removes an element; removing a Wall cascades to elements hosted on it.
    void remove_element(ElementId id);

    /// Live element whose Comments parameter equals original_id.
    std::optional<ElementId> lookup_by_comment(std::string_view original_id) const;

    bool is_live(ElementId id) const;
    const ElementRecord& element(ElementId id) const;  // ReferenceError when dead
    const std::map<ElementId, ElementRecord>& elements() const { return elements_; }
    const std::map<std::string, ElementId>& comment_index() const { return comment_index_; }
    ElementId next_id() const { return next_id_; }

    std::map<Category, std::int64_t> category_counts() const;

    /// Extrusion-style volume in cubic meters. ValidationError when a needed
    /// dimension parameter is missing or not positive.
    double element_volume(ElementId id) const;

    /// Canonical JSON dump: elements sorted by id, all fields, reals in the
    /// wire format's 9-digit form. Byte-identical for equal states.
    std::string dump_json() const;

    /// Inverse of dump_json. ValidationError on schema mismatch or invalid
    /// content.
    static ModelState from_json(std::string_view text);

    /// Rebuilds a state from complete records (used by from_json and tests).
    /// Validates records and host references, rebuilds the comment index.
    static ModelState restore(std::vector<ElementRecord> records, ElementId next_id);

private:
    void index_comment(const ElementRecord& rec);
    void unindex_comment(const ElementRecord& rec);

    std::map<ElementId, ElementRecord> elements_;
    std::map<std::string, ElementId> comment_index_;
    ElementId next_id_ = 1;
};

/// The point used for distance scoring: LocationPoint itself, curve midpoint
/// (t = 0.5), outer-loop area centroid for loops and profiles.
Vec3 representative_point(const ElementRecord& rec);

/// Schema tag carried by model dumps.
inline constexpr std::string_view kModelSchema = "bimlog.model/1";

} // namespace bimlog
