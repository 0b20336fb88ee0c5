#pragma once

#include "bimlog/model.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace bimlog {

inline constexpr std::string_view kDiffSchema = "bimlog.diff/1";

/// Pairing of an original model against a reproduction. An element's match
/// key is its Comments value when that is a decimal id string (which is how
/// replay records source ids), otherwise its own id. A source model matched
/// against its replay therefore pairs id k with the element whose Comments
/// is "k"; two replays of the same log pair through their shared source ids.
struct MatchResult {
    /// (original id, reproduced id), ordered by match key.
    std::vector<std::pair<ElementId, ElementId>> matched;
    std::vector<ElementId> unmatched_original;
    std::vector<ElementId> unmatched_reproduced;
};

/// ValidationError if two elements of one model share a match key.
MatchResult match_by_comment(const ModelState& original, const ModelState& reproduced);

struct CategoryStats {
    Category category = Category::Wall;
    std::int64_t matched = 0;
    std::int64_t unmatched_original = 0;
    std::int64_t unmatched_reproduced = 0;
    /// Mean distance between representative points of matched pairs, meters.
    double avg_distance = 0.0;
    /// Mean of 100 * |reproducedVolume - originalVolume| / originalVolume
    /// over matched pairs whose volumes both evaluate.
    double avg_volume_diff_pct = 0.0;
    /// Matched pairs excluded from the volume average because a side failed
    /// volume evaluation.
    std::int64_t volume_skipped = 0;
    /// True when neither model has an element in this category.
    bool empty = true;
};

struct DiffReport {
    /// How elements were paired; always "comments".
    std::string match_method = "comments";
    /// One entry per category in declaration order (Wall, Floor, Window,
    /// Door, Column), present even when empty.
    std::vector<CategoryStats> categories;
    CategoryStats total;
};

/// True when every category matched fully with zero distance and volume
/// deviation: the reproduction is indistinguishable under these metrics.
bool diff_is_zero(const DiffReport& report);

DiffReport diff_models(const ModelState& original, const ModelState& reproduced);

/// Deterministic JSON rendering (schema bimlog.diff/1); byte-identical for
/// equal reports.
std::string diff_report_json(const DiffReport& report);

/// Fixed-width text table for terminal output.
std::string diff_report_table(const DiffReport& report);

} // namespace bimlog
