#pragma once

#include "bimlog/codec.hpp"
#include "bimlog/model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace bimlog {

enum class ReplayMode { Lenient, Strict };

struct ReplayReport {
    std::int64_t events_applied = 0;
    std::int64_t added = 0;
    std::int64_t modified = 0;
    std::int64_t deleted = 0;
    /// One entry per event that could not be applied, in event order.
    std::vector<Diagnostic> warnings;
    std::map<Category, std::int64_t> final_counts;
    /// Row of the event that stopped a strict replay; empty on success and in
    /// lenient mode.
    std::optional<std::int64_t> aborted_at;
};

/// Applies one event to the model, translating the log's element ids into
/// model ids through the Comments index:
///  - ADDED creates a fresh element whose Comments parameter records the
///    event's element_id as decimal text; host_ref is resolved the same way.
///  - MODIFIED and DELETED address the element whose Comments equals the
///    event's element_id.
/// Returns a diagnostic instead of mutating the model when the event cannot
/// be applied (unknown or duplicate id, dead host, invalid patch). Events may
/// not write Comments themselves; that name is reserved for id tracking.
std::optional<Diagnostic> apply_event(ModelState& model, const LogEvent& event);

/// Replays events in order against `model`. Lenient mode skips events that
/// fail and records a warning per skip; strict mode stops at the first
/// failure with aborted_at set. Counts in the report reflect applied events
/// only.
ReplayReport replay_log(ModelState& model, const std::vector<LogEvent>& events,
                        ReplayMode mode = ReplayMode::Lenient);

} // namespace bimlog
