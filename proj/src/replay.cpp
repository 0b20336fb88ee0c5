#include "bimlog/replay.hpp"

#include "bimlog/errors.hpp"

#include <string>

namespace bimlog {
namespace {

std::string id_text(std::int64_t id) {
    return std::to_string(id);
}

Diagnostic fail(const LogEvent& event, std::string message) {
    return Diagnostic{event.seq, "", std::move(message)};
}

bool patch_touches_comments(const ParamList& params) {
    return find_param(params, "Comments") != nullptr;
}

std::optional<Diagnostic> do_add(ModelState& model, const LogEvent& event) {
    if (model.lookup_by_comment(id_text(event.element_id)))
        return fail(event, "element " + id_text(event.element_id) + " was already added");
    if (patch_touches_comments(event.params))
        return fail(event, "Comments is reserved for id tracking");

    std::optional<ElementId> host;
    if (event.host_ref) {
        host = model.lookup_by_comment(id_text(*event.host_ref));
        if (!host)
            return fail(event, "host " + id_text(*event.host_ref) + " is not in the model");
    }

    ParamList overrides = event.params;
    overrides.emplace_back("Comments", id_text(event.element_id));
    try {
        model.add_element(event.category, event.subtype, *event.geometry, overrides, host);
    } catch (const Error& e) {
        return fail(event, e.what());
    }
    return std::nullopt;
}

std::optional<Diagnostic> do_modify(ModelState& model, const LogEvent& event) {
    auto target = model.lookup_by_comment(id_text(event.element_id));
    if (!target)
        return fail(event, "element " + id_text(event.element_id) + " is not in the model");
    if (patch_touches_comments(event.params))
        return fail(event, "Comments is reserved for id tracking");
    try {
        model.patch_element(*target, event.geometry, event.params);
    } catch (const Error& e) {
        return fail(event, e.what());
    }
    return std::nullopt;
}

std::optional<Diagnostic> do_delete(ModelState& model, const LogEvent& event) {
    auto target = model.lookup_by_comment(id_text(event.element_id));
    if (!target)
        return fail(event, "element " + id_text(event.element_id) + " is not in the model");
    try {
        model.remove_element(*target);
    } catch (const Error& e) {
        return fail(event, e.what());
    }
    return std::nullopt;
}

} // namespace

std::optional<Diagnostic> apply_event(ModelState& model, const LogEvent& event) {
    switch (event.command) {
        case Command::Added: return do_add(model, event);
        case Command::Modified: return do_modify(model, event);
        case Command::Deleted: return do_delete(model, event);
    }
    return fail(event, "unknown command");
}

ReplayReport replay_log(ModelState& model, const std::vector<LogEvent>& events, ReplayMode mode) {
    ReplayReport report;
    for (const LogEvent& event : events) {
        if (auto diag = apply_event(model, event)) {
            report.warnings.push_back(std::move(*diag));
            if (mode == ReplayMode::Strict) {
                report.aborted_at = event.seq;
                break;
            }
            continue;
        }
        report.events_applied++;
        switch (event.command) {
            case Command::Added: report.added++; break;
            case Command::Modified: report.modified++; break;
            case Command::Deleted: report.deleted++; break;
        }
    }
    report.final_counts = model.category_counts();
    return report;
}

} // namespace bimlog
