#pragma once

#include "bimlog/codec.hpp"
#include "bimlog/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bimlog {

inline constexpr std::string_view kScenarioSchema = "bimlog.scenario/1";

// A scenario scripts one editing session. Steps carry the session-assigned
// element ids: an add step must declare the id the model will hand out next
// (1, 2, 3, ... in add order), and later steps address elements by those ids.
// This mirrors a recorded session, where the log's element ids are the ids
// the authoring tool assigned.

struct AddStep {
    std::int64_t id = 0;
    Category category = Category::Wall;
    Subtype subtype = Subtype::RectWall;
    GeometricBase geometry;
    /// Parameter overrides; Comments is reserved and rejected.
    ParamList params;
    /// Session id of the host wall; exactly for hosted instances.
    std::optional<std::int64_t> host;
};

struct ModifyStep {
    std::int64_t id = 0;
    std::optional<GeometricBase> geometry;
    ParamList params;
};

struct DeleteStep {
    std::int64_t id = 0;
};

using ScenarioStep = std::variant<AddStep, ModifyStep, DeleteStep>;

struct Scenario {
    std::vector<ScenarioStep> steps;
};

struct SessionResult {
    /// The model as the session left it, built directly from the steps.
    ModelState ground_truth;
    /// The event log a recorder would have written, one event per step with
    /// seq equal to the 1-based step index. ADDED events carry the element's
    /// complete parameter set (Comments excluded).
    std::vector<LogEvent> events;
};

/// Applies the steps in order and records them. ScenarioError (tagged with
/// the 1-based step index) when a step is inconsistent: wrong add id, dead
/// or unknown target, reserved Comments parameter, a modify that changes
/// nothing, or geometry the model rejects.
SessionResult run_scenario(const Scenario& scenario);

/// Net element counts a generated scenario leaves in the model.
struct NetCounts {
    std::int64_t walls = 0;
    std::int64_t floors = 0;
    std::int64_t windows = 0;
    std::int64_t doors = 0;
    std::int64_t columns = 0;

    std::int64_t total() const { return walls + floors + windows + doors + columns; }
};

/// Generates a randomized but fully seed-deterministic editing session.
///
/// `churn` in [0, 1) is the fraction of events that do not contribute to the
/// final model: the step count is about total() / (1 - churn), with the
/// surplus split between parameter or geometry modifications and transient
/// elements that are added and later deleted. Hosted elements only ever host
/// on permanent walls, so cascade deletes never occur. Every real value is
/// canonicalized through the wire format, so serializing the resulting
/// events and parsing them back reproduces the ground truth exactly.
Scenario random_scenario(std::uint64_t seed, const NetCounts& counts, double churn);

/// Deterministic JSON rendering (schema bimlog.scenario/1).
std::string scenario_to_json(const Scenario& scenario);

Scenario scenario_from_json(std::string_view text);

} // namespace bimlog
