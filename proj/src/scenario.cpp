#include "bimlog/scenario.hpp"

#include "bimlog/errors.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

namespace bimlog {

// --- Session execution ---------------------------------------------------------

namespace {

ParamList event_params_for_add(const ElementRecord& rec) {
    ParamList params;
    for (const auto& [name, value] : rec.params)
        if (name != "Comments") params.emplace_back(name, value);
    return params;
}

void reject_comments(const ParamList& params) {
    if (find_param(params, "Comments"))
        throw ValidationError("Comments is reserved for id tracking");
}

} // namespace

SessionResult run_scenario(const Scenario& scenario) {
    SessionResult result;
    std::int64_t seq = 0;
    for (const ScenarioStep& step : scenario.steps) {
        const std::int64_t index = ++seq;
        try {
            LogEvent event;
            event.seq = index;
            std::visit(
                [&](const auto& s) {
                    using T = std::decay_t<decltype(s)>;
                    ModelState& model = result.ground_truth;
                    if constexpr (std::is_same_v<T, AddStep>) {
                        reject_comments(s.params);
                        if (s.id != model.next_id())
                            throw ValidationError(
                                "add id " + std::to_string(s.id) +
                                " does not match the session's next id " +
                                std::to_string(model.next_id()));
                        const ElementId id =
                            model.add_element(s.category, s.subtype, s.geometry, s.params,
                                              s.host);
                        event.command = Command::Added;
                        event.element_id = s.id;
                        event.category = s.category;
                        event.subtype = s.subtype;
                        event.geometry = s.geometry;
                        event.params = event_params_for_add(model.element(id));
                        event.host_ref = s.host;
                    } else if constexpr (std::is_same_v<T, ModifyStep>) {
                        reject_comments(s.params);
                        if (!s.geometry && s.params.empty())
                            throw ValidationError("modify step changes nothing");
                        const ElementRecord& rec = model.element(s.id);
                        event.command = Command::Modified;
                        event.element_id = s.id;
                        event.category = rec.category;
                        event.subtype = rec.subtype;
                        event.geometry = s.geometry;
                        event.params = s.params;
                        model.patch_element(s.id, s.geometry, s.params);
                    } else {
                        const ElementRecord& rec = model.element(s.id);
                        event.command = Command::Deleted;
                        event.element_id = s.id;
                        event.category = rec.category;
                        event.subtype = rec.subtype;
                        model.remove_element(s.id);
                    }
                },
                step);
            result.events.push_back(std::move(event));
        } catch (const Error& e) {
            throw ScenarioError(e.what(), index);
        }
    }
    return result;
}

// --- Random generation -----------------------------------------------------------

namespace {

/// Deterministic helper around mt19937_64. Draws use plain modulo and a hand
/// written shuffle so the byte stream never depends on the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    bool percent(std::uint64_t p) { return below(100) < p; }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }

private:
    std::mt19937_64 engine_;
};

/// Every generated real is a fixed point of the wire format, so serializing
/// and reparsing a generated log reproduces the same doubles bit for bit.
double canon(double v) {
    return parse_real(format_real(v));
}

double grid_coord(Rng& rng) { return canon(static_cast<double>(rng.below(100001)) * 0.001); }
double grid_height(Rng& rng) { return canon(static_cast<double>(rng.below(30001)) * 0.001); }
double grid_dim(Rng& rng) {
    return canon(static_cast<double>(100 + rng.below(9901)) * 0.001);
}
double grid_angle(Rng& rng, std::uint64_t max_milli) {
    return canon(static_cast<double>(rng.below(max_milli + 1)) * 0.001);
}

Vec3 grid_point(Rng& rng) { return Vec3(grid_coord(rng), grid_coord(rng), grid_height(rng)); }

Vec3 grid_point_at(Rng& rng, double z) { return Vec3(grid_coord(rng), grid_coord(rng), z); }

Line grid_line(Rng& rng) {
    const double z = grid_height(rng);
    Vec3 a = grid_point_at(rng, z);
    Vec3 b = grid_point_at(rng, z);
    while ((a - b).norm() < 0.5) b = grid_point_at(rng, z);
    return Line{a, b};
}

Arc grid_arc(Rng& rng) {
    Arc arc;
    arc.center = grid_point(rng);
    arc.radius = grid_dim(rng);
    arc.start_angle = grid_angle(rng, 6283);
    arc.end_angle = canon(arc.start_angle + grid_angle(rng, 5983) + 0.3);
    arc.plane = Plane::world_xy(arc.center);
    return arc;
}

CylindricalHelix grid_helix(Rng& rng) {
    CylindricalHelix h;
    h.base = grid_point(rng);
    h.radius = grid_dim(rng);
    h.x_vector = Vec3::UnitX();
    h.z_vector = Vec3::UnitZ();
    h.pitch = grid_dim(rng);
    h.start_angle = grid_angle(rng, 6283);
    h.end_angle = canon(h.start_angle + grid_angle(rng, 12000) + 0.5);
    return h;
}

Ellipse grid_ellipse(Rng& rng) {
    Ellipse e;
    e.center = grid_point(rng);
    e.x_radius = grid_dim(rng);
    e.y_radius = grid_dim(rng);
    e.x_axis = Vec3::UnitX();
    e.y_axis = Vec3::UnitY();
    e.start_param = grid_angle(rng, 6283);
    e.end_param = canon(e.start_param + grid_angle(rng, 5983) + 0.3);
    return e;
}

NurbsSpline grid_nurbs(Rng& rng) {
    NurbsSpline s;
    s.degree = 2 + static_cast<int>(rng.below(2));
    const std::size_t n = static_cast<std::size_t>(s.degree) + 1 + rng.below(4);
    for (std::size_t i = 0; i < n; ++i) s.control_points.push_back(grid_point(rng));
    // Clamped uniform knots over integer values; integers are grid-exact.
    const std::size_t interior = n - static_cast<std::size_t>(s.degree) - 1;
    for (int i = 0; i <= s.degree; ++i) s.knots.push_back(0.0);
    for (std::size_t i = 1; i <= interior; ++i) s.knots.push_back(static_cast<double>(i));
    for (int i = 0; i <= s.degree; ++i)
        s.knots.push_back(static_cast<double>(interior + 1));
    const bool rational = rng.percent(40);
    for (std::size_t i = 0; i < n; ++i)
        s.weights.push_back(rational ? canon(static_cast<double>(500 + rng.below(1501)) * 0.001)
                                     : 1.0);
    return s;
}

HermiteSpline grid_hermite(Rng& rng) {
    HermiteSpline h;
    const std::size_t n = 3 + rng.below(3);
    for (std::size_t i = 0; i < n; ++i) h.control_points.push_back(grid_point(rng));
    h.periodic = rng.percent(20);
    const std::uint64_t tangent_form = rng.below(3);
    if (tangent_form == 1) {
        h.tangents = std::vector<Vec3>{grid_point(rng), grid_point(rng)};
    } else if (tangent_form == 2) {
        std::vector<Vec3> tangents;
        for (std::size_t i = 0; i < n; ++i) tangents.push_back(grid_point(rng));
        h.tangents = std::move(tangents);
    }
    return h;
}

GeometricBase wall_baseline(Rng& rng) {
    const std::uint64_t roll = rng.below(100);
    if (roll < 50) return grid_line(rng);
    if (roll < 70) return grid_arc(rng);
    if (roll < 80) return grid_nurbs(rng);
    if (roll < 90) return grid_hermite(rng);
    if (roll < 95) return grid_ellipse(rng);
    return grid_helix(rng);
}

Line loop_edge(const Vec3& a, const Vec3& b) {
    return Line{a, b};
}

CurveLoop rect_loop(Rng& rng) {
    const double z = grid_height(rng);
    const double x1 = grid_coord(rng);
    const double y1 = grid_coord(rng);
    const double x2 = canon(x1 + grid_dim(rng) + 1.0);
    const double y2 = canon(y1 + grid_dim(rng) + 1.0);
    const Vec3 a(x1, y1, z), b(x2, y1, z), c(x2, y2, z), d(x1, y2, z);
    CurveLoop loop;
    loop.curves = {Curve{loop_edge(a, b)}, Curve{loop_edge(b, c)}, Curve{loop_edge(c, d)},
                   Curve{loop_edge(d, a)}};
    return loop;
}

CurveLoop ell_loop(Rng& rng) {
    const double z = grid_height(rng);
    const double x1 = grid_coord(rng);
    const double y1 = grid_coord(rng);
    const double xm = canon(x1 + grid_dim(rng) + 1.0);
    const double x2 = canon(xm + grid_dim(rng) + 1.0);
    const double ym = canon(y1 + grid_dim(rng) + 1.0);
    const double y2 = canon(ym + grid_dim(rng) + 1.0);
    const Vec3 p0(x1, y1, z), p1(x2, y1, z), p2(x2, ym, z), p3(xm, ym, z), p4(xm, y2, z),
        p5(x1, y2, z);
    CurveLoop loop;
    loop.curves = {Curve{loop_edge(p0, p1)}, Curve{loop_edge(p1, p2)}, Curve{loop_edge(p2, p3)},
                   Curve{loop_edge(p3, p4)}, Curve{loop_edge(p4, p5)},
                   Curve{loop_edge(p5, p0)}};
    return loop;
}

CurveLoop floor_loop(Rng& rng) {
    return rng.percent(70) ? rect_loop(rng) : ell_loop(rng);
}

CurveLoop rect_loop_at(double x1, double y1, double x2, double y2, double z) {
    const Vec3 a(x1, y1, z), b(x2, y1, z), c(x2, y2, z), d(x1, y2, z);
    CurveLoop loop;
    loop.curves = {Curve{loop_edge(a, b)}, Curve{loop_edge(b, c)}, Curve{loop_edge(c, d)},
                   Curve{loop_edge(d, a)}};
    return loop;
}

Profile wall_profile(Rng& rng) {
    const double z = grid_height(rng);
    const double x1 = grid_coord(rng);
    const double y1 = grid_coord(rng);
    const double w = canon(grid_dim(rng) + 2.0);
    const double h = canon(grid_dim(rng) + 2.0);
    const double x2 = canon(x1 + w);
    const double y2 = canon(y1 + h);
    Profile profile;
    profile.loops.push_back(rect_loop_at(x1, y1, x2, y2, z));
    if (rng.percent(50)) {
        const double hx1 = canon(x1 + w * 0.25);
        const double hx2 = canon(x1 + w * 0.75);
        const double hy1 = canon(y1 + h * 0.25);
        const double hy2 = canon(y1 + h * 0.75);
        profile.loops.push_back(rect_loop_at(hx1, hy1, hx2, hy2, z));
    }
    return profile;
}

Line column_axis(Rng& rng) {
    Vec3 base = grid_point(rng);
    Vec3 top = base + Vec3(canon(grid_dim(rng) * 0.2), canon(grid_dim(rng) * 0.2),
                           canon(grid_dim(rng) + 1.0));
    top = Vec3(canon(top.x()), canon(top.y()), canon(top.z()));
    return Line{base, top};
}

struct Draft {
    Subtype subtype;
    GeometricBase geometry;
};

Draft draft_element(Rng& rng, Category category) {
    switch (category) {
        case Category::Wall:
            if (rng.percent(20)) return {Subtype::ProfileWall, wall_profile(rng)};
            return {Subtype::RectWall, wall_baseline(rng)};
        case Category::Floor:
            return {rng.percent(25) ? Subtype::SlopedFloor : Subtype::FlatFloor,
                    floor_loop(rng)};
        case Category::Window:
        case Category::Door:
            return {Subtype::HostedInstance, LocationPoint{grid_point(rng)}};
        case Category::Column:
            if (rng.percent(30)) return {Subtype::SlantedColumn, column_axis(rng)};
            return {Subtype::FreeColumn, LocationPoint{grid_point(rng)}};
    }
    throw ValidationError("unknown category");
}

GeometricBase draft_geometry_for(Rng& rng, Subtype subtype) {
    switch (subtype) {
        case Subtype::RectWall: return wall_baseline(rng);
        case Subtype::ProfileWall: return wall_profile(rng);
        case Subtype::FlatFloor:
        case Subtype::SlopedFloor: return floor_loop(rng);
        case Subtype::HostedInstance:
        case Subtype::FreeColumn: return LocationPoint{grid_point(rng)};
        case Subtype::SlantedColumn: return column_axis(rng);
    }
    throw ValidationError("unknown subtype");
}

double draft_param_value(Rng& rng, std::string_view name) {
    if (name == "SlopeAngle") return grid_angle(rng, 1000);
    return grid_dim(rng);
}

ParamList draft_overrides(Rng& rng, Category category) {
    ParamList overrides;
    for (const ParamSpec& spec : canonical_params(category)) {
        if (spec.kind != ParamKind::Real) continue;
        if (rng.percent(50))
            overrides.emplace_back(std::string(spec.name), draft_param_value(rng, spec.name));
    }
    return overrides;
}

} // namespace

Scenario random_scenario(std::uint64_t seed, const NetCounts& counts, double churn) {
    if (!(churn >= 0.0 && churn < 1.0))
        throw ValidationError("churn must lie in [0, 1)");
    if (counts.walls < 0 || counts.floors < 0 || counts.windows < 0 || counts.doors < 0 ||
        counts.columns < 0)
        throw ValidationError("element counts must not be negative");
    if (counts.total() == 0) throw ValidationError("scenario needs at least one element");
    if (counts.walls == 0 && (counts.windows > 0 || counts.doors > 0))
        throw ValidationError("windows and doors need at least one wall");

    Rng rng(seed);

    const double net = static_cast<double>(counts.total());
    std::int64_t extra = std::llround(net * churn / (1.0 - churn));
    std::int64_t modifies = 0;
    std::int64_t transients = 0;
    while (extra > 0) {
        if (extra >= 2 && rng.percent(35)) {
            transients++;
            extra -= 2;
        } else {
            modifies++;
            extra -= 1;
        }
    }

    std::array<std::int64_t, 5> perm_remaining = {counts.walls, counts.floors, counts.windows,
                                                  counts.doors, counts.columns};
    constexpr std::array<Category, 5> kCats = {Category::Wall, Category::Floor,
                                               Category::Window, Category::Door,
                                               Category::Column};

    struct LiveElement {
        std::int64_t id;
        Category category;
        Subtype subtype;
    };
    std::vector<LiveElement> live;
    std::vector<std::int64_t> perm_walls;
    std::vector<std::size_t> pending_delete; // indices into live
    std::int64_t next_id = 1;

    Scenario scenario;

    auto emit_add = [&](Category category, bool transient) {
        Draft draft = draft_element(rng, category);
        AddStep step;
        step.id = next_id++;
        step.category = category;
        step.subtype = draft.subtype;
        step.geometry = std::move(draft.geometry);
        step.params = draft_overrides(rng, category);
        if (draft.subtype == Subtype::HostedInstance)
            step.host = perm_walls[rng.below(perm_walls.size())];
        live.push_back({step.id, category, draft.subtype});
        if (transient)
            pending_delete.push_back(live.size() - 1);
        else if (category == Category::Wall)
            perm_walls.push_back(step.id);
        scenario.steps.emplace_back(std::move(step));
    };

    auto remove_live = [&](std::size_t index) {
        // Keep pending_delete indices valid by moving the tail entry in.
        const std::size_t last = live.size() - 1;
        if (index != last) {
            live[index] = live[last];
            for (std::size_t& p : pending_delete)
                if (p == last) p = index;
        }
        live.pop_back();
    };

    while (true) {
        std::int64_t perm_total = 0;
        std::array<std::int64_t, 5> w_perm = {};
        for (std::size_t i = 0; i < 5; ++i) {
            const bool hosted = kCats[i] == Category::Window || kCats[i] == Category::Door;
            w_perm[i] = (hosted && perm_walls.empty()) ? 0 : perm_remaining[i];
            perm_total += w_perm[i];
        }
        const std::int64_t w_modify = live.empty() ? 0 : modifies;
        const std::int64_t w_transient = transients;
        const std::int64_t w_delete = static_cast<std::int64_t>(pending_delete.size());
        const std::int64_t total = perm_total + w_modify + w_transient + w_delete;
        if (total == 0) break;

        std::int64_t roll = static_cast<std::int64_t>(rng.below(total));
        bool handled = false;
        for (std::size_t i = 0; i < 5 && !handled; ++i) {
            if (roll < w_perm[i]) {
                perm_remaining[i]--;
                emit_add(kCats[i], false);
                handled = true;
            } else {
                roll -= w_perm[i];
            }
        }
        if (handled) continue;
        if (roll < w_modify) {
            modifies--;
            const LiveElement& target = live[rng.below(live.size())];
            ModifyStep step;
            step.id = target.id;
            if (rng.percent(50)) {
                step.geometry = draft_geometry_for(rng, target.subtype);
            } else {
                std::vector<const ParamSpec*> reals;
                for (const ParamSpec& spec : canonical_params(target.category))
                    if (spec.kind == ParamKind::Real) reals.push_back(&spec);
                const ParamSpec& spec = *reals[rng.below(reals.size())];
                step.params.emplace_back(std::string(spec.name),
                                         draft_param_value(rng, spec.name));
            }
            scenario.steps.emplace_back(std::move(step));
            continue;
        }
        roll -= w_modify;
        if (roll < w_transient) {
            transients--;
            // Hosted transients need a permanent wall to attach to.
            Category category;
            if (perm_walls.empty()) {
                constexpr std::array<Category, 3> kFree = {Category::Wall, Category::Floor,
                                                           Category::Column};
                category = kFree[rng.below(kFree.size())];
            } else {
                category = kCats[rng.below(kCats.size())];
            }
            emit_add(category, true);
            continue;
        }
        // Delete one pending transient.
        const std::size_t pick = rng.below(pending_delete.size());
        const std::size_t live_index = pending_delete[pick];
        scenario.steps.emplace_back(DeleteStep{live[live_index].id});
        pending_delete[pick] = pending_delete.back();
        pending_delete.pop_back();
        remove_live(live_index);
    }

    return scenario;
}

// --- JSON ------------------------------------------------------------------------

std::string scenario_to_json(const Scenario& scenario) {
    std::string out;
    out += "{\n";
    out += "  \"schema\": \"";
    out += kScenarioSchema;
    out += "\",\n";
    if (scenario.steps.empty()) {
        out += "  \"steps\": []\n";
    } else {
        out += "  \"steps\": [\n";
        for (std::size_t i = 0; i < scenario.steps.size(); ++i) {
            out += "    {\n";
            std::visit(
                [&](const auto& s) {
                    using T = std::decay_t<decltype(s)>;
                    if constexpr (std::is_same_v<T, AddStep>) {
                        out += "      \"action\": \"add\",\n";
                        out += "      \"id\": " + std::to_string(s.id) + ",\n";
                        out += "      \"category\": \"" + std::string(to_string(s.category)) +
                               "\",\n";
                        out += "      \"subtype\": \"" + std::string(to_string(s.subtype)) +
                               "\",\n";
                        out += "      \"geometry\": \"" +
                               detail::json_escape(serialize_geometry(s.geometry)) + "\",\n";
                        detail::append_json_params(out, s.params, "      ");
                        out += ",\n";
                        out += "      \"host\": ";
                        out += s.host ? std::to_string(*s.host) : "null";
                        out += '\n';
                    } else if constexpr (std::is_same_v<T, ModifyStep>) {
                        out += "      \"action\": \"modify\",\n";
                        out += "      \"id\": " + std::to_string(s.id) + ",\n";
                        out += "      \"geometry\": ";
                        if (s.geometry)
                            out += '"' + detail::json_escape(serialize_geometry(*s.geometry)) +
                                   '"';
                        else
                            out += "null";
                        out += ",\n";
                        detail::append_json_params(out, s.params, "      ");
                        out += '\n';
                    } else {
                        out += "      \"action\": \"delete\",\n";
                        out += "      \"id\": " + std::to_string(s.id) + "\n";
                    }
                },
                scenario.steps[i]);
            out += i + 1 < scenario.steps.size() ? "    },\n" : "    }\n";
        }
        out += "  ]\n";
    }
    out += "}\n";
    return out;
}

Scenario scenario_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string())
        throw ValidationError("scenario has no schema tag");
    if (j["schema"].get<std::string>() != kScenarioSchema)
        throw ValidationError("unsupported scenario schema '" +
                              j["schema"].get<std::string>() + "'");
    if (!j.contains("steps") || !j["steps"].is_array())
        throw ValidationError("scenario must carry a steps array");

    Scenario scenario;
    for (const nlohmann::json& js : j["steps"]) {
        if (!js.is_object() || !js.contains("action") || !js["action"].is_string() ||
            !js.contains("id") || !js["id"].is_number_integer())
            throw ValidationError("scenario steps need an action and an integer id");
        const std::string action = js["action"].get<std::string>();
        const std::int64_t id = js["id"].get<std::int64_t>();
        if (action == "add") {
            AddStep step;
            step.id = id;
            auto cat = parse_category(js.value("category", std::string{}));
            auto sub = parse_subtype(js.value("subtype", std::string{}));
            if (!cat || !sub)
                throw ValidationError("add step has a bad category or subtype");
            step.category = *cat;
            step.subtype = *sub;
            if (!js.contains("geometry") || !js["geometry"].is_string())
                throw ValidationError("add step needs serialized geometry");
            step.geometry = parse_geometry(js["geometry"].get<std::string>());
            if (js.contains("params")) step.params = detail::params_from_json(js["params"]);
            if (js.contains("host") && !js["host"].is_null())
                step.host = js["host"].get<std::int64_t>();
            scenario.steps.emplace_back(std::move(step));
        } else if (action == "modify") {
            ModifyStep step;
            step.id = id;
            if (js.contains("geometry") && !js["geometry"].is_null())
                step.geometry = parse_geometry(js["geometry"].get<std::string>());
            if (js.contains("params")) step.params = detail::params_from_json(js["params"]);
            scenario.steps.emplace_back(std::move(step));
        } else if (action == "delete") {
            scenario.steps.emplace_back(DeleteStep{id});
        } else {
            throw ValidationError("unknown scenario action '" + action + "'");
        }
    }
    return scenario;
}

} // namespace bimlog
