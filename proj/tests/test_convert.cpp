#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bimlog/convert.hpp"
#include "bimlog/errors.hpp"
#include "support/generators.hpp"

#include <cmath>

using namespace bimlog;
using testsupport::Rng;

TEST_CASE("length round-trips through feet stay within format rounding") {
    Rng rng(7);
    int changed = 0;
    for (int i = 0; i < 5000; ++i) {
        const double meters = rng.chaos(0.001, 200.0);
        const double back = unit_roundtrip_length(meters);
        CHECK(std::abs(back - meters) <= 5e-9 * meters + 1e-15);
        if (back != meters) ++changed;
    }
    // The trip is no identity: most values land on a different double.
    CHECK(changed > 2500);
}

TEST_CASE("geometry round-trips move every point by a hair at most") {
    Rng rng(19);
    for (std::size_t kind = 0; kind < testsupport::kGeometryKinds; ++kind) {
        const GeometricBase g = testsupport::gen_geometry(rng, kind);
        const GeometricBase back = unit_roundtrip_geometry(g);

        if (is_curve(g)) {
            for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                const Vec3 p = evaluate_curve(g, t);
                const Vec3 q = evaluate_curve(back, t);
                CHECK((p - q).norm() <= 2e-7 * (1.0 + p.norm()));
            }
        }
    }
}

TEST_CASE("events convert lengths but leave everything else alone") {
    LogEvent e;
    e.seq = 1;
    e.command = Command::Added;
    e.element_id = 4;
    e.category = Category::Floor;
    e.subtype = Subtype::SlopedFloor;
    e.geometry = LocationPoint{Vec3(1, 2, 0)};
    e.params.emplace_back("Thickness", 0.2);
    e.params.emplace_back("SlopeAngle", 0.5);
    e.params.emplace_back("Count", std::int64_t{7});
    e.params.emplace_back("Locked", true);
    e.params.emplace_back("Anchor", ElementRef{3});
    e.params.emplace_back("Note", std::string("keep"));

    const LogEvent back = unit_roundtrip_event(e);
    CHECK(back.seq == e.seq);
    CHECK(back.command == e.command);
    CHECK(back.element_id == e.element_id);
    CHECK(back.host_ref == e.host_ref);

    const double thickness = std::get<double>(*find_param(back.params, "Thickness"));
    CHECK(std::abs(thickness - 0.2) <= 5e-9 * 0.2);

    // Angles are dimensionless for unit conversion; they pass through the
    // nine-digit format but are never scaled. 0.5 is its own fixed point.
    CHECK(std::get<double>(*find_param(back.params, "SlopeAngle")) == 0.5);
    CHECK(std::get<std::int64_t>(*find_param(back.params, "Count")) == 7);
    CHECK(std::get<bool>(*find_param(back.params, "Locked")) == true);
    CHECK(std::get<ElementRef>(*find_param(back.params, "Anchor")).id == 3);
    CHECK(std::get<std::string>(*find_param(back.params, "Note")) == "keep");
}

TEST_CASE("converted events still parse and validate") {
    Rng rng(31);
    std::vector<LogEvent> events;
    for (int i = 0; i < 100; ++i) events.push_back(testsupport::gen_event(rng, i + 1));

    const std::vector<LogEvent> back = unit_roundtrip_events(events);
    REQUIRE(back.size() == events.size());
    for (const LogEvent& e : back) {
        // Converted values are no longer wire-format fixed points, so the
        // next text trip may round them again; it must still parse and
        // validate cleanly, and the trip after that one is exact.
        const LogEvent once = parse_event(format_event(e), e.seq);
        CHECK(once.command == e.command);
        CHECK(once.element_id == e.element_id);
        CHECK(once.host_ref == e.host_ref);
        const LogEvent twice = parse_event(format_event(once), once.seq);
        CHECK(exact_equals(twice, once));
    }
}
