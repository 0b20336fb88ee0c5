#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bimlog/errors.hpp"
#include "bimlog/model.hpp"

#include <cmath>

using namespace bimlog;

namespace {

CurveLoop rectangle(double x1, double y1, double x2, double y2, double z = 0.0) {
    const Vec3 a(x1, y1, z), b(x2, y1, z), c(x2, y2, z), d(x1, y2, z);
    return CurveLoop{{Curve{Line{a, b}}, Curve{Line{b, c}}, Curve{Line{c, d}},
                      Curve{Line{d, a}}}};
}

GeometricBase wall_axis(double length = 8.0) {
    return Line{Vec3(0, 0, 0), Vec3(length, 0, 0)};
}

ElementId add_wall(ModelState& m, const ParamList& overrides = {}) {
    return m.add_element(Category::Wall, Subtype::RectWall, wall_axis(), overrides);
}

} // namespace

TEST_CASE("added elements carry canonical parameters in declaration order") {
    ModelState m;
    const ElementId id = add_wall(m, {{"Height", 4.0}});
    CHECK(id == 1);
    CHECK(m.next_id() == 2);

    const ElementRecord& rec = m.element(id);
    REQUIRE(rec.params.size() == 4);
    CHECK(rec.params[0].first == "Height");
    CHECK(std::get<double>(rec.params[0].second) == 4.0);
    CHECK(rec.params[1].first == "Width");
    CHECK(std::get<double>(rec.params[1].second) == 0.3);
    CHECK(rec.params[2].first == "BaseOffset");
    CHECK(std::get<double>(rec.params[2].second) == 0.0);
    CHECK(rec.params[3].first == "Comments");
    CHECK(std::get<std::string>(rec.params[3].second).empty());

    SUBCASE("unknown overrides are appended after the canonical block") {
        const ElementId extra = add_wall(m, {{"Factor", 2.5}});
        const ElementRecord& rec2 = m.element(extra);
        REQUIRE(rec2.params.size() == 5);
        CHECK(rec2.params[4].first == "Factor");
    }
}

TEST_CASE("override values must match the registered kind") {
    ModelState m;
    CHECK_THROWS_AS(add_wall(m, {{"Height", std::string("tall")}}), ValidationError);
    CHECK_THROWS_AS(add_wall(m, {{"Comments", 3.0}}), ValidationError);
    CHECK(m.elements().empty());
}

TEST_CASE("geometry shape is tied to the subtype") {
    ModelState m;
    CHECK_THROWS_AS(m.add_element(Category::Wall, Subtype::RectWall,
                                  LocationPoint{Vec3(0, 0, 0)}),
                    ValidationError);
    CHECK_THROWS_AS(m.add_element(Category::Wall, Subtype::ProfileWall,
                                  rectangle(0, 0, 4, 4)),
                    ValidationError);
    CHECK_THROWS_AS(m.add_element(Category::Floor, Subtype::FlatFloor, wall_axis()),
                    ValidationError);
    CHECK_THROWS_AS(m.add_element(Category::Column, Subtype::SlantedColumn,
                                  LocationPoint{Vec3(0, 0, 0)}),
                    ValidationError);
    CHECK_THROWS_AS(m.add_element(Category::Wall, Subtype::FlatFloor, wall_axis()),
                    ValidationError);
}

TEST_CASE("hosted instances require a live wall host") {
    ModelState m;
    const ElementId wall = add_wall(m);
    const ElementId floor =
        m.add_element(Category::Floor, Subtype::FlatFloor, rectangle(0, 0, 5, 4));

    CHECK_THROWS_AS(m.add_element(Category::Window, Subtype::HostedInstance,
                                  LocationPoint{Vec3(1, 0, 0.8)}),
                    ReferenceError);
    CHECK_THROWS_AS(m.add_element(Category::Window, Subtype::HostedInstance,
                                  LocationPoint{Vec3(1, 0, 0.8)}, {}, 99),
                    ReferenceError);
    CHECK_THROWS_AS(m.add_element(Category::Window, Subtype::HostedInstance,
                                  LocationPoint{Vec3(1, 0, 0.8)}, {}, floor),
                    ValidationError);
    CHECK_THROWS_AS(m.add_element(Category::Column, Subtype::FreeColumn,
                                  LocationPoint{Vec3(0, 0, 0)}, {}, wall),
                    ValidationError);

    const ElementId window = m.add_element(Category::Window, Subtype::HostedInstance,
                                           LocationPoint{Vec3(1, 0, 0.8)}, {}, wall);
    CHECK(m.element(window).host == wall);
}

TEST_CASE("comment values are an injective index") {
    ModelState m;
    const ElementId first = add_wall(m, {{"Comments", std::string("7")}});
    CHECK(m.lookup_by_comment("7") == first);
    CHECK_THROWS_AS(add_wall(m, {{"Comments", std::string("7")}}), ValidationError);

    const ElementId second = add_wall(m);
    CHECK_THROWS_AS(m.patch_element(second, std::nullopt,
                                    {{"Comments", std::string("7")}}),
                    ValidationError);

    SUBCASE("retagging moves the index entry") {
        m.patch_element(first, std::nullopt, {{"Comments", std::string("9")}});
        CHECK_FALSE(m.lookup_by_comment("7").has_value());
        CHECK(m.lookup_by_comment("9") == first);
    }

    SUBCASE("free-form comments are not indexed") {
        const ElementId tagged = add_wall(m, {{"Comments", std::string("north face")}});
        CHECK_FALSE(m.lookup_by_comment("north face").has_value());
        CHECK(m.element(tagged).id == tagged);
    }
}

TEST_CASE("patches are atomic") {
    ModelState m;
    const ElementId wall = add_wall(m);
    const GeometricBase before = m.element(wall).geometry;

    // Geometry is structurally invalid, so the params half must not land either.
    Arc bad;
    bad.radius = -1.0;
    CHECK_THROWS_AS(m.patch_element(wall, GeometricBase{bad}, {{"Height", 9.0}}),
                    ValidationError);
    CHECK(std::get<double>(*find_param(m.element(wall).params, "Height")) == 3.0);
    CHECK(exact_equals(m.element(wall).geometry, before));

    // Same when the params half is the broken one.
    CHECK_THROWS_AS(m.patch_element(wall, wall_axis(4.0), {{"Height", true}}),
                    ValidationError);
    CHECK(exact_equals(m.element(wall).geometry, before));

    m.patch_element(wall, wall_axis(4.0), {{"Height", 2.5}});
    CHECK(std::get<double>(*find_param(m.element(wall).params, "Height")) == 2.5);
    CHECK_FALSE(exact_equals(m.element(wall).geometry, before));
}

TEST_CASE("deleting a wall cascades to its hosted instances") {
    ModelState m;
    const ElementId wall = add_wall(m);
    const ElementId other = add_wall(m);
    const ElementId win1 = m.add_element(Category::Window, Subtype::HostedInstance,
                                         LocationPoint{Vec3(1, 0, 0.8)}, {}, wall);
    const ElementId win2 = m.add_element(Category::Window, Subtype::HostedInstance,
                                         LocationPoint{Vec3(3, 0, 0.8)}, {}, wall);
    const ElementId door = m.add_element(Category::Door, Subtype::HostedInstance,
                                         LocationPoint{Vec3(5, 0, 0)}, {}, other);

    m.remove_element(wall);
    CHECK_FALSE(m.is_live(wall));
    CHECK_FALSE(m.is_live(win1));
    CHECK_FALSE(m.is_live(win2));
    CHECK(m.is_live(door));
    CHECK(m.category_counts()[Category::Wall] == 1);
    CHECK(m.category_counts()[Category::Window] == 0);

    CHECK_THROWS_AS(m.remove_element(wall), ReferenceError);
    CHECK_THROWS_AS(m.element(win1), ReferenceError);
    CHECK_THROWS_AS(m.patch_element(win1, std::nullopt, {{"Width", 1.0}}),
                    ReferenceError);
}

TEST_CASE("volumes follow the subtype formulas") {
    ModelState m;

    const ElementId wall = add_wall(m);  // length 8, Height 3, Width 0.3
    CHECK(m.element_volume(wall) == doctest::Approx(8 * 3 * 0.3).epsilon(1e-12));

    Profile p;
    p.loops.push_back(rectangle(0, 0, 10, 6));
    p.loops.push_back(rectangle(2, 2, 4, 4));
    const ElementId pwall = m.add_element(Category::Wall, Subtype::ProfileWall, p);
    CHECK(m.element_volume(pwall) == doctest::Approx(56 * 0.3).epsilon(1e-9));

    const ElementId floor =
        m.add_element(Category::Floor, Subtype::FlatFloor, rectangle(0, 0, 5, 4));
    CHECK(m.element_volume(floor) == doctest::Approx(20 * 0.2).epsilon(1e-9));

    const ElementId ramp = m.add_element(Category::Floor, Subtype::SlopedFloor,
                                         rectangle(0, 0, 5, 4), {{"SlopeAngle", 0.5}});
    CHECK(m.element_volume(ramp) ==
          doctest::Approx(20 * 0.2 / std::cos(0.5)).epsilon(1e-9));

    const ElementId window = m.add_element(Category::Window, Subtype::HostedInstance,
                                           LocationPoint{Vec3(1, 0, 0.8)}, {}, wall);
    CHECK(m.element_volume(window) == doctest::Approx(0.9 * 1.2 * 0.3).epsilon(1e-12));

    const ElementId door = m.add_element(Category::Door, Subtype::HostedInstance,
                                         LocationPoint{Vec3(5, 0, 0)}, {}, wall);
    CHECK(m.element_volume(door) == doctest::Approx(0.9 * 2.1 * 0.3).epsilon(1e-12));

    const ElementId col = m.add_element(Category::Column, Subtype::FreeColumn,
                                        LocationPoint{Vec3(2, 2, 0)});
    CHECK(m.element_volume(col) == doctest::Approx(0.3 * 0.3 * 3).epsilon(1e-12));

    const ElementId slanted = m.add_element(Category::Column, Subtype::SlantedColumn,
                                            Line{Vec3(0, 0, 0), Vec3(1, 2, 2)});
    CHECK(m.element_volume(slanted) == doctest::Approx(0.3 * 0.3 * 3).epsilon(1e-12));

    SUBCASE("a window inherits the width of its own wall") {
        m.patch_element(wall, std::nullopt, {{"Width", 0.5}});
        CHECK(m.element_volume(window) == doctest::Approx(0.9 * 1.2 * 0.5).epsilon(1e-12));
        CHECK(m.element_volume(door) == doctest::Approx(0.9 * 2.1 * 0.5).epsilon(1e-12));
    }

    SUBCASE("non-positive dimensions are rejected") {
        m.patch_element(wall, std::nullopt, {{"Height", -1.0}});
        CHECK_THROWS_AS(m.element_volume(wall), ValidationError);
        m.patch_element(ramp, std::nullopt, {{"SlopeAngle", 1.6}});
        CHECK_THROWS_AS(m.element_volume(ramp), ValidationError);
    }
}

TEST_CASE("representative points locate each geometry kind") {
    ModelState m;
    const ElementId wall = add_wall(m);  // line from (0,0,0) to (8,0,0)
    CHECK((representative_point(m.element(wall)) - Vec3(4, 0, 0)).norm() < 1e-12);

    const ElementId floor =
        m.add_element(Category::Floor, Subtype::FlatFloor, rectangle(0, 0, 6, 4));
    CHECK((representative_point(m.element(floor)) - Vec3(3, 2, 0)).norm() < 1e-9);

    Profile p;
    p.loops.push_back(rectangle(0, 0, 10, 6));
    p.loops.push_back(rectangle(1, 1, 2, 2));
    const ElementId pwall = m.add_element(Category::Wall, Subtype::ProfileWall, p);
    CHECK((representative_point(m.element(pwall)) - Vec3(5, 3, 0)).norm() < 1e-9);

    const ElementId window = m.add_element(Category::Window, Subtype::HostedInstance,
                                           LocationPoint{Vec3(1.5, 0, 0.8)}, {}, wall);
    CHECK(representative_point(m.element(window)) == Vec3(1.5, 0, 0.8));
}

TEST_CASE("model dumps re-load to the same bytes") {
    ModelState m;
    const ElementId wall = add_wall(m, {{"Comments", std::string("12")}});
    m.add_element(Category::Window, Subtype::HostedInstance,
                  LocationPoint{Vec3(1, 0, 0.8)}, {{"Width", 1.1}}, wall);
    m.add_element(Category::Floor, Subtype::SlopedFloor, rectangle(0, 0, 5, 4),
                  {{"SlopeAngle", 0.25}});
    const ElementId gone = add_wall(m);
    m.remove_element(gone);

    const std::string dump = m.dump_json();
    CHECK(dump.find(kModelSchema) != std::string::npos);

    const ModelState back = ModelState::from_json(dump);
    CHECK(back.dump_json() == dump);
    CHECK(back.next_id() == m.next_id());
    CHECK(back.elements().size() == m.elements().size());
    CHECK(back.lookup_by_comment("12") == wall);
    CHECK(back.category_counts() == m.category_counts());
}

TEST_CASE("restore guards the model invariants") {
    ModelState m;
    add_wall(m);

    SUBCASE("stale id counter") {
        std::vector<ElementRecord> recs(1, m.element(1));
        CHECK_THROWS_AS(ModelState::restore(recs, 1), ValidationError);
    }

    SUBCASE("duplicate ids") {
        std::vector<ElementRecord> recs(2, m.element(1));
        CHECK_THROWS_AS(ModelState::restore(recs, 5), ValidationError);
    }

    SUBCASE("dangling host") {
        ElementRecord win;
        win.id = 2;
        win.category = Category::Window;
        win.subtype = Subtype::HostedInstance;
        win.geometry = LocationPoint{Vec3(0, 0, 0)};
        win.host = 77;
        std::vector<ElementRecord> recs{m.element(1), win};
        CHECK_THROWS_AS(ModelState::restore(recs, 5), ValidationError);
    }

    SUBCASE("bad schema text") {
        CHECK_THROWS_AS(ModelState::from_json("{}"), ValidationError);
        CHECK_THROWS_AS(ModelState::from_json("not json"), ValidationError);
    }
}
