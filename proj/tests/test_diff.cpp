#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bimlog/diff.hpp"
#include "bimlog/errors.hpp"
#include "bimlog/replay.hpp"

#include <string>

using namespace bimlog;

namespace {

GeometricBase wall_axis(double y = 0.0) {
    return Line{Vec3(0, y, 0), Vec3(8, y, 0)};
}

CurveLoop slab(double side) {
    const Vec3 a(0, 0, 0), b(side, 0, 0), c(side, side, 0), d(0, side, 0);
    return CurveLoop{{Curve{Line{a, b}}, Curve{Line{b, c}}, Curve{Line{c, d}},
                      Curve{Line{d, a}}}};
}

const CategoryStats& stats_for(const DiffReport& r, Category c) {
    for (const CategoryStats& s : r.categories)
        if (s.category == c) return s;
    FAIL("category missing from report");
    return r.total;
}

} // namespace

TEST_CASE("identical models diff to zero") {
    ModelState a, b;
    for (ModelState* m : {&a, &b}) {
        const ElementId wall =
            m->add_element(Category::Wall, Subtype::RectWall, wall_axis());
        m->add_element(Category::Window, Subtype::HostedInstance,
                       LocationPoint{Vec3(2, 0, 0.8)}, {}, wall);
        m->add_element(Category::Floor, Subtype::FlatFloor, slab(5));
    }

    const DiffReport r = diff_models(a, b);
    CHECK(diff_is_zero(r));
    CHECK(r.total.matched == 3);
    CHECK(r.total.avg_distance == 0.0);
    CHECK(r.total.avg_volume_diff_pct == 0.0);
    CHECK(r.match_method == "comments");
    REQUIRE(r.categories.size() == 5);
    CHECK(r.categories[0].category == Category::Wall);
    CHECK(r.categories[4].category == Category::Column);
    CHECK_FALSE(stats_for(r, Category::Wall).empty);
    CHECK(stats_for(r, Category::Door).empty);
    CHECK(stats_for(r, Category::Column).empty);
}

TEST_CASE("two replays of one log pair through their source ids") {
    const std::string body =
        "1,ADDED,40,Wall,RectWall,\"[Line, (0, 0, 0), (8, 0, 0)]\",,\n"
        "2,ADDED,41,Window,HostedInstance,\"(2, 0, 0.8)\",,40\n";
    const ReadResult log = read_log(std::string_view{body});
    REQUIRE(log.diagnostics.empty());

    ModelState a, b;
    replay_log(a, log.events);
    replay_log(b, log.events);
    CHECK(diff_is_zero(diff_models(a, b)));

    SUBCASE("and against a ground-truth model built directly") {
        ModelState truth;
        const ElementId wall =
            truth.add_element(Category::Wall, Subtype::RectWall, wall_axis());
        truth.add_element(Category::Window, Subtype::HostedInstance,
                          LocationPoint{Vec3(2, 0, 0.8)}, {}, wall);
        // Ground-truth ids are 1 and 2, but replay comments are "40" and "41",
        // so the pairing must fail to line up.
        const DiffReport r = diff_models(truth, a);
        CHECK_FALSE(diff_is_zero(r));
        CHECK(r.total.matched == 0);
        CHECK(r.total.unmatched_original == 2);
        CHECK(r.total.unmatched_reproduced == 2);
    }
}

TEST_CASE("a scaled width shows up as a volume percentage") {
    ModelState a, b;
    a.add_element(Category::Wall, Subtype::RectWall, wall_axis());
    b.add_element(Category::Wall, Subtype::RectWall, wall_axis());
    b.patch_element(1, std::nullopt, {{"Width", 0.3 * 1.001876}});

    const DiffReport r = diff_models(a, b);
    CHECK_FALSE(diff_is_zero(r));
    const CategoryStats& wall = stats_for(r, Category::Wall);
    CHECK(wall.matched == 1);
    CHECK(wall.avg_distance == 0.0);
    CHECK(wall.avg_volume_diff_pct == doctest::Approx(0.1876).epsilon(1e-9));
    CHECK(r.total.avg_volume_diff_pct == doctest::Approx(0.1876).epsilon(1e-9));
}

TEST_CASE("a moved element shows up as a distance") {
    ModelState a, b;
    a.add_element(Category::Column, Subtype::FreeColumn, LocationPoint{Vec3(1, 1, 0)});
    b.add_element(Category::Column, Subtype::FreeColumn, LocationPoint{Vec3(1, 4, 0)});

    const DiffReport r = diff_models(a, b);
    const CategoryStats& col = stats_for(r, Category::Column);
    CHECK(col.avg_distance == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(col.avg_volume_diff_pct == 0.0);
    CHECK_FALSE(diff_is_zero(r));
}

TEST_CASE("unmatched elements are counted per side and category") {
    ModelState a, b;
    a.add_element(Category::Wall, Subtype::RectWall, wall_axis());
    a.add_element(Category::Wall, Subtype::RectWall, wall_axis(4),
                  {{"Comments", std::string("50")}});
    b.add_element(Category::Wall, Subtype::RectWall, wall_axis());
    b.add_element(Category::Floor, Subtype::FlatFloor, slab(5),
                  {{"Comments", std::string("60")}});

    const DiffReport r = diff_models(a, b);
    const CategoryStats& wall = stats_for(r, Category::Wall);
    CHECK(wall.matched == 1);
    CHECK(wall.unmatched_original == 1);
    CHECK(wall.unmatched_reproduced == 0);
    const CategoryStats& floor = stats_for(r, Category::Floor);
    CHECK(floor.unmatched_reproduced == 1);
    CHECK_FALSE(floor.empty);
    CHECK(r.total.unmatched_original == 1);
    CHECK(r.total.unmatched_reproduced == 1);
    CHECK_FALSE(diff_is_zero(r));
}

TEST_CASE("volume failures are skipped, not fatal") {
    ModelState a, b;
    a.add_element(Category::Wall, Subtype::RectWall, wall_axis());
    b.add_element(Category::Wall, Subtype::RectWall, wall_axis());
    b.patch_element(1, std::nullopt, {{"Height", -3.0}});

    const DiffReport r = diff_models(a, b);
    const CategoryStats& wall = stats_for(r, Category::Wall);
    CHECK(wall.matched == 1);
    CHECK(wall.volume_skipped == 1);
    CHECK(wall.avg_volume_diff_pct == 0.0);
    CHECK(r.total.volume_skipped == 1);
    CHECK_FALSE(diff_is_zero(r));
}

TEST_CASE("ambiguous match keys are rejected") {
    ModelState a, b;
    // Wall 1 claims key "2" while wall 2 claims it by id.
    a.add_element(Category::Wall, Subtype::RectWall, wall_axis());
    a.add_element(Category::Wall, Subtype::RectWall, wall_axis(4));
    a.patch_element(1, std::nullopt, {{"Comments", std::string("2")}});
    b.add_element(Category::Wall, Subtype::RectWall, wall_axis());
    CHECK_THROWS_AS(diff_models(a, b), ValidationError);
}

TEST_CASE("diff reports render deterministically") {
    ModelState a, b;
    a.add_element(Category::Wall, Subtype::RectWall, wall_axis());
    b.add_element(Category::Wall, Subtype::RectWall, wall_axis());
    b.patch_element(1, std::nullopt, {{"Width", 0.31}});

    const DiffReport r1 = diff_models(a, b);
    const DiffReport r2 = diff_models(a, b);
    const std::string json = diff_report_json(r1);
    CHECK(json == diff_report_json(r2));
    CHECK(json.find(kDiffSchema) != std::string::npos);
    CHECK(json.find("\"matchMethod\": \"comments\"") != std::string::npos);
    CHECK(json.find("\"avgVolumeDiffPct\"") != std::string::npos);
    CHECK(json.find("\"unmatchedOriginal\"") != std::string::npos);

    const std::string table = diff_report_table(r1);
    CHECK(table.find("Wall") != std::string::npos);
    CHECK(table.find("total") != std::string::npos);
}
