#include "support/generators.hpp"

namespace testsupport {

using namespace bimlog;

double canon(double v) {
    return parse_real(format_real(v));
}

double grid_coord(Rng& rng) {
    return canon(static_cast<double>(rng.below(100001)) * 0.001);
}

double grid_dim(Rng& rng) {
    return canon(static_cast<double>(100 + rng.below(9901)) * 0.001);
}

double grid_angle(Rng& rng, std::uint64_t max_milli) {
    return canon(static_cast<double>(rng.below(max_milli + 1)) * 0.001);
}

Vec3 grid_point(Rng& rng) {
    return Vec3(grid_coord(rng), grid_coord(rng), canon(grid_coord(rng) * 0.3));
}

LocationPoint gen_location(Rng& rng) {
    return LocationPoint{grid_point(rng)};
}

Line gen_line(Rng& rng) {
    Vec3 a = grid_point(rng);
    Vec3 b = grid_point(rng);
    while ((a - b).norm() < 0.01) b = grid_point(rng);
    return Line{a, b};
}

Arc gen_arc(Rng& rng) {
    Arc arc;
    arc.center = grid_point(rng);
    arc.radius = grid_dim(rng);
    arc.start_angle = grid_angle(rng, 6283);
    arc.end_angle = canon(arc.start_angle + 0.2 + grid_angle(rng, 6083));
    arc.plane = Plane::world_xy(arc.center);
    return arc;
}

namespace {

// Exact orthonormal pairs: axis-aligned frames plus 3-4-5 tilts, whose
// components are wire-format fixed points and orthogonal to machine
// precision.
struct Frame {
    Vec3 x;
    Vec3 y;
};

Frame pick_frame(Rng& rng) {
    switch (rng.below(4)) {
        case 0: return {Vec3::UnitX(), Vec3::UnitY()};
        case 1: return {Vec3(0.6, 0.8, 0), Vec3(-0.8, 0.6, 0)};
        case 2: return {Vec3::UnitX(), Vec3(0, 0.6, 0.8)};
        default: return {Vec3(0.8, 0, -0.6), Vec3::UnitY()};
    }
}

} // namespace

CylindricalHelix gen_helix(Rng& rng) {
    CylindricalHelix h;
    h.base = grid_point(rng);
    h.radius = grid_dim(rng);
    const Frame f = pick_frame(rng);
    h.x_vector = f.x;
    h.z_vector = f.x.cross(f.y);
    h.pitch = grid_dim(rng);
    h.start_angle = grid_angle(rng, 6283);
    h.end_angle = canon(h.start_angle + 0.5 + grid_angle(rng, 12000));
    return h;
}

Ellipse gen_ellipse(Rng& rng) {
    Ellipse e;
    e.center = grid_point(rng);
    e.x_radius = grid_dim(rng);
    e.y_radius = grid_dim(rng);
    const Frame f = pick_frame(rng);
    e.x_axis = f.x;
    e.y_axis = f.y;
    e.start_param = grid_angle(rng, 6283);
    e.end_param = canon(e.start_param + 0.2 + grid_angle(rng, 6083));
    return e;
}

NurbsSpline gen_nurbs(Rng& rng) {
    NurbsSpline s;
    s.degree = 1 + static_cast<int>(rng.below(4));
    const std::size_t n = static_cast<std::size_t>(s.degree) + 1 + rng.below(5);
    for (std::size_t i = 0; i < n; ++i) s.control_points.push_back(grid_point(rng));
    if (rng.percent(70)) {
        // Clamped uniform integer knots.
        const std::size_t interior = n - static_cast<std::size_t>(s.degree) - 1;
        for (int i = 0; i <= s.degree; ++i) s.knots.push_back(0.0);
        for (std::size_t i = 1; i <= interior; ++i) s.knots.push_back(static_cast<double>(i));
        for (int i = 0; i <= s.degree; ++i)
            s.knots.push_back(static_cast<double>(interior + 1));
    } else {
        // Unclamped strictly increasing knots on the milli grid.
        double k = 0.0;
        for (std::size_t i = 0; i < n + s.degree + 1; ++i) {
            s.knots.push_back(canon(k));
            k += 0.5 + static_cast<double>(rng.below(1501)) * 0.001;
        }
    }
    const bool rational = rng.percent(50);
    for (std::size_t i = 0; i < n; ++i)
        s.weights.push_back(
            rational ? canon(static_cast<double>(200 + rng.below(2801)) * 0.001) : 1.0);
    return s;
}

HermiteSpline gen_hermite(Rng& rng) {
    HermiteSpline h;
    const std::size_t n = 2 + rng.below(5);
    for (std::size_t i = 0; i < n; ++i) h.control_points.push_back(grid_point(rng));
    h.periodic = rng.percent(25);
    switch (rng.below(3)) {
        case 0: break;
        case 1: h.tangents = std::vector<Vec3>{grid_point(rng), grid_point(rng)}; break;
        default: {
            std::vector<Vec3> tangents;
            for (std::size_t i = 0; i < n; ++i) tangents.push_back(grid_point(rng));
            h.tangents = std::move(tangents);
        }
    }
    return h;
}

namespace {

Line edge(const Vec3& a, const Vec3& b) {
    return Line{a, b};
}

CurveLoop rect_loop_at(double x1, double y1, double x2, double y2, double z) {
    const Vec3 a(x1, y1, z), b(x2, y1, z), c(x2, y2, z), d(x1, y2, z);
    CurveLoop loop;
    loop.curves = {Curve{edge(a, b)}, Curve{edge(b, c)}, Curve{edge(c, d)},
                   Curve{edge(d, a)}};
    return loop;
}

} // namespace

CurveLoop gen_loop(Rng& rng) {
    const double z = canon(grid_coord(rng) * 0.3);
    const double x1 = grid_coord(rng);
    const double y1 = grid_coord(rng);
    if (rng.percent(60))
        return rect_loop_at(x1, y1, canon(x1 + grid_dim(rng) + 1.0),
                            canon(y1 + grid_dim(rng) + 1.0), z);
    const double xm = canon(x1 + grid_dim(rng) + 1.0);
    const double x2 = canon(xm + grid_dim(rng) + 1.0);
    const double ym = canon(y1 + grid_dim(rng) + 1.0);
    const double y2 = canon(ym + grid_dim(rng) + 1.0);
    const Vec3 p0(x1, y1, z), p1(x2, y1, z), p2(x2, ym, z), p3(xm, ym, z), p4(xm, y2, z),
        p5(x1, y2, z);
    CurveLoop loop;
    loop.curves = {Curve{edge(p0, p1)}, Curve{edge(p1, p2)}, Curve{edge(p2, p3)},
                   Curve{edge(p3, p4)}, Curve{edge(p4, p5)}, Curve{edge(p5, p0)}};
    return loop;
}

Profile gen_profile(Rng& rng) {
    const double z = canon(grid_coord(rng) * 0.3);
    const double x1 = grid_coord(rng);
    const double y1 = grid_coord(rng);
    const double w = canon(grid_dim(rng) + 2.0);
    const double h = canon(grid_dim(rng) + 2.0);
    Profile profile;
    profile.loops.push_back(rect_loop_at(x1, y1, canon(x1 + w), canon(y1 + h), z));
    if (rng.percent(60))
        profile.loops.push_back(rect_loop_at(canon(x1 + w * 0.25), canon(y1 + h * 0.25),
                                             canon(x1 + w * 0.75), canon(y1 + h * 0.75), z));
    return profile;
}

GeometricBase gen_geometry(Rng& rng, std::size_t kind) {
    switch (kind % kGeometryKinds) {
        case 0: return gen_location(rng);
        case 1: return gen_line(rng);
        case 2: return gen_arc(rng);
        case 3: return gen_helix(rng);
        case 4: return gen_ellipse(rng);
        case 5: return gen_nurbs(rng);
        case 6: return gen_hermite(rng);
        case 7: return gen_loop(rng);
        default: return gen_profile(rng);
    }
}

ParamList gen_params(Rng& rng) {
    ParamList params;
    if (rng.percent(70)) params.emplace_back("Height", grid_dim(rng));
    if (rng.percent(50)) params.emplace_back("Width", grid_dim(rng));
    if (rng.percent(30)) params.emplace_back("Factor", grid_dim(rng));
    if (rng.percent(30))
        params.emplace_back("Count", static_cast<std::int64_t>(rng.below(1000)));
    if (rng.percent(30)) params.emplace_back("Locked", rng.percent(50));
    if (rng.percent(30))
        params.emplace_back("Anchor", ElementRef{static_cast<std::int64_t>(1 + rng.below(99))});
    if (rng.percent(40)) {
        static const std::vector<std::string> kTexts = {
            "",
            "plain note",
            "quote \" inside",
            "semi;colon and equals=sign",
            "back\\slash",
            "comma, and \"both\"; x=1",
        };
        params.emplace_back("Comments", kTexts[rng.below(kTexts.size())]);
    }
    return params;
}

LogEvent gen_event(Rng& rng, std::int64_t seq) {
    LogEvent e;
    e.seq = seq;
    e.element_id = static_cast<std::int64_t>(1 + rng.below(100000));
    const std::uint64_t roll = rng.below(100);
    if (roll < 60) {
        e.command = Command::Added;
        switch (rng.below(5)) {
            case 0:
                e.category = Category::Wall;
                e.subtype = Subtype::RectWall;
                e.geometry = gen_line(rng);
                break;
            case 1:
                e.category = Category::Wall;
                e.subtype = Subtype::ProfileWall;
                e.geometry = gen_profile(rng);
                break;
            case 2:
                e.category = Category::Floor;
                e.subtype = Subtype::FlatFloor;
                e.geometry = gen_loop(rng);
                break;
            case 3:
                e.category = Category::Window;
                e.subtype = Subtype::HostedInstance;
                e.geometry = gen_location(rng);
                e.host_ref = static_cast<std::int64_t>(1 + rng.below(100000));
                break;
            default:
                e.category = Category::Column;
                e.subtype = Subtype::FreeColumn;
                e.geometry = gen_location(rng);
                break;
        }
        e.params = gen_params(rng);
    } else if (roll < 85) {
        e.command = Command::Modified;
        e.category = Category::Wall;
        e.subtype = Subtype::RectWall;
        if (rng.percent(60)) e.geometry = gen_geometry(rng, rng.below(kGeometryKinds));
        e.params = gen_params(rng);
        if (!e.geometry && e.params.empty()) e.params.emplace_back("Height", grid_dim(rng));
    } else {
        e.command = Command::Deleted;
        e.category = Category::Floor;
        e.subtype = Subtype::SlopedFloor;
    }
    return e;
}

} // namespace testsupport
