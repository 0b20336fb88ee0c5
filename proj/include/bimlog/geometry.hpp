#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace bimlog {

using Vec3 = Eigen::Vector3d;

/// Tolerance for loop closure checks (end of one curve to start of the next).
inline constexpr double kClosureTol = 1e-6;

/// Maximum out-of-plane residual a loop may have before it is rejected.
inline constexpr double kPlanarityTol = 1e-6;

/// Right-handed orthonormal frame spanning a plane in 3-D.
/// x_axis and y_axis are unit length and mutually orthogonal (within 1e-9);
/// the plane normal is x_axis x y_axis.
struct Plane {
    Vec3 origin = Vec3::Zero();
    Vec3 x_axis = Vec3::UnitX();
    Vec3 y_axis = Vec3::UnitY();

    Vec3 normal() const { return x_axis.cross(y_axis); }

    static Plane world_xy(const Vec3& origin = Vec3::Zero()) {
        return Plane{origin, Vec3::UnitX(), Vec3::UnitY()};
    }
};

/// A bare insertion point (hosted instances, free columns).
struct LocationPoint {
    Vec3 point = Vec3::Zero();
};

/// Straight segment between two endpoints.
struct Line {
    Vec3 end1 = Vec3::Zero();
    Vec3 end2 = Vec3::Zero();
};

/// Circular arc. Angles are radians measured in the carrier plane from its
/// x axis; the point at angle a is center + r*(cos(a)*x_axis + sin(a)*y_axis).
/// plane.origin coincides with center.
struct Arc {
    Vec3 center = Vec3::Zero();
    double radius = 1.0;
    double start_angle = 0.0;
    double end_angle = 0.0;
    Plane plane = Plane::world_xy();
};

/// Helix around the axis through base along z_vector. The point at angle a is
/// base + r*(cos(a)*x + sin(a)*y) + pitch*(a/2pi)*z with y = z x x, so the
/// displacement along z after sweeping da is pitch*da/2pi.
struct CylindricalHelix {
    Vec3 base = Vec3::Zero();
    double radius = 1.0;
    Vec3 x_vector = Vec3::UnitX();
    Vec3 z_vector = Vec3::UnitZ();
    double pitch = 1.0;
    double start_angle = 0.0;
    double end_angle = 0.0;
};

/// Elliptical arc: center + xr*cos(p)*x_axis + yr*sin(p)*y_axis for
/// p in [start_param, end_param].
struct Ellipse {
    Vec3 center = Vec3::Zero();
    double x_radius = 1.0;
    double y_radius = 1.0;
    Vec3 x_axis = Vec3::UnitX();
    Vec3 y_axis = Vec3::UnitY();
    double start_param = 0.0;
    double end_param = 0.0;
};

/// Rational B-spline curve. knots.size() == control_points.size() + degree + 1,
/// weights.size() == control_points.size(), knots nondecreasing, weights > 0.
struct NurbsSpline {
    int degree = 1;
    std::vector<double> knots;
    std::vector<Vec3> control_points;
    std::vector<double> weights;
};

/// Piecewise cubic Hermite chain through control_points. When tangents is
/// absent they default to Catmull-Rom (see default_hermite_tangents). An
/// explicit tangent list holds either one tangent per point or just the two
/// end tangents (interior ones then default). A periodic spline closes back
/// to the first point with one extra segment.
struct HermiteSpline {
    std::vector<Vec3> control_points;
    bool periodic = false;
    std::optional<std::vector<Vec3>> tangents;
};

using Curve = std::variant<Line, Arc, CylindricalHelix, Ellipse, NurbsSpline, HermiteSpline>;

/// Closed chain of curves: each curve ends where the next starts, and the
/// last ends where the first starts, within kClosureTol.
struct CurveLoop {
    std::vector<Curve> curves;
};

/// Planar region bounded by loops. loops[0] is the outer boundary; any
/// further loops are holes fully inside it, coplanar with it.
struct Profile {
    std::vector<CurveLoop> loops;
};

using GeometricBase = std::variant<LocationPoint, Line, Arc, CylindricalHelix, Ellipse,
                                   NurbsSpline, HermiteSpline, CurveLoop, Profile>;

bool is_curve(const GeometricBase& g);

/// Exact (bitwise on doubles) structural equality.
bool exact_equals(const GeometricBase& a, const GeometricBase& b);
bool exact_equals(const Curve& a, const Curve& b);

// --- Curve evaluation ------------------------------------------------------
//
// Every curve is exposed under a normalized parameter t in [0, 1] mapped
// linearly onto its native range (angles, spline domain, segment chain).

/// Point at normalized parameter t in [0, 1]. DomainError outside the range.
Vec3 evaluate_curve(const Curve& c, double t);

/// Variant dispatcher; KindError when g is not a curve.
Vec3 evaluate_curve(const GeometricBase& g, double t);

/// First derivative dP/dt at t (with respect to the normalized parameter).
Vec3 curve_derivative(const Curve& c, double t);

/// Arc length of the whole curve. Closed forms for Line, Arc and
/// CylindricalHelix; adaptive Gauss-Legendre quadrature of |dP/dt| to a
/// relative tolerance of 1e-9 for the rest.
double curve_length(const Curve& c);
double curve_length(const GeometricBase& g);

/// Arc length of the restriction to [t0, t1] in normalized parameters.
double curve_length_between(const Curve& c, double t0, double t1);

// --- Loops and profiles ----------------------------------------------------

/// True when consecutive curve endpoints chain up and the loop closes,
/// each junction within tol. An empty loop is not closed.
bool loop_is_closed(const CurveLoop& loop, double tol = kClosureTol);

/// Best-fit plane of a closed loop via Newell's method over sampled boundary
/// points. origin is the sample centroid; axes are orthonormal.
/// DegeneracyError when the samples are collinear; PlanarityError when any
/// sample lies farther than kPlanarityTol from the fitted plane.
Plane loop_plane(const CurveLoop& loop);

/// Absolute planar area of a closed loop, computed in the loop plane's 2-D
/// coordinates from the boundary integral 1/2 |integral(x dy - y dx)|
/// (the continuous form of the shoelace sum) with adaptive quadrature.
double loop_area(const CurveLoop& loop);

/// Area centroid of the enclosed region, as a 3-D point on the loop plane.
Vec3 loop_centroid(const CurveLoop& loop);

/// Outer loop area minus the areas of the holes.
double profile_area(const Profile& profile);

/// Checks the Profile invariants: at least one loop, every loop closed and
/// planar, holes coplanar with the outer loop and fully inside it.
/// Throws ValidationError naming the violated rule.
void validate_profile(const Profile& profile);

// --- Splines ---------------------------------------------------------------

/// Cox-de Boor basis function N_{i,degree} at u. Spans are half-open, closed
/// at the final knot. Preconditions: a valid knot vector, 0 <= i <
/// knots.size() - degree - 1, and u within [knots.front(), knots.back()];
/// violations raise DomainError.
double nurbs_basis(int degree, std::span<const double> knots, int i, double u);

/// Catmull-Rom default tangents: interior t_i = (p_{i+1} - p_{i-1}) / 2,
/// one-sided differences at open ends, wrapped neighbors when periodic.
std::vector<Vec3> default_hermite_tangents(std::span<const Vec3> points, bool periodic);

/// The full tangent list a Hermite spline evaluates with (explicit tangents,
/// end-tangent pairs and defaults resolved).
std::vector<Vec3> hermite_tangents(const HermiteSpline& h);

// --- Whole-geometry operations ---------------------------------------------

/// Scales every length (coordinates, radii, pitch, tangents) by factor > 0.
/// Angles, spline parameters, degrees, weights, knots and flags are unchanged.
GeometricBase scale_geometry(const GeometricBase& g, double factor);

/// Structural validation of any geometric base: finite numbers, positive
/// radii, consistent spline counts, unit frames, closed loops, well-formed
/// profiles. Throws ValidationError (or a more specific error) on failure.
void validate_geometry(const GeometricBase& g);

} // namespace bimlog
