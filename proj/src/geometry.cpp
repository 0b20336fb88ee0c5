#include "bimlog/geometry.hpp"

#include "bimlog/errors.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace bimlog {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool eq(const Vec3& a, const Vec3& b) {
    return a.x() == b.x() && a.y() == b.y() && a.z() == b.z();
}

// --- Gauss-Legendre quadrature ----------------------------------------------

struct GlTable {
    std::array<double, 16> nodes{};   // on [-1, 1]
    std::array<double, 16> weights{};
};

// Nodes and weights computed once by Newton iteration on the Legendre
// recurrence; accurate to machine precision without a hardcoded table.
const GlTable& gl16() {
    static const GlTable table = [] {
        GlTable t;
        const int n = 16;
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            t.nodes[i] = -x;
            t.nodes[n - 1 - i] = x;
            double w = 2.0 / ((1.0 - x * x) * dp * dp);
            t.weights[i] = w;
            t.weights[n - 1 - i] = w;
        }
        return t;
    }();
    return table;
}

template <std::size_t N, class F>
std::array<double, N> gl_panel(const F& f, double a, double b) {
    const GlTable& t = gl16();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, N> acc{};
    for (std::size_t j = 0; j < t.nodes.size(); ++j) {
        std::array<double, N> v = f(mid + half * t.nodes[j]);
        for (std::size_t c = 0; c < N; ++c) acc[c] += t.weights[j] * v[c];
    }
    for (std::size_t c = 0; c < N; ++c) acc[c] *= half;
    return acc;
}

template <std::size_t N, class F>
std::array<double, N> adapt_rec(const F& f, double a, double b, const std::array<double, N>& whole,
                                double rel_tol, double abs_floor, int depth) {
    const double mid = 0.5 * (a + b);
    std::array<double, N> left = gl_panel<N>(f, a, mid);
    std::array<double, N> right = gl_panel<N>(f, mid, b);
    std::array<double, N> sum{};
    bool converged = true;
    for (std::size_t c = 0; c < N; ++c) {
        sum[c] = left[c] + right[c];
        double err = std::abs(sum[c] - whole[c]);
        if (err > std::max(rel_tol * std::abs(sum[c]), abs_floor)) converged = false;
    }
    if (converged || depth >= 24) return sum;
    left = adapt_rec<N>(f, a, mid, left, rel_tol, abs_floor, depth + 1);
    right = adapt_rec<N>(f, mid, b, right, rel_tol, abs_floor, depth + 1);
    for (std::size_t c = 0; c < N; ++c) sum[c] = left[c] + right[c];
    return sum;
}

/// Adaptive integral of f over [a, b], componentwise convergence test.
template <std::size_t N, class F>
std::array<double, N> integrate_adaptive(const F& f, double a, double b, double rel_tol,
                                         double abs_floor) {
    if (a == b) return std::array<double, N>{};
    return adapt_rec<N>(f, a, b, gl_panel<N>(f, a, b), rel_tol, abs_floor, 0);
}

// --- Per-type helpers --------------------------------------------------------

Vec3 helix_y_axis(const CylindricalHelix& h) {
    return h.z_vector.cross(h.x_vector).normalized();
}

struct NurbsDomain {
    double u0;
    double u1;
};

NurbsDomain nurbs_domain(const NurbsSpline& s) {
    const std::size_t m = s.knots.size();
    return {s.knots[s.degree], s.knots[m - 1 - s.degree]};
}

double basis_raw(int p, std::span<const double> knots, int i, double u);

double basis_zero(std::span<const double> knots, int i, double u) {
    if (knots[i] <= u && u < knots[i + 1]) return 1.0;
    // Close the final span so the curve reaches its last point at u = umax.
    if (u == knots[knots.size() - 1] && knots[i] < u && knots[i + 1] == u) return 1.0;
    return 0.0;
}

double basis_raw(int p, std::span<const double> knots, int i, double u) {
    if (p == 0) return basis_zero(knots, i, u);
    double acc = 0.0;
    double den = knots[i + p] - knots[i];
    if (den > 0.0) acc += (u - knots[i]) / den * basis_raw(p - 1, knots, i, u);
    den = knots[i + p + 1] - knots[i + 1];
    if (den > 0.0) acc += (knots[i + p + 1] - u) / den * basis_raw(p - 1, knots, i + 1, u);
    return acc;
}

double basis_derivative(int p, std::span<const double> knots, int i, double u) {
    if (p == 0) return 0.0;
    double acc = 0.0;
    double den = knots[i + p] - knots[i];
    if (den > 0.0) acc += p / den * basis_raw(p - 1, knots, i, u);
    den = knots[i + p + 1] - knots[i + 1];
    if (den > 0.0) acc -= p / den * basis_raw(p - 1, knots, i + 1, u);
    return acc;
}

Vec3 nurbs_point(const NurbsSpline& s, double u) {
    Vec3 num = Vec3::Zero();
    double den = 0.0;
    for (std::size_t i = 0; i < s.control_points.size(); ++i) {
        double n = basis_raw(s.degree, s.knots, static_cast<int>(i), u);
        if (n == 0.0) continue;
        double w = n * s.weights[i];
        num += w * s.control_points[i];
        den += w;
    }
    return num / den;
}

Vec3 nurbs_derivative_u(const NurbsSpline& s, double u) {
    Vec3 num = Vec3::Zero();
    Vec3 dnum = Vec3::Zero();
    double den = 0.0;
    double dden = 0.0;
    for (std::size_t i = 0; i < s.control_points.size(); ++i) {
        const int ii = static_cast<int>(i);
        double n = basis_raw(s.degree, s.knots, ii, u);
        double nd = basis_derivative(s.degree, s.knots, ii, u);
        num += n * s.weights[i] * s.control_points[i];
        den += n * s.weights[i];
        dnum += nd * s.weights[i] * s.control_points[i];
        dden += nd * s.weights[i];
    }
    const Vec3 c = num / den;
    return (dnum - dden * c) / den;
}

struct HermiteData {
    std::vector<Vec3> points;    // periodic chains repeat the first point
    std::vector<Vec3> tangents;  // one per entry of points
};

HermiteData hermite_data(const HermiteSpline& h) {
    HermiteData d;
    std::vector<Vec3> tans = hermite_tangents(h);
    d.points = h.control_points;
    d.tangents = std::move(tans);
    if (h.periodic) {
        d.points.push_back(h.control_points.front());
        d.tangents.push_back(d.tangents.front());
    }
    return d;
}

Vec3 hermite_point(const HermiteData& d, double t) {
    const std::size_t nseg = d.points.size() - 1;
    double s = t * static_cast<double>(nseg);
    std::size_t k = std::min(static_cast<std::size_t>(s), nseg - 1);
    double x = s - static_cast<double>(k);
    const double h00 = 2 * x * x * x - 3 * x * x + 1;
    const double h10 = x * x * x - 2 * x * x + x;
    const double h01 = -2 * x * x * x + 3 * x * x;
    const double h11 = x * x * x - x * x;
    return h00 * d.points[k] + h10 * d.tangents[k] + h01 * d.points[k + 1] +
           h11 * d.tangents[k + 1];
}

Vec3 hermite_derivative(const HermiteData& d, double t) {
    const std::size_t nseg = d.points.size() - 1;
    double s = t * static_cast<double>(nseg);
    std::size_t k = std::min(static_cast<std::size_t>(s), nseg - 1);
    double x = s - static_cast<double>(k);
    const double h00 = 6 * x * x - 6 * x;
    const double h10 = 3 * x * x - 4 * x + 1;
    const double h01 = -6 * x * x + 6 * x;
    const double h11 = 3 * x * x - 2 * x;
    Vec3 dp = h00 * d.points[k] + h10 * d.tangents[k] + h01 * d.points[k + 1] +
              h11 * d.tangents[k + 1];
    return dp * static_cast<double>(nseg);
}

void check_t(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("curve parameter outside [0, 1]");
}

// Interior parameter values where the derivative may be discontinuous or the
// integrand loses smoothness; integration runs piecewise between them.
std::vector<double> smooth_breaks(const Curve& c) {
    std::vector<double> breaks;
    if (const auto* s = std::get_if<NurbsSpline>(&c)) {
        const auto [u0, u1] = nurbs_domain(*s);
        for (double u : s->knots) {
            if (u > u0 && u < u1) {
                double t = (u - u0) / (u1 - u0);
                if (breaks.empty() || breaks.back() != t) breaks.push_back(t);
            }
        }
    } else if (const auto* h = std::get_if<HermiteSpline>(&c)) {
        const std::size_t nseg = h->control_points.size() - 1 + (h->periodic ? 1 : 0);
        for (std::size_t k = 1; k < nseg; ++k)
            breaks.push_back(static_cast<double>(k) / static_cast<double>(nseg));
    }
    return breaks;
}

double quadrature_length(const Curve& c, double t0, double t1) {
    auto speed = [&](double t) -> std::array<double, 1> {
        return {curve_derivative(c, t).norm()};
    };
    std::vector<double> cuts;
    cuts.push_back(t0);
    for (double b : smooth_breaks(c))
        if (b > t0 && b < t1) cuts.push_back(b);
    cuts.push_back(t1);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        total += integrate_adaptive<1>(speed, cuts[k], cuts[k + 1], 1e-9, 1e-300)[0];
    return total;
}

// --- Loop sampling -----------------------------------------------------------

std::size_t sample_count(const Curve& c) {
    struct Counter {
        std::size_t operator()(const Line&) const { return 2; }
        std::size_t operator()(const Arc& a) const {
            double sweep = std::abs(a.end_angle - a.start_angle);
            return std::clamp<std::size_t>(static_cast<std::size_t>(sweep / 0.2) + 2, 4, 64);
        }
        std::size_t operator()(const CylindricalHelix& h) const {
            double sweep = std::abs(h.end_angle - h.start_angle);
            return std::clamp<std::size_t>(static_cast<std::size_t>(sweep / 0.2) + 2, 8, 128);
        }
        std::size_t operator()(const Ellipse& e) const {
            double sweep = std::abs(e.end_param - e.start_param);
            return std::clamp<std::size_t>(static_cast<std::size_t>(sweep / 0.2) + 2, 4, 64);
        }
        std::size_t operator()(const NurbsSpline& s) const {
            return std::clamp<std::size_t>(4 * s.control_points.size(), 8, 64);
        }
        std::size_t operator()(const HermiteSpline& h) const {
            return std::clamp<std::size_t>(8 * h.control_points.size(), 8, 64);
        }
    };
    return std::visit(Counter{}, c);
}

/// Boundary samples walking the whole loop; t = 1 of each curve is skipped
/// because it coincides with the start of the next one.
std::vector<Vec3> loop_samples(const CurveLoop& loop) {
    std::vector<Vec3> pts;
    for (const Curve& c : loop.curves) {
        const std::size_t n = sample_count(c);
        for (std::size_t j = 0; j < n; ++j)
            pts.push_back(evaluate_curve(c, static_cast<double>(j) / static_cast<double>(n)));
    }
    return pts;
}

struct PlaneFrame {
    Plane plane;
    double scale = 0.0;
};

PlaneFrame fit_plane(const std::vector<Vec3>& pts) {
    if (pts.size() < 3) throw DegeneracyError("loop has too few boundary samples");
    Vec3 centroid = Vec3::Zero();
    for (const Vec3& p : pts) centroid += p;
    centroid /= static_cast<double>(pts.size());

    double scale = 0.0;
    for (const Vec3& p : pts) scale = std::max(scale, (p - centroid).norm());
    if (scale == 0.0) throw DegeneracyError("loop boundary collapses to a point");

    // Newell's method on centered points: the sum of edge cross products is
    // twice the area vector, so its direction is the loop normal.
    Vec3 normal = Vec3::Zero();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec3 a = pts[i] - centroid;
        const Vec3 b = pts[(i + 1) % pts.size()] - centroid;
        normal += a.cross(b);
    }
    if (normal.norm() <= 1e-10 * scale * scale)
        throw DegeneracyError("loop boundary is collinear");
    normal.normalize();

    Vec3 x_axis = Vec3::Zero();
    for (const Vec3& p : pts) {
        Vec3 q = p - centroid;
        q -= q.dot(normal) * normal;
        if (q.norm() > 1e-9 * scale) {
            x_axis = q.normalized();
            break;
        }
    }
    if (x_axis.isZero()) throw DegeneracyError("loop boundary is collinear");

    Plane plane{centroid, x_axis, normal.cross(x_axis)};
    return {plane, scale};
}

void check_planar(const std::vector<Vec3>& pts, const Plane& plane) {
    const Vec3 n = plane.normal();
    for (const Vec3& p : pts) {
        if (std::abs((p - plane.origin).dot(n)) > kPlanarityTol)
            throw PlanarityError("loop is not planar within 1e-6");
    }
}

struct AreaMoments {
    double area = 0.0;  // signed
    double sx = 0.0;    // integral of x^2 dy
    double sy = 0.0;    // integral of y^2 dx
};

AreaMoments loop_moments(const CurveLoop& loop, const Plane& plane, double scale) {
    AreaMoments m;
    const double floor = 1e-14 * scale * scale + 1e-300;
    for (const Curve& c : loop.curves) {
        auto f = [&](double t) -> std::array<double, 3> {
            const Vec3 rel = evaluate_curve(c, t) - plane.origin;
            const Vec3 d = curve_derivative(c, t);
            const double x = rel.dot(plane.x_axis);
            const double y = rel.dot(plane.y_axis);
            const double dx = d.dot(plane.x_axis);
            const double dy = d.dot(plane.y_axis);
            return {x * dy - y * dx, x * x * dy, y * y * dx};
        };
        std::vector<double> cuts;
        cuts.push_back(0.0);
        for (double b : smooth_breaks(c)) cuts.push_back(b);
        cuts.push_back(1.0);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            std::array<double, 3> piece =
                integrate_adaptive<3>(f, cuts[k], cuts[k + 1], 1e-12, floor);
            m.area += piece[0];
            m.sx += piece[1];
            m.sy += piece[2];
        }
    }
    m.area *= 0.5;
    return m;
}

// Fixed, reasonably dense polyline used only for containment tests.
std::vector<Vec3> containment_samples(const CurveLoop& loop) {
    std::vector<Vec3> pts;
    for (const Curve& c : loop.curves) {
        std::size_t n = std::min<std::size_t>(4 * sample_count(c), 256);
        for (std::size_t j = 0; j < n; ++j)
            pts.push_back(evaluate_curve(c, static_cast<double>(j) / static_cast<double>(n)));
    }
    return pts;
}

bool point_in_polygon(double x, double y, const std::vector<std::array<double, 2>>& poly) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const auto& pi = poly[i];
        const auto& pj = poly[j];
        if ((pi[1] > y) != (pj[1] > y)) {
            double xc = (pj[0] - pi[0]) * (y - pi[1]) / (pj[1] - pi[1]) + pi[0];
            if (x < xc) inside = !inside;
        }
    }
    return inside;
}

// --- Validation helpers ------------------------------------------------------

void require(bool ok, const char* rule) {
    if (!ok) throw ValidationError(rule);
}

bool finite(const Vec3& v) {
    return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

// Frames that pass through 9-digit text get a slightly looser unit tolerance
// than computed planes.
constexpr double kFrameTol = 1e-8;

void validate_curve(const Curve& c) {
    struct V {
        void operator()(const Line& l) const {
            require(finite(l.end1) && finite(l.end2), "line endpoints must be finite");
        }
        void operator()(const Arc& a) const {
            require(finite(a.center), "arc center must be finite");
            require(std::isfinite(a.radius) && a.radius > 0.0, "arc radius must be positive");
            require(std::isfinite(a.start_angle) && std::isfinite(a.end_angle),
                    "arc angles must be finite");
            require(finite(a.plane.origin) && finite(a.plane.x_axis) && finite(a.plane.y_axis),
                    "arc plane must be finite");
            require(std::abs(a.plane.x_axis.norm() - 1.0) <= 1e-9 &&
                        std::abs(a.plane.y_axis.norm() - 1.0) <= 1e-9,
                    "arc plane axes must be unit length");
            require(std::abs(a.plane.x_axis.dot(a.plane.y_axis)) <= 1e-9,
                    "arc plane axes must be orthogonal");
        }
        void operator()(const CylindricalHelix& h) const {
            require(finite(h.base), "helix base must be finite");
            require(std::isfinite(h.radius) && h.radius > 0.0, "helix radius must be positive");
            require(finite(h.x_vector) && finite(h.z_vector), "helix frame must be finite");
            require(std::abs(h.x_vector.norm() - 1.0) <= kFrameTol,
                    "helix x vector must be unit length");
            require(std::abs(h.z_vector.norm() - 1.0) <= kFrameTol,
                    "helix z vector must be unit length");
            require(std::abs(h.x_vector.dot(h.z_vector)) <= kFrameTol,
                    "helix frame vectors must be orthogonal");
            require(std::isfinite(h.pitch), "helix pitch must be finite");
            require(std::isfinite(h.start_angle) && std::isfinite(h.end_angle),
                    "helix angles must be finite");
        }
        void operator()(const Ellipse& e) const {
            require(finite(e.center), "ellipse center must be finite");
            require(std::isfinite(e.x_radius) && e.x_radius > 0.0 && std::isfinite(e.y_radius) &&
                        e.y_radius > 0.0,
                    "ellipse radii must be positive");
            require(finite(e.x_axis) && finite(e.y_axis), "ellipse axes must be finite");
            require(std::abs(e.x_axis.norm() - 1.0) <= kFrameTol &&
                        std::abs(e.y_axis.norm() - 1.0) <= kFrameTol,
                    "ellipse axes must be unit length");
            require(std::isfinite(e.start_param) && std::isfinite(e.end_param),
                    "ellipse parameters must be finite");
        }
        void operator()(const NurbsSpline& s) const {
            require(s.degree >= 1, "spline degree must be at least 1");
            const std::size_t n = s.control_points.size();
            require(n >= static_cast<std::size_t>(s.degree) + 1,
                    "spline needs at least degree + 1 control points");
            require(s.knots.size() == n + s.degree + 1,
                    "knot count must equal control points + degree + 1");
            require(s.weights.size() == n, "weight count must equal control point count");
            for (const Vec3& p : s.control_points)
                require(finite(p), "spline control points must be finite");
            for (std::size_t i = 0; i + 1 < s.knots.size(); ++i) {
                require(std::isfinite(s.knots[i]), "knots must be finite");
                require(s.knots[i] <= s.knots[i + 1], "knots must be nondecreasing");
            }
            require(std::isfinite(s.knots.back()), "knots must be finite");
            const auto [u0, u1] = nurbs_domain(s);
            require(u0 < u1, "spline domain must be nonempty");
            for (double w : s.weights)
                require(std::isfinite(w) && w > 0.0, "weights must be positive");
        }
        void operator()(const HermiteSpline& h) const {
            require(h.control_points.size() >= 2, "hermite spline needs at least 2 points");
            for (const Vec3& p : h.control_points)
                require(finite(p), "hermite points must be finite");
            if (h.tangents) {
                require(h.tangents->size() == 2 || h.tangents->size() == h.control_points.size(),
                        "tangent count must be 2 or match the point count");
                for (const Vec3& t : *h.tangents)
                    require(finite(t), "hermite tangents must be finite");
            }
        }
    };
    std::visit(V{}, c);
}

void validate_loop(const CurveLoop& loop) {
    require(!loop.curves.empty(), "curve loop must not be empty");
    for (const Curve& c : loop.curves) validate_curve(c);
    require(loop_is_closed(loop), "curve loop is not closed");
}

Curve scale_curve(const Curve& c, double k) {
    struct V {
        double k;
        Curve operator()(const Line& l) const { return Line{l.end1 * k, l.end2 * k}; }
        Curve operator()(const Arc& a) const {
            Arc out = a;
            out.center *= k;
            out.radius *= k;
            out.plane.origin *= k;
            return out;
        }
        Curve operator()(const CylindricalHelix& h) const {
            CylindricalHelix out = h;
            out.base *= k;
            out.radius *= k;
            out.pitch *= k;
            return out;
        }
        Curve operator()(const Ellipse& e) const {
            Ellipse out = e;
            out.center *= k;
            out.x_radius *= k;
            out.y_radius *= k;
            return out;
        }
        Curve operator()(const NurbsSpline& s) const {
            NurbsSpline out = s;
            for (Vec3& p : out.control_points) p *= k;
            return out;
        }
        Curve operator()(const HermiteSpline& h) const {
            HermiteSpline out;
            out.control_points.reserve(h.control_points.size());
            for (const Vec3& p : h.control_points) out.control_points.push_back(p * k);
            out.periodic = h.periodic;
            if (h.tangents) {
                std::vector<Vec3> tangents;
                tangents.reserve(h.tangents->size());
                for (const Vec3& t : *h.tangents) tangents.push_back(t * k);
                out.tangents = std::move(tangents);
            }
            return out;
        }
    };
    return std::visit(V{k}, c);
}

template <class T>
Curve to_curve(const T& v) {
    return Curve{v};
}

} // namespace

bool is_curve(const GeometricBase& g) {
    return !std::holds_alternative<LocationPoint>(g) && !std::holds_alternative<CurveLoop>(g) &&
           !std::holds_alternative<Profile>(g);
}

// --- Equality ----------------------------------------------------------------

namespace {

struct EqVisitor {
    bool operator()(const LocationPoint& a, const LocationPoint& b) const {
        return eq(a.point, b.point);
    }
    bool operator()(const Line& a, const Line& b) const {
        return eq(a.end1, b.end1) && eq(a.end2, b.end2);
    }
    bool operator()(const Arc& a, const Arc& b) const {
        return eq(a.center, b.center) && a.radius == b.radius && a.start_angle == b.start_angle &&
               a.end_angle == b.end_angle && eq(a.plane.origin, b.plane.origin) &&
               eq(a.plane.x_axis, b.plane.x_axis) && eq(a.plane.y_axis, b.plane.y_axis);
    }
    bool operator()(const CylindricalHelix& a, const CylindricalHelix& b) const {
        return eq(a.base, b.base) && a.radius == b.radius && eq(a.x_vector, b.x_vector) &&
               eq(a.z_vector, b.z_vector) && a.pitch == b.pitch &&
               a.start_angle == b.start_angle && a.end_angle == b.end_angle;
    }
    bool operator()(const Ellipse& a, const Ellipse& b) const {
        return eq(a.center, b.center) && a.x_radius == b.x_radius && a.y_radius == b.y_radius &&
               eq(a.x_axis, b.x_axis) && eq(a.y_axis, b.y_axis) &&
               a.start_param == b.start_param && a.end_param == b.end_param;
    }
    bool operator()(const NurbsSpline& a, const NurbsSpline& b) const {
        if (a.degree != b.degree || a.knots != b.knots || a.weights != b.weights ||
            a.control_points.size() != b.control_points.size())
            return false;
        for (std::size_t i = 0; i < a.control_points.size(); ++i)
            if (!eq(a.control_points[i], b.control_points[i])) return false;
        return true;
    }
    bool operator()(const HermiteSpline& a, const HermiteSpline& b) const {
        if (a.periodic != b.periodic || a.control_points.size() != b.control_points.size())
            return false;
        for (std::size_t i = 0; i < a.control_points.size(); ++i)
            if (!eq(a.control_points[i], b.control_points[i])) return false;
        if (a.tangents.has_value() != b.tangents.has_value()) return false;
        if (a.tangents) {
            if (a.tangents->size() != b.tangents->size()) return false;
            for (std::size_t i = 0; i < a.tangents->size(); ++i)
                if (!eq((*a.tangents)[i], (*b.tangents)[i])) return false;
        }
        return true;
    }
    bool operator()(const CurveLoop& a, const CurveLoop& b) const {
        if (a.curves.size() != b.curves.size()) return false;
        for (std::size_t i = 0; i < a.curves.size(); ++i)
            if (!exact_equals(a.curves[i], b.curves[i])) return false;
        return true;
    }
    bool operator()(const Profile& a, const Profile& b) const {
        if (a.loops.size() != b.loops.size()) return false;
        for (std::size_t i = 0; i < a.loops.size(); ++i)
            if (!(*this)(a.loops[i], b.loops[i])) return false;
        return true;
    }
    template <class A, class B>
    bool operator()(const A&, const B&) const {
        return false;
    }
};

} // namespace

bool exact_equals(const Curve& a, const Curve& b) {
    return std::visit(EqVisitor{}, a, b);
}

bool exact_equals(const GeometricBase& a, const GeometricBase& b) {
    return std::visit(EqVisitor{}, a, b);
}

// --- Evaluation --------------------------------------------------------------

Vec3 evaluate_curve(const Curve& c, double t) {
    check_t(t);
    struct V {
        double t;
        Vec3 operator()(const Line& l) const { return l.end1 + t * (l.end2 - l.end1); }
        Vec3 operator()(const Arc& a) const {
            const double th = a.start_angle + t * (a.end_angle - a.start_angle);
            return a.center +
                   a.radius * (std::cos(th) * a.plane.x_axis + std::sin(th) * a.plane.y_axis);
        }
        Vec3 operator()(const CylindricalHelix& h) const {
            const double th = h.start_angle + t * (h.end_angle - h.start_angle);
            const Vec3 y = helix_y_axis(h);
            return h.base + h.radius * (std::cos(th) * h.x_vector + std::sin(th) * y) +
                   h.pitch * (th / kTwoPi) * h.z_vector;
        }
        Vec3 operator()(const Ellipse& e) const {
            const double p = e.start_param + t * (e.end_param - e.start_param);
            return e.center + e.x_radius * std::cos(p) * e.x_axis +
                   e.y_radius * std::sin(p) * e.y_axis;
        }
        Vec3 operator()(const NurbsSpline& s) const {
            const auto [u0, u1] = nurbs_domain(s);
            return nurbs_point(s, u0 + t * (u1 - u0));
        }
        Vec3 operator()(const HermiteSpline& h) const {
            return hermite_point(hermite_data(h), t);
        }
    };
    return std::visit(V{t}, c);
}

Vec3 evaluate_curve(const GeometricBase& g, double t) {
    return std::visit(
        [&](const auto& v) -> Vec3 {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LocationPoint> || std::is_same_v<T, CurveLoop> ||
                          std::is_same_v<T, Profile>) {
                throw KindError("evaluate_curve: geometry is not a curve");
            } else {
                return evaluate_curve(to_curve(v), t);
            }
        },
        g);
}

Vec3 curve_derivative(const Curve& c, double t) {
    check_t(t);
    struct V {
        double t;
        Vec3 operator()(const Line& l) const { return l.end2 - l.end1; }
        Vec3 operator()(const Arc& a) const {
            const double sweep = a.end_angle - a.start_angle;
            const double th = a.start_angle + t * sweep;
            return a.radius * sweep *
                   (-std::sin(th) * a.plane.x_axis + std::cos(th) * a.plane.y_axis);
        }
        Vec3 operator()(const CylindricalHelix& h) const {
            const double sweep = h.end_angle - h.start_angle;
            const double th = h.start_angle + t * sweep;
            const Vec3 y = helix_y_axis(h);
            return sweep * (h.radius * (-std::sin(th) * h.x_vector + std::cos(th) * y) +
                            h.pitch / kTwoPi * h.z_vector);
        }
        Vec3 operator()(const Ellipse& e) const {
            const double sweep = e.end_param - e.start_param;
            const double p = e.start_param + t * sweep;
            return sweep * (-e.x_radius * std::sin(p) * e.x_axis +
                            e.y_radius * std::cos(p) * e.y_axis);
        }
        Vec3 operator()(const NurbsSpline& s) const {
            const auto [u0, u1] = nurbs_domain(s);
            return nurbs_derivative_u(s, u0 + t * (u1 - u0)) * (u1 - u0);
        }
        Vec3 operator()(const HermiteSpline& h) const {
            return hermite_derivative(hermite_data(h), t);
        }
    };
    return std::visit(V{t}, c);
}

// --- Lengths -----------------------------------------------------------------

double curve_length_between(const Curve& c, double t0, double t1) {
    if (!(t0 >= 0.0 && t1 <= 1.0 && t0 <= t1))
        throw DomainError("length interval must satisfy 0 <= t0 <= t1 <= 1");
    struct V {
        double t0, t1;
        const Curve& c;
        double operator()(const Line& l) const { return (l.end2 - l.end1).norm() * (t1 - t0); }
        double operator()(const Arc& a) const {
            return a.radius * std::abs(a.end_angle - a.start_angle) * (t1 - t0);
        }
        double operator()(const CylindricalHelix& h) const {
            const double k = h.pitch / kTwoPi;
            return std::abs(h.end_angle - h.start_angle) * std::sqrt(h.radius * h.radius + k * k) *
                   (t1 - t0);
        }
        double operator()(const Ellipse&) const { return quadrature_length(c, t0, t1); }
        double operator()(const NurbsSpline&) const { return quadrature_length(c, t0, t1); }
        double operator()(const HermiteSpline&) const { return quadrature_length(c, t0, t1); }
    };
    return std::visit(V{t0, t1, c}, c);
}

double curve_length(const Curve& c) {
    return curve_length_between(c, 0.0, 1.0);
}

double curve_length(const GeometricBase& g) {
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LocationPoint> || std::is_same_v<T, CurveLoop> ||
                          std::is_same_v<T, Profile>) {
                throw KindError("curve_length: geometry is not a curve");
            } else {
                return curve_length(to_curve(v));
            }
        },
        g);
}

// --- Loops -------------------------------------------------------------------

bool loop_is_closed(const CurveLoop& loop, double tol) {
    if (loop.curves.empty()) return false;
    for (std::size_t i = 0; i < loop.curves.size(); ++i) {
        const Curve& cur = loop.curves[i];
        const Curve& next = loop.curves[(i + 1) % loop.curves.size()];
        if ((evaluate_curve(cur, 1.0) - evaluate_curve(next, 0.0)).norm() > tol) return false;
    }
    return true;
}

Plane loop_plane(const CurveLoop& loop) {
    if (loop.curves.empty()) throw DegeneracyError("empty loop has no plane");
    const std::vector<Vec3> pts = loop_samples(loop);
    PlaneFrame frame = fit_plane(pts);
    check_planar(pts, frame.plane);
    return frame.plane;
}

double loop_area(const CurveLoop& loop) {
    const std::vector<Vec3> pts = loop_samples(loop);
    PlaneFrame frame = fit_plane(pts);
    check_planar(pts, frame.plane);
    return std::abs(loop_moments(loop, frame.plane, frame.scale).area);
}

Vec3 loop_centroid(const CurveLoop& loop) {
    const std::vector<Vec3> pts = loop_samples(loop);
    PlaneFrame frame = fit_plane(pts);
    check_planar(pts, frame.plane);
    AreaMoments m = loop_moments(loop, frame.plane, frame.scale);
    if (m.area == 0.0) throw DegeneracyError("loop encloses no area");
    const double cx = m.sx / (2.0 * m.area);
    const double cy = -m.sy / (2.0 * m.area);
    return frame.plane.origin + cx * frame.plane.x_axis + cy * frame.plane.y_axis;
}

double profile_area(const Profile& profile) {
    if (profile.loops.empty()) throw ValidationError("profile must have at least one loop");
    double area = loop_area(profile.loops.front());
    for (std::size_t i = 1; i < profile.loops.size(); ++i) area -= loop_area(profile.loops[i]);
    return area;
}

void validate_profile(const Profile& profile) {
    require(!profile.loops.empty(), "profile must have at least one loop");
    for (const CurveLoop& loop : profile.loops) validate_loop(loop);

    const Plane outer_plane = loop_plane(profile.loops.front());
    const Vec3 n = outer_plane.normal();

    std::vector<std::array<double, 2>> outer_poly;
    for (const Vec3& p : containment_samples(profile.loops.front())) {
        const Vec3 rel = p - outer_plane.origin;
        outer_poly.push_back({rel.dot(outer_plane.x_axis), rel.dot(outer_plane.y_axis)});
    }

    for (std::size_t i = 1; i < profile.loops.size(); ++i) {
        for (const Vec3& p : containment_samples(profile.loops[i])) {
            const Vec3 rel = p - outer_plane.origin;
            if (std::abs(rel.dot(n)) > kPlanarityTol)
                throw ValidationError("profile hole is not coplanar with the outer loop");
            if (!point_in_polygon(rel.dot(outer_plane.x_axis), rel.dot(outer_plane.y_axis),
                                  outer_poly))
                throw ValidationError("profile hole lies outside the outer loop");
        }
    }
    if (profile.loops.size() > 1)
        require(profile_area(profile) > 0.0, "profile holes exceed the outer area");
}

// --- Splines -----------------------------------------------------------------

double nurbs_basis(int degree, std::span<const double> knots, int i, double u) {
    if (degree < 0) throw DomainError("degree must be nonnegative");
    if (knots.size() < static_cast<std::size_t>(degree) + 2)
        throw DomainError("knot vector too short for degree");
    const int basis_count = static_cast<int>(knots.size()) - degree - 1;
    if (i < 0 || i >= basis_count) throw DomainError("basis index out of range");
    for (std::size_t k = 0; k + 1 < knots.size(); ++k)
        if (!(knots[k] <= knots[k + 1])) throw DomainError("knots must be nondecreasing");
    if (!(u >= knots.front() && u <= knots.back()))
        throw DomainError("parameter outside the knot range");
    return basis_raw(degree, knots, i, u);
}

std::vector<Vec3> default_hermite_tangents(std::span<const Vec3> points, bool periodic) {
    const std::size_t n = points.size();
    if (n < 2) throw DomainError("need at least 2 points for tangents");
    std::vector<Vec3> tans(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (periodic) {
            tans[i] = (points[(i + 1) % n] - points[(i + n - 1) % n]) / 2.0;
        } else if (i == 0) {
            tans[i] = points[1] - points[0];
        } else if (i == n - 1) {
            tans[i] = points[n - 1] - points[n - 2];
        } else {
            tans[i] = (points[i + 1] - points[i - 1]) / 2.0;
        }
    }
    return tans;
}

std::vector<Vec3> hermite_tangents(const HermiteSpline& h) {
    const std::size_t n = h.control_points.size();
    if (n < 2) throw DomainError("hermite spline needs at least 2 points");
    if (!h.tangents) return default_hermite_tangents(h.control_points, h.periodic);
    const std::vector<Vec3>& given = *h.tangents;
    if (given.size() == n) return given;
    if (given.size() == 2) {
        // End tangents explicit, interior ones default.
        std::vector<Vec3> tans = default_hermite_tangents(h.control_points, h.periodic);
        tans.front() = given.front();
        tans.back() = given.back();
        return tans;
    }
    throw ValidationError("tangent count must be 2 or match the point count");
}

// --- Scaling and validation ---------------------------------------------------

GeometricBase scale_geometry(const GeometricBase& g, double factor) {
    if (!(std::isfinite(factor) && factor > 0.0))
        throw DomainError("scale factor must be positive and finite");
    const double k = factor;
    auto scale_loop = [k](const CurveLoop& loop) {
        CurveLoop out;
        out.curves.reserve(loop.curves.size());
        for (const Curve& c : loop.curves) out.curves.push_back(scale_curve(c, k));
        return out;
    };
    return std::visit(
        [&](const auto& v) -> GeometricBase {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LocationPoint>) {
                return LocationPoint{Vec3(v.point * k)};
            } else if constexpr (std::is_same_v<T, CurveLoop>) {
                return scale_loop(v);
            } else if constexpr (std::is_same_v<T, Profile>) {
                Profile out;
                out.loops.reserve(v.loops.size());
                for (const CurveLoop& loop : v.loops) out.loops.push_back(scale_loop(loop));
                return out;
            } else {
                Curve scaled = scale_curve(Curve{v}, k);
                return std::visit([](auto&& c) -> GeometricBase { return c; }, scaled);
            }
        },
        g);
}

void validate_geometry(const GeometricBase& g) {
    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LocationPoint>) {
                require(finite(v.point), "location point must be finite");
            } else if constexpr (std::is_same_v<T, CurveLoop>) {
                validate_loop(v);
            } else if constexpr (std::is_same_v<T, Profile>) {
                validate_profile(v);
            } else {
                validate_curve(Curve{v});
            }
        },
        g);
}

} // namespace bimlog
