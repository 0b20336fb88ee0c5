#include "support/oracles.hpp"

#include "bimlog/errors.hpp"

#include <Eigen/Core>

#include <cmath>

namespace testsupport::oracle {

using bimlog::Curve;
using bimlog::CurveLoop;
using bimlog::NurbsSpline;
using bimlog::Vec3;

Vec3 deboor(const NurbsSpline& s, double u) {
    const int p = s.degree;
    const std::size_t n = s.control_points.size();
    const std::vector<double>& t = s.knots;

    // Span k with t[k] <= u < t[k+1]; the domain end folds into the last span.
    std::size_t k = static_cast<std::size_t>(p);
    while (k + 1 < n && u >= t[k + 1]) ++k;

    std::vector<Eigen::Vector4d> d(static_cast<std::size_t>(p) + 1);
    for (int j = 0; j <= p; ++j) {
        const std::size_t i = static_cast<std::size_t>(j) + k - static_cast<std::size_t>(p);
        const double w = s.weights[i];
        d[static_cast<std::size_t>(j)] << s.control_points[i] * w, w;
    }
    for (int r = 1; r <= p; ++r) {
        for (int j = p; j >= r; --j) {
            const std::size_t lo = static_cast<std::size_t>(j) + k - static_cast<std::size_t>(p);
            const std::size_t hi = static_cast<std::size_t>(j) + 1 + k - static_cast<std::size_t>(r);
            const double alpha = (u - t[lo]) / (t[hi] - t[lo]);
            d[static_cast<std::size_t>(j)] = (1.0 - alpha) * d[static_cast<std::size_t>(j) - 1] +
                                             alpha * d[static_cast<std::size_t>(j)];
        }
    }
    const Eigen::Vector4d& h = d[static_cast<std::size_t>(p)];
    return h.head<3>() / h[3];
}

std::vector<double> all_basis(int degree, const std::vector<double>& knots, double u,
                              std::size_t count) {
    const std::size_t m = knots.size();
    std::vector<double> N(m - 1, 0.0);
    const double u_end = knots[m - 1 - static_cast<std::size_t>(degree)];
    if (u == u_end) {
        // Domain end folds into the last nonempty span below it.
        std::size_t seed = 0;
        for (std::size_t i = 0; i + 1 < m; ++i)
            if (knots[i] < u_end) seed = i;
        N[seed] = 1.0;
    } else {
        for (std::size_t i = 0; i + 1 < m; ++i)
            if (knots[i] <= u && u < knots[i + 1]) N[i] = 1.0;
    }
    for (int d = 1; d <= degree; ++d) {
        for (std::size_t i = 0; i + static_cast<std::size_t>(d) + 1 < m; ++i) {
            double left = 0.0;
            double right = 0.0;
            const double den_l = knots[i + static_cast<std::size_t>(d)] - knots[i];
            if (den_l > 0.0) left = (u - knots[i]) / den_l * N[i];
            const double den_r =
                knots[i + static_cast<std::size_t>(d) + 1] - knots[i + 1];
            if (den_r > 0.0)
                right = (knots[i + static_cast<std::size_t>(d) + 1] - u) / den_r * N[i + 1];
            N[i] = left + right;
        }
    }
    N.resize(count);
    return N;
}

double chord_length(const std::function<Vec3(double)>& point, int n) {
    double length = 0.0;
    Vec3 prev = point(0.0);
    for (int i = 1; i <= n; ++i) {
        const Vec3 next = point(static_cast<double>(i) / n);
        length += (next - prev).norm();
        prev = next;
    }
    return length;
}

double extrapolated_length(const std::function<Vec3(double)>& point, int n) {
    const double coarse = chord_length(point, n);
    const double fine = chord_length(point, 2 * n);
    return (4.0 * fine - coarse) / 3.0;
}

double shoelace_area_xy(const std::vector<Vec3>& pts) {
    double twice = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec3& a = pts[i];
        const Vec3& b = pts[(i + 1) % pts.size()];
        twice += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * twice;
}

Vec3 shoelace_centroid_xy(const std::vector<Vec3>& pts) {
    double twice = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec3& a = pts[i];
        const Vec3& b = pts[(i + 1) % pts.size()];
        const double cross = a.x() * b.y() - b.x() * a.y();
        twice += cross;
        cx += (a.x() + b.x()) * cross;
        cy += (a.y() + b.y()) * cross;
    }
    const double area = 0.5 * twice;
    return Vec3(cx / (6.0 * area), cy / (6.0 * area), pts.front().z());
}

std::vector<Vec3> loop_polyline(const CurveLoop& loop, int per_curve) {
    std::vector<Vec3> pts;
    pts.reserve(loop.curves.size() * static_cast<std::size_t>(per_curve));
    for (const Curve& c : loop.curves)
        for (int i = 0; i < per_curve; ++i)
            pts.push_back(bimlog::evaluate_curve(c, static_cast<double>(i) / per_curve));
    return pts;
}

} // namespace testsupport::oracle
