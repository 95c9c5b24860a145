#include "sonode/geometry.hpp"

#include <algorithm>

namespace sonode {

double wrap_angle(double radians)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double a = std::fmod(radians, two_pi);
    if (a < 0.0)
        a += two_pi;
    if (a >= two_pi)
        a = 0.0;
    return a;
}

double direction_angle(Vec2 from, Vec2 to)
{
    const Vec2 d = to - from;
    return wrap_angle(std::atan2(d.y, d.x));
}

double projection_parameter(Vec2 a, Vec2 b, Vec2 p)
{
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0)
        return 0.0;
    return dot(p - a, ab) / len2;
}

double point_segment_distance(Vec2 a, Vec2 b, Vec2 p)
{
    const double t = std::clamp(projection_parameter(a, b, p), 0.0, 1.0);
    return distance(a + (b - a) * t, p);
}

std::vector<Vec2> convex_hull(std::span<const Vec2> points)
{
    std::vector<Vec2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3)
        return pts;

    // Andrew's monotone chain.
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Vec2& p : pts) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0)
            --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double polygon_area(std::span<const Vec2> polygon)
{
    double twice = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i)
        twice += cross(polygon[i], polygon[(i + 1) % polygon.size()]);
    return std::abs(twice) / 2.0;
}

bool point_in_convex_polygon(std::span<const Vec2> hull, Vec2 p)
{
    if (hull.size() < 3)
        return false;
    constexpr double eps = 1e-12;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Vec2 a = hull[i];
        const Vec2 b = hull[(i + 1) % hull.size()];
        if (cross(b - a, p - a) < -eps)
            return false;
    }
    return true;
}

} // namespace sonode
