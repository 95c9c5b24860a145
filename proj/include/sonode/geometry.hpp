#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace sonode {

// Normalized screen coordinates: origin top-left, y grows downward.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
    friend Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }

// Wraps any angle into [0, 2pi).
double wrap_angle(double radians);

// Direction from `from` to `to` in [0, 2pi); 0 is +x, pi/2 is screen-down.
double direction_angle(Vec2 from, Vec2 to);

// Segment parameter of the projection of p onto [a, b], unclamped.
double projection_parameter(Vec2 a, Vec2 b, Vec2 p);

double point_segment_distance(Vec2 a, Vec2 b, Vec2 p);

// Convex hull (counter-clockwise in math orientation, collinear points dropped).
std::vector<Vec2> convex_hull(std::span<const Vec2> points);

double polygon_area(std::span<const Vec2> polygon);

// Boundary counts as inside.
bool point_in_convex_polygon(std::span<const Vec2> hull, Vec2 p);

} // namespace sonode
