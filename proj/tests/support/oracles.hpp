#pragma once

#include "sonode/diagram.hpp"
#include "sonode/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

// Deliberately naive reference computations the engine is checked against.
namespace sonode::testing {

struct OracleHit {
    char kind = '-'; // 'n', 'l' or '-'
    std::string id;
};

// Every node by squared distance, then every link by perpendicular distance; first strict minimum wins.
inline OracleHit brute_force_hit(const Diagram& d, Vec2 p, double corridor, const std::string& grown = "",
                                 double growth = 1.0)
{
    p.x = std::min(std::max(p.x, 0.0), 1.0);
    p.y = std::min(std::max(p.y, 0.0), 1.0);
    OracleHit hit;
    double best = INFINITY;
    for (const Node& n : d.nodes()) {
        const double dx = p.x - n.position.x, dy = p.y - n.position.y;
        const double r = n.id == grown ? n.radius * growth : n.radius;
        const double d2 = dx * dx + dy * dy;
        if (d2 <= r * r && d2 < best) {
            best = d2;
            hit = {'n', n.id};
        }
    }
    if (hit.kind == 'n')
        return hit;
    best = INFINITY;
    for (const Link& l : d.links()) {
        const Vec2 a = d.node(l.source).position, b = d.node(l.target).position;
        const double ex = b.x - a.x, ey = b.y - a.y;
        const double len2 = ex * ex + ey * ey;
        const double t = ((p.x - a.x) * ex + (p.y - a.y) * ey) / len2;
        if (t < 0.0 || t > 1.0)
            continue;
        const double dist = std::abs(ex * (p.y - a.y) - ey * (p.x - a.x)) / std::sqrt(len2);
        if (dist <= corridor && dist < best) {
            best = dist;
            hit = {'l', l.id};
        }
    }
    return hit;
}

inline OracleHit as_oracle(const HitResult& h)
{
    if (h.is_node())
        return {'n', h.id};
    if (h.is_link())
        return {'l', h.id};
    return {};
}

inline bool operator==(const OracleHit& a, const OracleHit& b) { return a.kind == b.kind && a.id == b.id; }

} // namespace sonode::testing
