#include "sonode/spatial.hpp"

#include "sonode/error.hpp"

#include <algorithm>
#include <limits>

namespace sonode {

double effective_radius(const Node& n, const HysteresisState& h, const SpatialParams& params)
{
    if (h.grown_node && *h.grown_node == n.id)
        return n.radius * params.growth_factor;
    return n.radius;
}

HitResult hit_test(const Diagram& d, Vec2 p, const HysteresisState& h, const SpatialParams& params)
{
    const Rect& b = d.bounds();
    p = {std::clamp(p.x, b.min.x, b.max.x), std::clamp(p.y, b.min.y, b.max.y)};

    HitResult best;
    double best_distance = std::numeric_limits<double>::infinity();
    for (const Node& n : d.nodes()) {
        const double dist = distance(n.position, p);
        if (dist <= effective_radius(n, h, params) && dist < best_distance) {
            best = {HitResult::Kind::Node, n.id, dist};
            best_distance = dist;
        }
    }
    if (best.is_node())
        return best;

    for (const Link& l : d.links()) {
        const Vec2 a = d.node(l.source).position;
        const Vec2 c = d.node(l.target).position;
        const double t = projection_parameter(a, c, p);
        if (t < 0.0 || t > 1.0)
            continue;
        const double dist = point_segment_distance(a, c, p);
        if (dist <= params.link_corridor && dist < best_distance) {
            best = {HitResult::Kind::Link, l.id, dist};
            best_distance = dist;
        }
    }
    return best;
}

HysteresisState grow_hysteresis(const HysteresisState& state, const HitResult& current, double finger_speed,
                                const SpatialParams& params)
{
    if (!current.is_node()) {
        // Left the (possibly grown) region.
        return {};
    }
    if (finger_speed < params.slow_threshold)
        return HysteresisState{current.id};
    // Speeding up, or having left the grown node, resets the enlargement.
    if (state.grown_node)
        return {};
    return state;
}

std::string_view to_string(Quadrant q)
{
    switch (q) {
    case Quadrant::TopLeft: return "TopLeft";
    case Quadrant::TopRight: return "TopRight";
    case Quadrant::BottomLeft: return "BottomLeft";
    case Quadrant::BottomRight: return "BottomRight";
    }
    return "?";
}

Quadrant quadrant_of(const Rect& bounds, Vec2 p)
{
    const double mid_x = (bounds.min.x + bounds.max.x) / 2.0;
    const double mid_y = (bounds.min.y + bounds.max.y) / 2.0;
    const bool left = p.x <= mid_x;
    const bool top = p.y <= mid_y;
    if (top)
        return left ? Quadrant::TopLeft : Quadrant::TopRight;
    return left ? Quadrant::BottomLeft : Quadrant::BottomRight;
}

QuadrantStats quadrant_stats(const Diagram& d)
{
    QuadrantStats stats{};
    for (const Node& n : d.nodes())
        ++stats[static_cast<std::size_t>(quadrant_of(d.bounds(), n.position))].nodes;
    for (const Link& l : d.links()) {
        const Vec2 mid = (d.node(l.source).position + d.node(l.target).position) * 0.5;
        ++stats[static_cast<std::size_t>(quadrant_of(d.bounds(), mid))].links;
    }
    return stats;
}

DomeRegion::DomeRegion(const std::array<Vec2, 5>& contacts) : contacts_(contacts)
{
    hull_ = convex_hull(contacts_);
    if (hull_.size() < 3 || polygon_area(hull_) < 1e-9)
        throw Error(Errc::DegenerateRegion, "dome contacts do not enclose an area");
}

bool DomeRegion::contains(Vec2 p) const { return point_in_convex_polygon(hull_, p); }

DomeContents elements_in_dome(const Diagram& d, const DomeRegion& region)
{
    DomeContents out;
    std::vector<bool> inside(d.nodes().size(), false);
    for (std::size_t i = 0; i < d.nodes().size(); ++i) {
        if (region.contains(d.nodes()[i].position)) {
            inside[i] = true;
            out.node_ids.push_back(d.nodes()[i].id);
        }
    }
    for (const Link& l : d.links())
        if (inside[d.node_index(l.source)] && inside[d.node_index(l.target)])
            out.link_ids.push_back(l.id);
    return out;
}

std::vector<LinkAngle> link_angles_at(const Diagram& d, std::string_view node_id)
{
    const Node& centre = d.node(node_id);
    std::vector<LinkAngle> out;
    for (std::size_t index : d.incident_links(node_id)) {
        const Link& l = d.links()[index];
        out.push_back({l.id, direction_angle(centre.position, d.node(l.other(node_id)).position)});
    }
    std::sort(out.begin(), out.end(), [](const LinkAngle& a, const LinkAngle& b) {
        return a.angle < b.angle || (a.angle == b.angle && a.link_id < b.link_id);
    });
    return out;
}

double distance_to_link(const Diagram& d, std::string_view link_id, Vec2 p)
{
    const Link& l = d.link(link_id);
    return point_segment_distance(d.node(l.source).position, d.node(l.target).position, p);
}

} // namespace sonode
