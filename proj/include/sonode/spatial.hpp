#pragma once

#include "sonode/diagram.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace sonode {

struct SpatialParams {
    double link_corridor = 0.02;  // half-width of a link's hit corridor
    double growth_factor = 1.6;   // hysteresis enlargement of a dwelt node
    double slow_threshold = 0.05; // normalized units per second
    bool operator==(const SpatialParams&) const = default;
};

struct HitResult {
    enum class Kind { None, Node, Link };

    Kind kind = Kind::None;
    std::string id;
    double distance = 0.0;

    bool is_node() const { return kind == Kind::Node; }
    bool is_link() const { return kind == Kind::Link; }
    bool same_element(const HitResult& other) const { return kind == other.kind && id == other.id; }
    bool operator==(const HitResult&) const = default;
};

// Which node, if any, currently has an enlarged hit radius for one pointer.
struct HysteresisState {
    std::optional<std::string> grown_node;
    bool operator==(const HysteresisState&) const = default;
};

double effective_radius(const Node& n, const HysteresisState& h, const SpatialParams& params);

// Nodes win over links; among one kind the nearest wins, ties by document order.
HitResult hit_test(const Diagram& d, Vec2 p, const HysteresisState& h, const SpatialParams& params);

HysteresisState grow_hysteresis(const HysteresisState& state, const HitResult& current, double finger_speed,
                                const SpatialParams& params);

enum class Quadrant { TopLeft = 0, TopRight = 1, BottomLeft = 2, BottomRight = 3 };

std::string_view to_string(Quadrant q);

// Midlines belong to the left and top halves.
Quadrant quadrant_of(const Rect& bounds, Vec2 p);

struct QuadrantCount {
    std::size_t nodes = 0;
    std::size_t links = 0;
};

using QuadrantStats = std::array<QuadrantCount, 4>;

QuadrantStats quadrant_stats(const Diagram& d);

class DomeRegion {
public:
    // Throws DegenerateRegion unless the five contacts span a proper area.
    explicit DomeRegion(const std::array<Vec2, 5>& contacts);

    const std::array<Vec2, 5>& contacts() const { return contacts_; }
    const std::vector<Vec2>& hull() const { return hull_; }
    bool contains(Vec2 p) const;

private:
    std::array<Vec2, 5> contacts_;
    std::vector<Vec2> hull_;
};

struct DomeContents {
    std::vector<std::string> node_ids;
    std::vector<std::string> link_ids;
    bool operator==(const DomeContents&) const = default;
};

// Node ids and link ids in diagram order.
DomeContents elements_in_dome(const Diagram& d, const DomeRegion& region);

struct LinkAngle {
    std::string link_id;
    double angle = 0.0;
};

// Outgoing direction of every incident link, ascending in [0, 2pi).
std::vector<LinkAngle> link_angles_at(const Diagram& d, std::string_view node_id);

double distance_to_link(const Diagram& d, std::string_view link_id, Vec2 p);

} // namespace sonode
