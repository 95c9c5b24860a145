#pragma once

#include "sonode/geometry.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sonode {

using Attributes = std::vector<std::pair<std::string, std::string>>;

struct Node {
    std::string id;
    std::string label;
    Vec2 position;
    double radius = 0.0;
    Attributes attributes;
};

struct Link {
    std::string id;
    std::string source;
    std::string target;
    std::string label;
    Attributes attributes;

    bool touches(std::string_view node_id) const { return source == node_id || target == node_id; }
    const std::string& other(std::string_view node_id) const { return source == node_id ? target : source; }
};

struct Rect {
    Vec2 min{0.0, 0.0};
    Vec2 max{1.0, 1.0};
    bool operator==(const Rect&) const = default;
};

// Equal-temperament mapping parameters for node and link pitch.
struct PitchMap {
    double node_base_hz = 220.0;
    int node_span_semitones = 12;
    double link_base_hz = 330.0;
    int link_span_semitones = 12;
    bool operator==(const PitchMap&) const = default;
};

// Immutable node-link model. Construction validates every structural invariant
// (unique ids, no self-loops, no parallel links, positive radii, positions in bounds).
class Diagram {
public:
    Diagram(std::string title, std::string alt_text, std::vector<Node> nodes, std::vector<Link> links,
            Rect bounds = {});

    const std::string& title() const { return title_; }
    const std::string& alt_text() const { return alt_text_; }
    const Rect& bounds() const { return bounds_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Link>& links() const { return links_; }

    // Set when the diagram exceeds the comfortable density bound.
    const std::optional<std::string>& warning() const { return warning_; }
    void set_warning(std::string message) { warning_ = std::move(message); }

    const Node& node(std::string_view id) const;
    const Link& link(std::string_view id) const;
    const Node* find_node(std::string_view id) const;
    const Link* find_link(std::string_view id) const;
    std::size_t node_index(std::string_view id) const;
    std::size_t link_index(std::string_view id) const;

    // Indices into links() of every link touching the node.
    const std::vector<std::size_t>& incident_links(std::string_view node_id) const;

    std::size_t max_degree() const { return max_degree_; }

private:
    std::string title_;
    std::string alt_text_;
    std::vector<Node> nodes_;
    std::vector<Link> links_;
    Rect bounds_;
    std::optional<std::string> warning_;
    std::unordered_map<std::string, std::size_t> node_lookup_;
    std::unordered_map<std::string, std::size_t> link_lookup_;
    std::vector<std::vector<std::size_t>> incidence_;
    std::size_t max_degree_ = 0;
};

// Structural equality; positions and radii compared within `tolerance`.
bool equivalent(const Diagram& a, const Diagram& b, double tolerance = 1e-9);

std::size_t node_degree(const Diagram& d, std::string_view node_id);
double node_pitch(const Diagram& d, std::string_view node_id, const PitchMap& pm);
double link_length(const Diagram& d, std::string_view link_id);
double link_pitch(const Diagram& d, std::string_view link_id, const PitchMap& pm);

} // namespace sonode
