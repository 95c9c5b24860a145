#include "sonode/diagram.hpp"

#include "sonode/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace sonode {

namespace {

void check_attribute_keys(const Attributes& attributes, const std::string& owner)
{
    std::set<std::string_view> seen;
    for (const auto& [key, value] : attributes) {
        if (!seen.insert(key).second)
            throw Error(Errc::SchemaViolation, "duplicate attribute '" + key + "' on " + owner);
    }
}

} // namespace

Diagram::Diagram(std::string title, std::string alt_text, std::vector<Node> nodes, std::vector<Link> links,
                 Rect bounds)
    : title_(std::move(title)),
      alt_text_(std::move(alt_text)),
      nodes_(std::move(nodes)),
      links_(std::move(links)),
      bounds_(bounds)
{
    if (nodes_.empty())
        throw Error(Errc::EmptyDiagram, "diagram has no nodes");

    constexpr double slack = 1e-9;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        if (!node_lookup_.emplace(n.id, i).second)
            throw Error(Errc::SchemaViolation, "duplicate node id '" + n.id + "'");
        if (!(n.radius > 0.0))
            throw Error(Errc::SchemaViolation, "node '" + n.id + "' has non-positive radius");
        if (!std::isfinite(n.position.x) || !std::isfinite(n.position.y) ||
            n.position.x < bounds_.min.x - slack || n.position.x > bounds_.max.x + slack ||
            n.position.y < bounds_.min.y - slack || n.position.y > bounds_.max.y + slack)
            throw Error(Errc::SchemaViolation, "node '" + n.id + "' lies outside the diagram bounds");
        check_attribute_keys(n.attributes, "node '" + n.id + "'");
    }

    incidence_.resize(nodes_.size());
    std::set<std::pair<std::string, std::string>> pairs;
    for (std::size_t i = 0; i < links_.size(); ++i) {
        const Link& l = links_[i];
        if (!link_lookup_.emplace(l.id, i).second)
            throw Error(Errc::SchemaViolation, "duplicate link id '" + l.id + "'");
        if (l.source == l.target)
            throw Error(Errc::UnsupportedFeature, "self-loop on node '" + l.source + "'");
        const auto s = node_lookup_.find(l.source);
        const auto t = node_lookup_.find(l.target);
        if (s == node_lookup_.end() || t == node_lookup_.end())
            throw Error(Errc::SchemaViolation, "link '" + l.id + "' references an unknown node");
        if (!pairs.emplace(std::min(l.source, l.target), std::max(l.source, l.target)).second)
            throw Error(Errc::UnsupportedFeature, "parallel link between '" + l.source + "' and '" + l.target + "'");
        check_attribute_keys(l.attributes, "link '" + l.id + "'");
        incidence_[s->second].push_back(i);
        incidence_[t->second].push_back(i);
    }
    for (const auto& inc : incidence_)
        max_degree_ = std::max(max_degree_, inc.size());
}

const Node* Diagram::find_node(std::string_view id) const
{
    const auto it = node_lookup_.find(std::string(id));
    return it == node_lookup_.end() ? nullptr : &nodes_[it->second];
}

const Link* Diagram::find_link(std::string_view id) const
{
    const auto it = link_lookup_.find(std::string(id));
    return it == link_lookup_.end() ? nullptr : &links_[it->second];
}

std::size_t Diagram::node_index(std::string_view id) const
{
    const auto it = node_lookup_.find(std::string(id));
    if (it == node_lookup_.end())
        throw Error(Errc::UnknownNode, std::string(id));
    return it->second;
}

std::size_t Diagram::link_index(std::string_view id) const
{
    const auto it = link_lookup_.find(std::string(id));
    if (it == link_lookup_.end())
        throw Error(Errc::UnknownLink, std::string(id));
    return it->second;
}

const Node& Diagram::node(std::string_view id) const { return nodes_[node_index(id)]; }
const Link& Diagram::link(std::string_view id) const { return links_[link_index(id)]; }

const std::vector<std::size_t>& Diagram::incident_links(std::string_view node_id) const
{
    return incidence_[node_index(node_id)];
}

bool equivalent(const Diagram& a, const Diagram& b, double tolerance)
{
    if (a.title() != b.title() || a.alt_text() != b.alt_text() || !(a.bounds() == b.bounds()))
        return false;
    if (a.nodes().size() != b.nodes().size() || a.links().size() != b.links().size())
        return false;
    for (std::size_t i = 0; i < a.nodes().size(); ++i) {
        const Node& x = a.nodes()[i];
        const Node& y = b.nodes()[i];
        if (x.id != y.id || x.label != y.label || x.attributes != y.attributes)
            return false;
        if (std::abs(x.position.x - y.position.x) > tolerance || std::abs(x.position.y - y.position.y) > tolerance ||
            std::abs(x.radius - y.radius) > tolerance)
            return false;
    }
    for (std::size_t i = 0; i < a.links().size(); ++i) {
        const Link& x = a.links()[i];
        const Link& y = b.links()[i];
        if (x.id != y.id || x.source != y.source || x.target != y.target || x.label != y.label ||
            x.attributes != y.attributes)
            return false;
    }
    return true;
}

std::size_t node_degree(const Diagram& d, std::string_view node_id)
{
    return d.incident_links(node_id).size();
}

double node_pitch(const Diagram& d, std::string_view node_id, const PitchMap& pm)
{
    const std::size_t degree = node_degree(d, node_id);
    if (d.max_degree() == 0)
        return pm.node_base_hz;
    const double semitones =
        static_cast<double>(pm.node_span_semitones) * static_cast<double>(degree) / static_cast<double>(d.max_degree());
    return pm.node_base_hz * std::exp2(semitones / 12.0);
}

double link_length(const Diagram& d, std::string_view link_id)
{
    const Link& l = d.link(link_id);
    return distance(d.node(l.source).position, d.node(l.target).position);
}

double link_pitch(const Diagram& d, std::string_view link_id, const PitchMap& pm)
{
    const double length = link_length(d, link_id);
    double shortest = std::numeric_limits<double>::infinity();
    double longest = 0.0;
    for (const Link& l : d.links()) {
        const double len = link_length(d, l.id);
        shortest = std::min(shortest, len);
        longest = std::max(longest, len);
    }
    if (!(longest > shortest))
        return pm.link_base_hz;
    // Shorter strings ring higher: the longest link sits at the base.
    const double semitones = static_cast<double>(pm.link_span_semitones) * (longest - length) / (longest - shortest);
    return pm.link_base_hz * std::exp2(semitones / 12.0);
}

} // namespace sonode
