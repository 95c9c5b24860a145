#include "sonode/query.hpp"

#include "sonode/error.hpp"

#include <algorithm>
#include <cctype>

namespace sonode {

namespace {

std::string fold(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool contains_folded(std::string_view haystack, const std::string& folded_needle)
{
    return fold(haystack).find(folded_needle) != std::string::npos;
}

bool attributes_match(const Attributes& attributes, const std::string& needle)
{
    return std::any_of(attributes.begin(), attributes.end(),
                       [&](const auto& kv) { return contains_folded(kv.second, needle); });
}

} // namespace

SearchState search(const Diagram& d, std::string_view query, Vec2 finger)
{
    SearchState s;
    s.query = std::string(query);
    const std::string needle = fold(query);
    if (needle.empty())
        return s;

    for (const Node& n : d.nodes())
        if (contains_folded(n.label, needle) || attributes_match(n.attributes, needle))
            s.results.push_back({ElementRef::node(n.id), n.position, distance(n.position, finger)});
    for (const Link& l : d.links()) {
        if (contains_folded(l.label, needle) || attributes_match(l.attributes, needle)) {
            const Vec2 mid = (d.node(l.source).position + d.node(l.target).position) * 0.5;
            s.results.push_back({ElementRef::link(l.id), mid, distance(mid, finger)});
        }
    }
    // Stable: equidistant results keep nodes-then-links document order.
    std::stable_sort(s.results.begin(), s.results.end(),
                     [](const SearchResult& a, const SearchResult& b) { return a.distance < b.distance; });
    if (!s.results.empty())
        s.active_target = 0;
    return s;
}

std::string search_summary(const SearchState& s)
{
    if (s.results.empty())
        return "Nothing found";
    return "Found " + std::to_string(s.results.size()) + " result(s)";
}

bool FilterState::deemphasized(const ElementRef& e) const
{
    if (!active)
        return false;
    if (e.is_node())
        return !passing.contains(e.id);
    if (e.is_link())
        return !passing_links.contains(e.id);
    return false;
}

FilterState apply_filter(const Diagram& d, std::string_view attribute, std::string_view value)
{
    FilterState f;
    f.active = true;
    f.attribute = std::string(attribute);
    f.value = std::string(value);
    const std::string key = fold(attribute);
    const std::string wanted = fold(value);
    for (const Node& n : d.nodes()) {
        const bool match = std::any_of(n.attributes.begin(), n.attributes.end(), [&](const auto& kv) {
            return fold(kv.first) == key && fold(kv.second) == wanted;
        });
        if (match)
            f.passing.insert(n.id);
    }
    for (const Link& l : d.links())
        if (f.passing.contains(l.source) || f.passing.contains(l.target))
            f.passing_links.insert(l.id);
    return f;
}

FilterState clear_filter(const FilterState&) { return FilterState{}; }

GuidancePrompt guidance_step(Vec2 target, double target_radius, Vec2 finger, const EngineConfig& cfg)
{
    GuidancePrompt prompt;
    const double dx = target.x - finger.x;
    const double dy = target.y - finger.y;
    const double dist = std::hypot(dx, dy);

    const double closeness = 1.0 - std::min(1.0, dist / cfg.pace_dist_ref);
    prompt.repeat_interval_ms = cfg.pace_min_ms + (cfg.pace_max_ms - cfg.pace_min_ms) * closeness;

    if (dist <= target_radius) {
        prompt.arrived = true;
        return prompt;
    }
    bool vertical = std::abs(dy) > cfg.arrive_eps;
    bool horizontal = std::abs(dx) > cfg.arrive_eps;
    if (!vertical && !horizontal) {
        // Both axes aligned within tolerance but still outside the target: nudge along the larger.
        vertical = std::abs(dy) >= std::abs(dx);
        horizontal = !vertical;
    }
    if (vertical)
        prompt.words.emplace_back(dy > 0.0 ? "down" : "up");
    if (horizontal)
        prompt.words.emplace_back(dx > 0.0 ? "right" : "left");
    return prompt;
}

GuidancePrompt guidance_step(const SearchState& s, const Diagram& d, Vec2 finger, const EngineConfig& cfg)
{
    if (!s.active_target || *s.active_target >= s.results.size())
        throw Error(Errc::NoActiveTarget, "no search target to guide toward");
    const SearchResult& target = s.results[*s.active_target];
    const double radius = target.element.is_node() ? d.node(target.element.id).radius : cfg.spatial.link_corridor;
    return guidance_step(target.position, radius, finger, cfg);
}

} // namespace sonode
