#pragma once

#include "sonode/config.hpp"
#include "sonode/diagram.hpp"
#include "sonode/events.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sonode {

struct SearchResult {
    ElementRef element;
    Vec2 position;          // node centre or link midpoint
    double distance = 0.0;  // from the finger at search time
    bool operator==(const SearchResult&) const = default;
};

struct SearchState {
    std::string query;
    std::vector<SearchResult> results; // nearest first
    std::optional<std::size_t> active_target; // index into results
    bool operator==(const SearchState&) const = default;
};

// Case-insensitive substring match over node labels, link labels and attribute values.
SearchState search(const Diagram& d, std::string_view query, Vec2 finger);

// What the engine says after a search.
std::string search_summary(const SearchState& s);

struct FilterState {
    bool active = false;
    std::string attribute;
    std::string value;
    std::set<std::string> passing;       // node ids
    std::set<std::string> passing_links; // links touching at least one passing node
    bool operator==(const FilterState&) const = default;

    // True when the element should be rendered faint with noise on top.
    bool deemphasized(const ElementRef& e) const;
};

FilterState apply_filter(const Diagram& d, std::string_view attribute, std::string_view value);
FilterState clear_filter(const FilterState& state);

struct GuidancePrompt {
    std::vector<std::string> words; // vertical word first
    double repeat_interval_ms = 0.0;
    bool arrived = false;
    bool operator==(const GuidancePrompt&) const = default;
};

GuidancePrompt guidance_step(Vec2 target, double target_radius, Vec2 finger, const EngineConfig& cfg);

// Guidance toward the active search target; throws NoActiveTarget without one.
GuidancePrompt guidance_step(const SearchState& s, const Diagram& d, Vec2 finger, const EngineConfig& cfg);

} // namespace sonode
