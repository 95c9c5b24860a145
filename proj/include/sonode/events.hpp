#pragma once

#include "sonode/geometry.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sonode {

using TimeMs = std::int64_t;

struct Touch {
    std::string pointer;
    Vec2 position;
    bool operator==(const Touch&) const = default;
};

// The engine's only interactive input: every pointer currently on the surface.
struct TouchFrame {
    TimeMs t = 0;
    std::vector<Touch> touches;
    bool operator==(const TouchFrame&) const = default;
};

struct ElementRef {
    enum class Kind { None, Node, Link };

    Kind kind = Kind::None;
    std::string id;

    static ElementRef node(std::string id) { return {Kind::Node, std::move(id)}; }
    static ElementRef link(std::string id) { return {Kind::Link, std::move(id)}; }
    bool is_node() const { return kind == Kind::Node; }
    bool is_link() const { return kind == Kind::Link; }
    explicit operator bool() const { return kind != Kind::None; }
    bool operator==(const ElementRef&) const = default;
};

struct SpeechCommand {
    enum class Kind { Search, Filter, ClearFilter, Unrecognized };

    Kind kind = Kind::Unrecognized;
    std::string text; // what the user said, echoed back
    std::string query;
    std::string attribute;
    std::string value;
    bool operator==(const SpeechCommand&) const = default;
};

// Turns already-recognized speech into a command. Speech capture itself is external.
SpeechCommand parse_speech_command(std::string_view text);

enum class EventKind {
    NodeSwept,
    LinkSwept,
    NodeDwellStart,
    NodeDwellEnd,
    LinkDwellStart,
    LinkDwellEnd,
    DomeStart,
    DomeUpdate,
    DomeEnd,
    DetailTap,
    CircleStart,
    CircleProgress,
    LinkCrossed,
    CircleEnd,
    RadiateStart,
    RadiateProgress,
    CorridorLost,
    CorridorRegained,
    RadiateArrived,
    RadiateEnd,
    FlickDown,
    FlickRight,
    TwoFingerFlickLeft,
    SpeechCommand,
    SearchResults,
    FilterApplied,
    FilterCleared,
    Guidance,
    GuidanceArrived,
};

std::string_view to_string(EventKind kind);

// Semantic outcome of the gesture layer. Which fields are meaningful depends on `kind`;
// the log format writes only those.
struct InteractionEvent {
    TimeMs t = 0;
    EventKind kind = EventKind::NodeSwept;
    std::string pointer;
    ElementRef element;         // swept, dwelt, tapped or reached element; anchor node while circling
    std::string anchor_pointer; // dwelling pointer a tap, circle or radiate is bound to
    std::string link;           // crossed or followed link
    int tap_index = 0;
    double speed = 0.0;    // sweeps, normalized units per second
    double angle = 0.0;    // circle position around the anchor
    double progress = 0.0; // radiate
    std::size_t count = 0; // search and filter results
    std::vector<Vec2> contacts;     // dome
    std::vector<std::string> words; // guidance prompt
    double interval_ms = 0.0;       // guidance pacing
    SpeechCommand command;

    bool operator==(const InteractionEvent&) const = default;
};

} // namespace sonode
