#pragma once

#include "sonode/config.hpp"
#include "sonode/diagram.hpp"
#include "sonode/events.hpp"
#include "sonode/spatial.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sonode {

enum class Phase {
    Idle,           // inert until lifted (e.g. the rest of a dissolved dome)
    Sweeping,
    DwellingOnNode,
    DwellingOnLink,
    Satellite,      // landed next to a dwelling pointer: tap or orbit not yet decided
    Circling,
    Radiating,
    DomeMember,
};

std::string_view to_string(Phase p);

struct Sample {
    TimeMs t = 0;
    Vec2 p;
    bool operator==(const Sample&) const = default;
};

struct PointerTrack {
    std::string id;
    Phase phase = Phase::Sweeping;

    TimeMs down_t = 0;
    Vec2 down_pos;
    Vec2 pos;
    double path_length = 0.0;
    std::vector<Sample> history; // recent samples for speed estimation

    // Sweeping and dwelling.
    HitResult current;
    TimeMs current_since = 0;
    HysteresisState hysteresis;
    std::vector<InteractionEvent> held; // sweep events withheld while the stroke may still be a flick
    bool holding = true;
    ElementRef dwell;
    int next_tap_index = 0;

    // Satellite, circling and radiating.
    std::string anchor;
    double landing_distance = 0.0;
    double start_angle = 0.0; // unwrapped
    double angle = 0.0;       // unwrapped
    HitResult own_hit;
    TimeMs own_hit_since = 0;
    std::string on_link;
    TimeMs on_link_since = 0;
    double on_link_min_along = 0.0;
    std::string radiate_link;
    std::string radiate_target;
    double start_along = 0.0;
    double max_along = 0.0;
    double arrive_along = 0.0;
    double last_progress = 0.0;
    bool corridor_lost = false;
    TimeMs lost_since = 0;

    std::string dome;

    bool operator==(const PointerTrack&) const = default;
};

struct DomeTrack {
    std::string id;
    std::vector<std::string> members;
    std::vector<Vec2> reference; // member positions at the last start/update
    bool operator==(const DomeTrack&) const = default;
};

struct PendingFlick {
    std::string pointer;
    TimeMs t = 0;
    bool operator==(const PendingFlick&) const = default;
};

// Full recognizer state. Ordered maps keep iteration, and therefore output, deterministic.
struct GestureState {
    std::map<std::string, PointerTrack> pointers;
    std::map<std::string, DomeTrack> domes;
    std::optional<TimeMs> last_t;
    std::optional<TimeMs> listening_until;
    std::vector<PendingFlick> pending_left;

    bool operator==(const GestureState&) const = default;
};

struct FrameResult {
    GestureState state;
    std::vector<InteractionEvent> events;
};

// Advances the recognizer by one frame. Events share the frame timestamp and are ordered by
// pointer id. Throws NonMonotoneTime if the frame is not later than the previous one.
FrameResult process_frame(GestureState state, const Diagram& d, const EngineConfig& cfg, const TouchFrame& frame);

// Requires a FlickDown within the listening window; throws NotListening otherwise.
FrameResult submit_speech_command(GestureState state, const EngineConfig& cfg, TimeMs t, std::string_view text);

enum class FlickDirection { Down, Right, Left, Up };

struct Stroke {
    TimeMs down_t = 0;
    TimeMs up_t = 0;
    Vec2 start;
    Vec2 end;
    double path_length = 0.0;
};

std::optional<FlickDirection> classify_flick(const Stroke& stroke, const EngineConfig& cfg);

// Average speed over at least `window_ms` of history (or all of it when shorter).
double estimate_speed(const std::vector<Sample>& history, double window_ms);

// Convenience wrapper owning the state.
class GestureRecognizer {
public:
    GestureRecognizer(const Diagram& d, const EngineConfig& cfg) : diagram_(&d), cfg_(cfg) {}

    std::vector<InteractionEvent> process(const TouchFrame& frame);
    InteractionEvent speech(TimeMs t, std::string_view text);
    const GestureState& state() const { return state_; }

private:
    const Diagram* diagram_;
    EngineConfig cfg_;
    GestureState state_;
};

} // namespace sonode
