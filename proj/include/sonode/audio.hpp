#pragma once

#include "sonode/config.hpp"
#include "sonode/diagram.hpp"
#include "sonode/events.hpp"
#include "sonode/query.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sonode {

enum class AudioKind {
    HornNote,
    HornStop,
    StringPluck,
    StringStop,
    Bell,
    Tone150,
    Fanfare,
    NoiseOverlay,
    Speech,
    Silence,
};

std::string_view to_string(AudioKind kind);

inline constexpr double proximity_tone_hz = 150.0;

// Abstract sound instruction; synthesis is the renderer's business.
struct AudioEvent {
    TimeMs t = 0;
    AudioKind kind = AudioKind::Silence;
    std::string voice; // pointer or sequencer that owns the sound
    ElementRef element;
    double freq = 0.0;
    std::optional<double> duration_ms; // empty: sustained until the matching stop
    double volume = 1.0;
    bool on = true;                    // Tone150 and NoiseOverlay
    std::string text;
    bool interruptible = false;

    bool sustained() const { return !duration_ms.has_value(); }
    bool operator==(const AudioEvent&) const = default;
};

double proximity_volume(double gap, double scale);

// Sweep note length: shorter for faster fingers.
double note_duration_ms(double speed, const EngineConfig& cfg);

struct DomeItem {
    ElementRef element;
    double onset_ms = 0.0;
    double duration_ms = 0.0;
    bool operator==(const DomeItem&) const = default;
};

struct DomeSchedule {
    std::vector<DomeItem> playlist;
    double cycle_duration_ms = 0.0;
    bool operator==(const DomeSchedule&) const = default;
};

// One cycle of the dome texture. Nodes are visited depth-first from the smallest id, each node
// followed by the not-yet-played links that lead back to visited nodes or on to its children,
// so rings alternate node/link while hubs burst into links. Disconnected parts follow in id order.
// An empty dome yields an empty playlist (only the separating bell sounds).
DomeSchedule dome_schedule(const std::vector<std::string>& node_ids, const std::vector<std::string>& link_ids,
                           const Diagram& d, const EngineConfig& cfg);

// Tap 0 reads the label, tap k the k-th attribute, wrapping back to the label.
std::string detail_text(const Diagram& d, const ElementRef& element, int tap_index);
AudioEvent speech_for_detail(const Diagram& d, const ElementRef& element, int tap_index, TimeMs t);

// Spoken and legend responses for flicks, commands and search/filter outcomes.
std::vector<AudioEvent> meta_speech(const InteractionEvent& e, const Diagram& d, const EngineConfig& cfg);

// Each mapping's sound followed by its spoken name, one entry per second from `t`.
std::vector<AudioEvent> audio_legend(TimeMs t, const EngineConfig& cfg);

// Stateful translation of interaction events into audio, including the dome sequencer whose
// clock is driven purely by event and frame timestamps.
class AudioRenderer {
public:
    AudioRenderer(const Diagram& d, const EngineConfig& cfg) : d_(&d), cfg_(cfg) {}

    std::vector<AudioEvent> render(const std::vector<InteractionEvent>& events, const FilterState& filter);

    // Emits dome sequencer output due up to and including `t`.
    std::vector<AudioEvent> advance_to(TimeMs t, const FilterState& filter);

private:
    struct Voice {
        bool horn = false;
        bool string = false;
        bool noise = false;
        bool tone = false;
        double tone_volume = -1.0;
    };

    struct ActiveDome {
        DomeSchedule current;
        std::optional<DomeSchedule> next;
        double cycle_start_ms = 0.0;
        std::size_t next_item = 0;
    };

    void handle(const InteractionEvent& e, const FilterState& filter, std::vector<AudioEvent>& out);
    void element_note(std::vector<AudioEvent>& out, TimeMs t, const std::string& voice, AudioKind kind,
                      const ElementRef& element, double freq, std::optional<double> duration,
                      const FilterState& filter);
    void stop(std::vector<AudioEvent>& out, TimeMs t, const std::string& voice, bool horn);
    void set_tone(std::vector<AudioEvent>& out, TimeMs t, const std::string& voice, double volume);
    void tone_off(std::vector<AudioEvent>& out, TimeMs t, const std::string& voice);
    double pitch_of(const ElementRef& e) const;
    DomeSchedule schedule_for(const std::vector<Vec2>& contacts) const;

    const Diagram* d_;
    EngineConfig cfg_;
    std::map<std::string, Voice> voices_;
    std::map<std::string, ActiveDome> domes_;
};

// One-shot rendering of a complete event list; the dome clock runs to the last event.
std::vector<AudioEvent> render(const std::vector<InteractionEvent>& events, const Diagram& d,
                               const EngineConfig& cfg, const FilterState& filter);

} // namespace sonode
