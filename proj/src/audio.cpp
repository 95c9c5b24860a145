#include "sonode/audio.hpp"

#include "sonode/error.hpp"
#include "sonode/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace sonode {

std::string_view to_string(AudioKind kind)
{
    switch (kind) {
    case AudioKind::HornNote: return "HornNote";
    case AudioKind::HornStop: return "HornStop";
    case AudioKind::StringPluck: return "StringPluck";
    case AudioKind::StringStop: return "StringStop";
    case AudioKind::Bell: return "Bell";
    case AudioKind::Tone150: return "Tone150";
    case AudioKind::Fanfare: return "Fanfare";
    case AudioKind::NoiseOverlay: return "NoiseOverlay";
    case AudioKind::Speech: return "Speech";
    case AudioKind::Silence: return "Silence";
    }
    return "?";
}

double proximity_volume(double gap, double scale)
{
    if (!(scale > 0.0))
        return gap <= 0.0 ? 1.0 : 0.0;
    return std::max(0.0, 1.0 - std::max(0.0, gap) / scale);
}

double note_duration_ms(double speed, const EngineConfig& cfg)
{
    const double raw = cfg.base_note_ms / (1.0 + std::max(0.0, speed) / cfg.speed_ref);
    return std::clamp(raw, cfg.min_note_ms, cfg.base_note_ms);
}

DomeSchedule dome_schedule(const std::vector<std::string>& node_ids, const std::vector<std::string>& link_ids,
                           const Diagram& d, const EngineConfig& cfg)
{
    DomeSchedule schedule;
    schedule.cycle_duration_ms = cfg.cycle_duration_ms;

    std::vector<std::string> nodes = node_ids;
    std::sort(nodes.begin(), nodes.end());
    const std::set<std::string> in_dome(nodes.begin(), nodes.end());

    // Neighbours inside the dome, ascending by node id.
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> adjacent;
    for (const std::string& id : link_ids) {
        const Link& l = d.link(id);
        if (!in_dome.contains(l.source) || !in_dome.contains(l.target))
            continue;
        adjacent[l.source].emplace_back(l.target, l.id);
        adjacent[l.target].emplace_back(l.source, l.id);
    }
    for (auto& [node, list] : adjacent)
        std::sort(list.begin(), list.end());

    // First pass: depth-first preorder and tree parents.
    std::vector<std::string> order;
    std::map<std::string, std::string> parent;
    std::set<std::string> seen;
    for (const std::string& root : nodes) {
        if (seen.contains(root))
            continue;
        std::vector<std::string> stack{root};
        while (!stack.empty()) {
            const std::string v = stack.back();
            stack.pop_back();
            if (!seen.insert(v).second)
                continue;
            order.push_back(v);
            const auto& list = adjacent[v];
            for (auto it = list.rbegin(); it != list.rend(); ++it) {
                if (!seen.contains(it->first)) {
                    parent[it->first] = v; // last writer before the visit is the true DFS parent
                    stack.push_back(it->first);
                }
            }
        }
    }

    // Second pass: each node, then its links back to earlier nodes or down to its children.
    std::map<std::string, std::size_t> rank;
    for (std::size_t i = 0; i < order.size(); ++i)
        rank[order[i]] = i;
    std::set<std::string> played;
    std::vector<ElementRef> items;
    for (const std::string& v : order) {
        items.push_back(ElementRef::node(v));
        for (const auto& [u, link] : adjacent[v]) {
            if (played.contains(link))
                continue;
            const bool earlier = rank[u] < rank[v];
            const auto p = parent.find(u);
            const bool child = p != parent.end() && p->second == v;
            if (earlier || child) {
                items.push_back(ElementRef::link(link));
                played.insert(link);
            }
        }
    }

    if (items.empty())
        return schedule;
    const double gap = cfg.cycle_duration_ms / static_cast<double>(items.size());
    for (std::size_t i = 0; i < items.size(); ++i)
        schedule.playlist.push_back({items[i], gap * static_cast<double>(i), gap});
    return schedule;
}

std::string detail_text(const Diagram& d, const ElementRef& element, int tap_index)
{
    const std::string* label = nullptr;
    const Attributes* attributes = nullptr;
    if (element.is_node()) {
        const Node& n = d.node(element.id);
        label = &n.label;
        attributes = &n.attributes;
    } else if (element.is_link()) {
        const Link& l = d.link(element.id);
        label = &l.label;
        attributes = &l.attributes;
    } else {
        return {};
    }
    const int slots = static_cast<int>(attributes->size()) + 1;
    const int k = ((tap_index % slots) + slots) % slots;
    if (k == 0)
        return *label;
    const auto& [key, value] = (*attributes)[static_cast<std::size_t>(k - 1)];
    return key + ": " + value;
}

AudioEvent speech_for_detail(const Diagram& d, const ElementRef& element, int tap_index, TimeMs t)
{
    AudioEvent e;
    e.t = t;
    e.kind = AudioKind::Speech;
    e.element = element;
    e.text = detail_text(d, element, tap_index);
    e.interruptible = true;
    return e;
}

namespace {

AudioEvent speech(TimeMs t, std::string text, bool interruptible = false, std::string voice = "speech")
{
    AudioEvent e;
    e.t = t;
    e.kind = AudioKind::Speech;
    e.voice = std::move(voice);
    e.text = std::move(text);
    e.interruptible = interruptible;
    return e;
}

AudioEvent sound(TimeMs t, AudioKind kind, std::string voice, double freq, std::optional<double> duration)
{
    AudioEvent e;
    e.t = t;
    e.kind = kind;
    e.voice = std::move(voice);
    e.freq = freq;
    e.duration_ms = duration;
    return e;
}

std::string join(const std::vector<std::string>& words, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i)
            out += sep;
        out += words[i];
    }
    return out;
}

} // namespace

std::vector<AudioEvent> audio_legend(TimeMs t, const EngineConfig& cfg)
{
    constexpr TimeMs step = 1000;
    const std::string voice = "legend";
    const double note = cfg.base_note_ms;
    const double top = 1.0 / 12.0;
    std::vector<AudioEvent> out;
    TimeMs at = t;
    auto entry = [&](AudioEvent sound_event, const std::string& name) {
        sound_event.t = at;
        out.push_back(sound_event);
        out.push_back(speech(at, name, false, voice));
        at += step;
    };
    entry(sound(at, AudioKind::HornNote, voice, cfg.pitch.node_base_hz, note), "node");
    entry(sound(at, AudioKind::HornNote, voice, cfg.pitch.node_base_hz * std::exp2(cfg.pitch.node_span_semitones * top),
                note),
          "higher pitch, more connections");
    entry(sound(at, AudioKind::StringPluck, voice, cfg.pitch.link_base_hz, note), "link");
    entry(sound(at, AudioKind::StringPluck, voice,
                cfg.pitch.link_base_hz * std::exp2(cfg.pitch.link_span_semitones * top), note),
          "higher pitch, shorter link");

    AudioEvent tone = sound(at, AudioKind::Tone150, voice, proximity_tone_hz, std::nullopt);
    out.push_back(tone);
    out.push_back(speech(at, "proximity tone", false, voice));
    tone.t = at + static_cast<TimeMs>(std::llround(note));
    tone.on = false;
    tone.volume = 0.0;
    out.push_back(tone);
    at += step;

    entry(sound(at, AudioKind::Bell, voice, 0.0, note), "end of dome cycle");
    entry(sound(at, AudioKind::Fanfare, voice, cfg.pitch.node_base_hz, 2.0 * note), "arrived");
    AudioEvent noise = sound(at, AudioKind::NoiseOverlay, voice, 0.0, note);
    noise.volume = cfg.filtered_volume;
    entry(noise, "filtered out");
    return out;
}

std::vector<AudioEvent> meta_speech(const InteractionEvent& e, const Diagram& d, const EngineConfig& cfg)
{
    std::vector<AudioEvent> out;
    switch (e.kind) {
    case EventKind::FlickDown: out.push_back(speech(e.t, "listening")); break;
    case EventKind::FlickRight:
        out.push_back(speech(e.t, d.alt_text().empty() ? "no description available" : d.alt_text()));
        break;
    case EventKind::TwoFingerFlickLeft: out = audio_legend(e.t, cfg); break;
    case EventKind::SpeechCommand:
        out.push_back(speech(e.t, e.command.text));
        if (e.command.kind == SpeechCommand::Kind::Unrecognized)
            out.push_back(speech(e.t, "command not recognized"));
        break;
    case EventKind::SearchResults:
        out.push_back(speech(e.t, e.count == 0 ? "Nothing found" : "Found " + std::to_string(e.count) + " result(s)"));
        break;
    case EventKind::FilterApplied:
        out.push_back(speech(e.t, "filtering, " + std::to_string(e.count) + " matching node(s)"));
        break;
    case EventKind::FilterCleared: out.push_back(speech(e.t, "filter off")); break;
    case EventKind::Guidance: out.push_back(speech(e.t, join(e.words, ", "), true, e.pointer)); break;
    default: break;
    }
    return out;
}

double AudioRenderer::pitch_of(const ElementRef& e) const
{
    if (e.is_node())
        return node_pitch(*d_, e.id, cfg_.pitch);
    if (e.is_link())
        return link_pitch(*d_, e.id, cfg_.pitch);
    return 0.0;
}

void AudioRenderer::element_note(std::vector<AudioEvent>& out, TimeMs t, const std::string& voice, AudioKind kind,
                                 const ElementRef& element, double freq, std::optional<double> duration,
                                 const FilterState& filter)
{
    AudioEvent note = sound(t, kind, voice, freq, duration);
    note.element = element;
    if (filter.deemphasized(element)) {
        AudioEvent noise = sound(t, AudioKind::NoiseOverlay, voice, 0.0, duration);
        noise.element = element;
        noise.volume = cfg_.filtered_volume;
        out.push_back(noise);
        note.volume = cfg_.filtered_volume;
        if (!duration)
            voices_[voice].noise = true;
    }
    out.push_back(std::move(note));
}

void AudioRenderer::stop(std::vector<AudioEvent>& out, TimeMs t, const std::string& voice, bool horn)
{
    Voice& v = voices_[voice];
    bool& open = horn ? v.horn : v.string;
    if (!open)
        return;
    open = false;
    out.push_back(sound(t, horn ? AudioKind::HornStop : AudioKind::StringStop, voice, 0.0, std::nullopt));
    if (v.noise && !v.horn && !v.string) {
        AudioEvent off = sound(t, AudioKind::NoiseOverlay, voice, 0.0, std::nullopt);
        off.on = false;
        off.volume = 0.0;
        out.push_back(off);
        v.noise = false;
    }
}

void AudioRenderer::set_tone(std::vector<AudioEvent>& out, TimeMs t, const std::string& voice, double volume)
{
    Voice& v = voices_[voice];
    if (v.tone && std::abs(v.tone_volume - volume) < 1e-9)
        return;
    v.tone = true;
    v.tone_volume = volume;
    AudioEvent e = sound(t, AudioKind::Tone150, voice, proximity_tone_hz, std::nullopt);
    e.volume = volume;
    out.push_back(e);
}

void AudioRenderer::tone_off(std::vector<AudioEvent>& out, TimeMs t, const std::string& voice)
{
    Voice& v = voices_[voice];
    if (!v.tone)
        return;
    v.tone = false;
    v.tone_volume = -1.0;
    AudioEvent e = sound(t, AudioKind::Tone150, voice, proximity_tone_hz, std::nullopt);
    e.on = false;
    e.volume = 0.0;
    out.push_back(e);
}

DomeSchedule AudioRenderer::schedule_for(const std::vector<Vec2>& contacts) const
{
    std::array<Vec2, 5> pts{};
    std::copy_n(contacts.begin(), std::min<std::size_t>(5, contacts.size()), pts.begin());
    const DomeContents inside = elements_in_dome(*d_, DomeRegion(pts));
    return dome_schedule(inside.node_ids, inside.link_ids, *d_, cfg_);
}

void AudioRenderer::handle(const InteractionEvent& e, const FilterState& filter, std::vector<AudioEvent>& out)
{
    const double note = cfg_.base_note_ms;
    switch (e.kind) {
    case EventKind::NodeSwept:
        element_note(out, e.t, e.pointer, AudioKind::HornNote, e.element, pitch_of(e.element),
                     note_duration_ms(e.speed, cfg_), filter);
        break;
    case EventKind::LinkSwept:
        element_note(out, e.t, e.pointer, AudioKind::StringPluck, e.element, pitch_of(e.element),
                     note_duration_ms(e.speed, cfg_), filter);
        break;
    case EventKind::NodeDwellStart:
        stop(out, e.t, e.pointer, true);
        element_note(out, e.t, e.pointer, AudioKind::HornNote, e.element, pitch_of(e.element), std::nullopt, filter);
        voices_[e.pointer].horn = true;
        break;
    case EventKind::LinkDwellStart:
        stop(out, e.t, e.pointer, false);
        element_note(out, e.t, e.pointer, AudioKind::StringPluck, e.element, pitch_of(e.element), std::nullopt,
                     filter);
        voices_[e.pointer].string = true;
        break;
    case EventKind::NodeDwellEnd: stop(out, e.t, e.pointer, true); break;
    case EventKind::LinkDwellEnd: stop(out, e.t, e.pointer, false); break;
    case EventKind::DetailTap: {
        AudioEvent s = speech_for_detail(*d_, e.element, e.tap_index, e.t);
        s.voice = e.anchor_pointer;
        if (filter.deemphasized(e.element)) {
            AudioEvent noise = sound(e.t, AudioKind::NoiseOverlay, s.voice, 0.0, note);
            noise.element = e.element;
            noise.volume = cfg_.filtered_volume;
            out.push_back(noise);
            s.volume = cfg_.filtered_volume;
        }
        out.push_back(std::move(s));
        break;
    }
    case EventKind::CircleStart:
        // The orbit replaces the anchor's dwell sound with the proximity tone.
        stop(out, e.t, e.anchor_pointer, true);
        break;
    case EventKind::CircleProgress: {
        double gap = std::numeric_limits<double>::infinity();
        for (const LinkAngle& la : link_angles_at(*d_, e.element.id)) {
            double diff = std::abs(e.angle - la.angle);
            gap = std::min(gap, std::min(diff, 2.0 * std::numbers::pi - diff));
        }
        set_tone(out, e.t, e.pointer, std::isfinite(gap) ? proximity_volume(gap, cfg_.circle_gap_scale) : 0.0);
        break;
    }
    case EventKind::LinkCrossed: {
        const ElementRef link = ElementRef::link(e.link);
        element_note(out, e.t, e.pointer, AudioKind::StringPluck, link, pitch_of(link), note, filter);
        break;
    }
    case EventKind::CircleEnd:
        stop(out, e.t, e.pointer, false);
        tone_off(out, e.t, e.pointer);
        break;
    case EventKind::RadiateStart:
    case EventKind::CorridorRegained: {
        const ElementRef link = ElementRef::link(e.link);
        stop(out, e.t, e.pointer, false);
        element_note(out, e.t, e.pointer, AudioKind::StringPluck, link, pitch_of(link), std::nullopt, filter);
        voices_[e.pointer].string = true;
        break;
    }
    case EventKind::RadiateProgress:
        set_tone(out, e.t, e.pointer, proximity_volume((1.0 - e.progress) * link_length(*d_, e.link), link_length(*d_, e.link)));
        break;
    case EventKind::CorridorLost:
    case EventKind::RadiateEnd: stop(out, e.t, e.pointer, false); break;
    case EventKind::RadiateArrived:
        stop(out, e.t, e.pointer, false);
        tone_off(out, e.t, e.pointer);
        element_note(out, e.t, e.pointer, AudioKind::Fanfare, e.element, pitch_of(e.element), 2.0 * note, filter);
        break;
    case EventKind::GuidanceArrived:
        element_note(out, e.t, e.pointer, AudioKind::Fanfare, e.element, pitch_of(e.element), 2.0 * note, filter);
        break;
    case EventKind::DomeStart: {
        ActiveDome dome;
        dome.current = schedule_for(e.contacts);
        dome.cycle_start_ms = static_cast<double>(e.t);
        domes_[e.pointer] = std::move(dome);
        break;
    }
    case EventKind::DomeUpdate:
        // Takes effect after the next bell.
        if (auto it = domes_.find(e.pointer); it != domes_.end())
            it->second.next = schedule_for(e.contacts);
        break;
    case EventKind::DomeEnd:
        if (domes_.erase(e.pointer) > 0)
            out.push_back(sound(e.t, AudioKind::Silence, e.pointer, 0.0, std::nullopt));
        break;
    case EventKind::FlickDown:
    case EventKind::FlickRight:
    case EventKind::TwoFingerFlickLeft:
    case EventKind::SpeechCommand:
    case EventKind::SearchResults:
    case EventKind::FilterApplied:
    case EventKind::FilterCleared:
    case EventKind::Guidance: {
        auto spoken = meta_speech(e, *d_, cfg_);
        out.insert(out.end(), spoken.begin(), spoken.end());
        break;
    }
    }
}

std::vector<AudioEvent> AudioRenderer::advance_to(TimeMs t, const FilterState& filter)
{
    std::vector<AudioEvent> out;
    const double now = static_cast<double>(t);
    for (auto& [id, dome] : domes_) {
        while (true) {
            const auto& playlist = dome.current.playlist;
            if (dome.next_item < playlist.size()) {
                const DomeItem& item = playlist[dome.next_item];
                const double at = dome.cycle_start_ms + item.onset_ms;
                if (at > now)
                    break;
                const TimeMs when = std::llround(at);
                const bool node = item.element.is_node();
                element_note(out, when, id, node ? AudioKind::HornNote : AudioKind::StringPluck, item.element,
                             pitch_of(item.element), item.duration_ms, filter);
                ++dome.next_item;
                continue;
            }
            const double boundary = dome.cycle_start_ms + dome.current.cycle_duration_ms;
            if (boundary > now)
                break;
            out.push_back(sound(std::llround(boundary), AudioKind::Bell, id, 0.0, cfg_.base_note_ms));
            if (dome.next) {
                dome.current = std::move(*dome.next);
                dome.next.reset();
            }
            dome.cycle_start_ms = boundary;
            dome.next_item = 0;
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const AudioEvent& a, const AudioEvent& b) { return a.t < b.t; });
    return out;
}

std::vector<AudioEvent> AudioRenderer::render(const std::vector<InteractionEvent>& events, const FilterState& filter)
{
    std::vector<AudioEvent> out;
    for (const InteractionEvent& e : events) {
        auto due = advance_to(e.t, filter);
        out.insert(out.end(), due.begin(), due.end());
        handle(e, filter, out);
    }
    return out;
}

std::vector<AudioEvent> render(const std::vector<InteractionEvent>& events, const Diagram& d,
                               const EngineConfig& cfg, const FilterState& filter)
{
    AudioRenderer renderer(d, cfg);
    auto out = renderer.render(events, filter);
    if (!events.empty()) {
        auto tail = renderer.advance_to(events.back().t, filter);
        out.insert(out.end(), tail.begin(), tail.end());
    }
    return out;
}

} // namespace sonode
