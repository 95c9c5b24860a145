#include "sonode/gesture.hpp"

#include "sonode/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace sonode {

std::string_view to_string(Phase p)
{
    switch (p) {
    case Phase::Idle: return "Idle";
    case Phase::Sweeping: return "Sweeping";
    case Phase::DwellingOnNode: return "DwellingOnNode";
    case Phase::DwellingOnLink: return "DwellingOnLink";
    case Phase::Satellite: return "Satellite";
    case Phase::Circling: return "Circling";
    case Phase::Radiating: return "Radiating";
    case Phase::DomeMember: return "DomeMember";
    }
    return "?";
}

double estimate_speed(const std::vector<Sample>& history, double window_ms)
{
    if (history.size() < 2)
        return 0.0;
    const Sample& now = history.back();
    const Sample* ref = &history.front();
    for (const Sample& s : history) {
        if (static_cast<double>(now.t - s.t) >= window_ms)
            ref = &s;
        else
            break;
    }
    const double dt = static_cast<double>(now.t - ref->t) / 1000.0;
    return dt > 0.0 ? distance(ref->p, now.p) / dt : 0.0;
}

std::optional<FlickDirection> classify_flick(const Stroke& stroke, const EngineConfig& cfg)
{
    if (static_cast<double>(stroke.up_t - stroke.down_t) > cfg.flick_ms || stroke.path_length < cfg.flick_dist)
        return std::nullopt;
    const Vec2 delta = stroke.end - stroke.start;
    if (norm(delta) == 0.0)
        return std::nullopt;
    const double cone = cfg.flick_cone_deg * std::numbers::pi / 180.0;
    const double a = direction_angle(stroke.start, stroke.end);
    auto near = [&](double axis) {
        double diff = std::abs(a - axis);
        diff = std::min(diff, 2.0 * std::numbers::pi - diff);
        return diff <= cone;
    };
    if (near(0.0))
        return FlickDirection::Right;
    if (near(std::numbers::pi / 2.0))
        return FlickDirection::Down;
    if (near(std::numbers::pi))
        return FlickDirection::Left;
    if (near(3.0 * std::numbers::pi / 2.0))
        return FlickDirection::Up;
    return std::nullopt;
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Signed difference b - a folded into (-pi, pi].
double angle_delta(double a, double b)
{
    double d = std::fmod(b - a, two_pi);
    if (d <= -std::numbers::pi)
        d += two_pi;
    else if (d > std::numbers::pi)
        d -= two_pi;
    return d;
}

// Number of values theta + 2*pi*k lying in the swept interval: (a, b] going forward,
// [b, a) going backward.
int crossings(double theta, double a, double b)
{
    if (b > a)
        return static_cast<int>(std::floor((b - theta) / two_pi) - std::floor((a - theta) / two_pi));
    if (b < a)
        return static_cast<int>(std::ceil((a - theta) / two_pi) - std::ceil((b - theta) / two_pi));
    return 0;
}

bool is_dwelling(Phase p) { return p == Phase::DwellingOnNode || p == Phase::DwellingOnLink; }

ElementRef as_element(const HitResult& h)
{
    switch (h.kind) {
    case HitResult::Kind::Node: return ElementRef::node(h.id);
    case HitResult::Kind::Link: return ElementRef::link(h.id);
    case HitResult::Kind::None: break;
    }
    return {};
}

class FrameStep {
public:
    FrameStep(GestureState& state, const Diagram& d, const EngineConfig& cfg, TimeMs t)
        : state_(state), d_(d), cfg_(cfg), t_(t)
    {
    }

    std::vector<InteractionEvent> run(const TouchFrame& frame)
    {
        std::map<std::string, Vec2> present;
        for (const Touch& touch : frame.touches) {
            if (!present.emplace(touch.pointer, touch.position).second)
                throw Error(Errc::SchemaError, "pointer '" + touch.pointer + "' appears twice in one frame");
        }

        std::erase_if(state_.pending_left,
                      [&](const PendingFlick& f) { return static_cast<double>(t_ - f.t) > cfg_.flick_pair_ms; });

        std::vector<std::string> lifted;
        for (const auto& [id, track] : state_.pointers)
            if (!present.contains(id))
                lifted.push_back(id);
        for (const std::string& id : lifted)
            lift(id);

        bool landed = false;
        std::vector<std::string> moved;
        for (const auto& [id, pos] : present) {
            if (state_.pointers.contains(id)) {
                moved.push_back(id);
            } else {
                land(id, pos);
                landed = true;
            }
        }
        if (landed)
            detect_dome();

        for (const std::string& id : moved) {
            // A pointer may have been re-phased by an earlier pointer in this frame.
            if (auto it = state_.pointers.find(id); it != state_.pointers.end())
                move(it->second, present.at(id));
        }
        update_domes();

        for (auto& [id, track] : state_.pointers)
            if (track.holding && static_cast<double>(t_ - track.down_t) > cfg_.flick_ms)
                release_held(track);

        std::stable_sort(events_.begin(), events_.end(),
                         [](const InteractionEvent& a, const InteractionEvent& b) { return a.pointer < b.pointer; });
        return std::move(events_);
    }

private:
    InteractionEvent& emit(EventKind kind, const std::string& pointer)
    {
        InteractionEvent e;
        e.t = t_;
        e.kind = kind;
        e.pointer = pointer;
        events_.push_back(std::move(e));
        return events_.back();
    }

    void release_held(PointerTrack& track)
    {
        for (InteractionEvent& e : track.held) {
            e.t = t_;
            events_.push_back(std::move(e));
        }
        track.held.clear();
        track.holding = false;
    }

    void sweep_entry(PointerTrack& track, const HitResult& hit, double speed)
    {
        InteractionEvent e;
        e.t = t_;
        e.kind = hit.is_node() ? EventKind::NodeSwept : EventKind::LinkSwept;
        e.pointer = track.id;
        e.element = as_element(hit);
        e.speed = speed;
        if (track.holding)
            track.held.push_back(std::move(e));
        else
            events_.push_back(std::move(e));
    }

    // ----- landing ------------------------------------------------------------------------

    void land(const std::string& id, Vec2 pos)
    {
        PointerTrack track;
        track.id = id;
        track.down_t = t_;
        track.down_pos = pos;
        track.pos = pos;
        track.history.push_back({t_, pos});

        if (const PointerTrack* anchor = nearest_anchor(pos)) {
            track.phase = Phase::Satellite;
            track.anchor = anchor->id;
            track.landing_distance = distance(pos, anchor->pos);
            track.holding = false;
            if (anchor->dwell.is_node()) {
                const double a = direction_angle(d_.node(anchor->dwell.id).position, pos);
                track.start_angle = track.angle = a;
            }
            track.own_hit = hit_test(d_, pos, {}, cfg_.spatial);
            track.own_hit_since = t_;
        } else {
            track.phase = Phase::Sweeping;
            track.current = hit_test(d_, pos, {}, cfg_.spatial);
            track.current_since = t_;
            if (track.current.kind != HitResult::Kind::None)
                sweep_entry(track, track.current, 0.0);
        }
        state_.pointers.emplace(id, std::move(track));
    }

    // The nearest dwelling pointer that a new touch at `pos` can bind to: within tap reach of the
    // dwelling finger, or inside the orbit annulus around a dwelt node.
    const PointerTrack* nearest_anchor(Vec2 pos) const
    {
        const PointerTrack* best = nullptr;
        double best_distance = 0.0;
        for (const auto& [id, track] : state_.pointers) {
            if (!is_dwelling(track.phase))
                continue;
            const double to_finger = distance(pos, track.pos);
            bool bindable = to_finger <= cfg_.tap_radius;
            if (track.dwell.is_node()) {
                const double to_centre = distance(pos, d_.node(track.dwell.id).position);
                bindable = bindable || (to_centre >= cfg_.orbit_min && to_centre <= cfg_.orbit_max);
            }
            if (bindable && (best == nullptr || to_finger < best_distance)) {
                best = &track;
                best_distance = to_finger;
            }
        }
        return best;
    }

    // ----- domes --------------------------------------------------------------------------

    void detect_dome()
    {
        std::vector<PointerTrack*> candidates;
        for (auto& [id, track] : state_.pointers)
            if (track.phase == Phase::Sweeping && static_cast<double>(t_ - track.down_t) <= cfg_.dome_window_ms)
                candidates.push_back(&track);
        if (candidates.size() != 5)
            return;

        Vec2 centroid;
        for (const PointerTrack* c : candidates)
            centroid = centroid + c->pos * 0.2;
        for (const PointerTrack* c : candidates)
            if (distance(c->pos, centroid) > cfg_.dome_span)
                return;

        std::array<Vec2, 5> contacts;
        for (std::size_t i = 0; i < 5; ++i)
            contacts[i] = candidates[i]->pos;
        try {
            DomeRegion region(contacts);
        } catch (const Error&) {
            return;
        }

        DomeTrack dome;
        dome.id = candidates.front()->id;
        for (PointerTrack* c : candidates) {
            // Dome recognition wins over the five sweeps it started as.
            c->held.clear();
            c->holding = false;
            c->phase = Phase::DomeMember;
            c->dome = dome.id;
            dome.members.push_back(c->id);
            dome.reference.push_back(c->pos);
        }
        InteractionEvent& e = emit(EventKind::DomeStart, dome.id);
        e.contacts.assign(contacts.begin(), contacts.end());
        state_.domes.emplace(dome.id, std::move(dome));
    }

    void update_domes()
    {
        for (auto& [id, dome] : state_.domes) {
            bool drifted = false;
            std::array<Vec2, 5> contacts;
            for (std::size_t i = 0; i < dome.members.size(); ++i) {
                contacts[i] = state_.pointers.at(dome.members[i]).pos;
                drifted = drifted || distance(contacts[i], dome.reference[i]) > cfg_.dome_move_eps;
            }
            if (!drifted)
                continue;
            try {
                DomeRegion region(contacts);
            } catch (const Error&) {
                continue;
            }
            dome.reference.assign(contacts.begin(), contacts.end());
            InteractionEvent& e = emit(EventKind::DomeUpdate, dome.id);
            e.contacts = dome.reference;
        }
    }

    void end_dome(std::string dome_id) // by value: callers pass a member's own dome field
    {
        const auto it = state_.domes.find(dome_id);
        if (it == state_.domes.end())
            return;
        for (const std::string& member : it->second.members) {
            if (auto p = state_.pointers.find(member); p != state_.pointers.end()) {
                p->second.phase = Phase::Idle;
                p->second.dome.clear();
            }
        }
        emit(EventKind::DomeEnd, dome_id);
        state_.domes.erase(it);
    }

    // ----- lifting ------------------------------------------------------------------------

    void lift(const std::string& id)
    {
        PointerTrack& track = state_.pointers.at(id);
        switch (track.phase) {
        case Phase::Sweeping: lift_sweeping(track); break;
        case Phase::DwellingOnNode:
        case Phase::DwellingOnLink: end_dwell(track); break;
        case Phase::Satellite: lift_satellite(track); break;
        case Phase::Circling: emit_circle_end(track); break;
        case Phase::Radiating:
            emit(EventKind::RadiateEnd, track.id).link = track.radiate_link;
            emit_circle_end(track);
            break;
        case Phase::DomeMember: end_dome(track.dome); break;
        case Phase::Idle: break;
        }
        state_.pointers.erase(id);
    }

    void lift_sweeping(PointerTrack& track)
    {
        const Stroke stroke{track.down_t, track.history.back().t, track.down_pos, track.pos, track.path_length};
        const auto flick = classify_flick(stroke, cfg_);
        if (!flick) {
            release_held(track);
            return;
        }
        track.held.clear();
        switch (*flick) {
        case FlickDirection::Down:
            emit(EventKind::FlickDown, track.id);
            state_.listening_until = t_ + static_cast<TimeMs>(cfg_.listen_window_ms);
            break;
        case FlickDirection::Right: emit(EventKind::FlickRight, track.id); break;
        case FlickDirection::Left: {
            const auto partner = std::find_if(state_.pending_left.begin(), state_.pending_left.end(),
                                              [&](const PendingFlick& f) { return f.pointer != track.id; });
            if (partner != state_.pending_left.end()) {
                emit(EventKind::TwoFingerFlickLeft, std::min(partner->pointer, track.id));
                state_.pending_left.erase(partner);
            } else {
                state_.pending_left.push_back({track.id, t_});
            }
            break;
        }
        case FlickDirection::Up: break;
        }
    }

    void lift_satellite(PointerTrack& track)
    {
        const auto anchor = state_.pointers.find(track.anchor);
        if (anchor == state_.pointers.end() || !is_dwelling(anchor->second.phase))
            return;
        const TimeMs up = track.history.back().t;
        if (static_cast<double>(up - track.down_t) > cfg_.tap_ms || track.landing_distance > cfg_.tap_radius)
            return;
        InteractionEvent& e = emit(EventKind::DetailTap, track.id);
        e.anchor_pointer = anchor->second.id;
        e.element = anchor->second.dwell;
        e.tap_index = anchor->second.next_tap_index++;
    }

    // ----- dwelling -----------------------------------------------------------------------

    void start_dwell(PointerTrack& track)
    {
        release_held(track);
        track.dwell = as_element(track.current);
        track.next_tap_index = 0;
        track.phase = track.dwell.is_node() ? Phase::DwellingOnNode : Phase::DwellingOnLink;
        emit(track.dwell.is_node() ? EventKind::NodeDwellStart : EventKind::LinkDwellStart, track.id).element =
            track.dwell;
    }

    void end_dwell(PointerTrack& track)
    {
        emit(track.dwell.is_node() ? EventKind::NodeDwellEnd : EventKind::LinkDwellEnd, track.id).element =
            track.dwell;
        track.dwell = {};
        track.phase = Phase::Sweeping;
        release_dependents(track.id);
    }

    // Pointers bound to an anchor that stopped dwelling fall back to plain sweeping.
    void release_dependents(const std::string& anchor_id)
    {
        for (auto& [id, other] : state_.pointers) {
            if (other.anchor != anchor_id)
                continue;
            if (other.phase == Phase::Radiating) {
                emit(EventKind::RadiateEnd, other.id).link = other.radiate_link;
                emit_circle_end(other);
            } else if (other.phase == Phase::Circling) {
                emit_circle_end(other);
            }
            if (other.phase == Phase::Satellite || other.phase == Phase::Circling || other.phase == Phase::Radiating)
                to_sweeping(other);
        }
    }

    void to_sweeping(PointerTrack& track)
    {
        track.phase = Phase::Sweeping;
        track.anchor.clear();
        track.hysteresis = {};
        track.current = hit_test(d_, track.pos, {}, cfg_.spatial);
        track.current_since = t_;
        track.holding = false;
    }

    // ----- movement -----------------------------------------------------------------------

    void move(PointerTrack& track, Vec2 pos)
    {
        const Vec2 prev = track.pos;
        track.path_length += distance(prev, pos);
        track.pos = pos;
        track.history.push_back({t_, pos});
        trim_history(track);
        const double speed = estimate_speed(track.history, cfg_.speed_window_ms);

        switch (track.phase) {
        case Phase::Sweeping:
        case Phase::DwellingOnNode:
        case Phase::DwellingOnLink: sweep(track, prev, pos, speed); break;
        case Phase::Satellite: satellite(track, pos); break;
        case Phase::Circling: circle(track, pos); break;
        case Phase::Radiating: radiate(track, pos); break;
        case Phase::DomeMember:
        case Phase::Idle: break;
        }
    }

    void trim_history(PointerTrack& track) const
    {
        // Keep one sample at or beyond the speed window.
        auto& h = track.history;
        std::size_t keep_from = 0;
        for (std::size_t i = 0; i < h.size(); ++i)
            if (static_cast<double>(t_ - h[i].t) >= cfg_.speed_window_ms)
                keep_from = i;
        h.erase(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(keep_from));
    }

    void sweep(PointerTrack& track, Vec2 prev, Vec2 pos, double speed)
    {
        // Sub-sample the motion so fast strokes cannot skip over a link corridor or node.
        double min_feature = cfg_.spatial.link_corridor;
        for (const Node& n : d_.nodes())
            min_feature = std::min(min_feature, n.radius);
        const double step = min_feature / 2.0;
        const int steps = std::max(1, static_cast<int>(std::ceil(distance(prev, pos) / step)));

        for (int i = 1; i <= steps; ++i) {
            const Vec2 p = prev + (pos - prev) * (static_cast<double>(i) / steps);
            const HitResult hit = hit_test(d_, p, track.hysteresis, cfg_.spatial);
            if (hit.same_element(track.current)) {
                track.current = hit;
                continue;
            }
            if (is_dwelling(track.phase))
                end_dwell(track);
            track.current = hit;
            track.current_since = t_;
            if (track.hysteresis.grown_node != hit.id)
                track.hysteresis = {};
            if (hit.kind != HitResult::Kind::None)
                sweep_entry(track, hit, speed);
        }
        track.hysteresis = grow_hysteresis(track.hysteresis, track.current, speed, cfg_.spatial);

        if (track.phase == Phase::Sweeping && track.current.kind != HitResult::Kind::None &&
            static_cast<double>(t_ - track.current_since) >= cfg_.dwell_ms)
            start_dwell(track);
    }

    // ----- satellites, circling and radiating ---------------------------------------------

    const PointerTrack* anchor_of(const PointerTrack& track) const
    {
        const auto it = state_.pointers.find(track.anchor);
        return it == state_.pointers.end() ? nullptr : &it->second;
    }

    // Advances the unwrapped orbit angle and reports incident links swept past.
    void advance_angle(PointerTrack& track, const Node& centre, Vec2 pos, bool report)
    {
        const double before = track.angle;
        track.angle += angle_delta(wrap_angle(track.angle), direction_angle(centre.position, pos));
        if (report)
            report_crossings(track, centre, before, track.angle);
    }

    void report_crossings(PointerTrack& track, const Node& centre, double from, double to)
    {
        std::vector<std::pair<double, std::string>> hits;
        for (const LinkAngle& la : link_angles_at(d_, centre.id)) {
            const int n = crossings(la.angle, from, to);
            for (int k = 0; k < n; ++k) {
                // Order by how far along the sweep the link lies.
                double along = la.angle - from;
                along = to > from ? std::fmod(along + two_pi * 8, two_pi) : std::fmod(two_pi * 8 - along, two_pi);
                hits.emplace_back(along + two_pi * k, la.link_id);
            }
        }
        std::sort(hits.begin(), hits.end());
        for (const auto& [along, link] : hits) {
            InteractionEvent& e = emit(EventKind::LinkCrossed, track.id);
            e.anchor_pointer = track.anchor;
            e.element = ElementRef::node(centre.id);
            e.link = link;
        }
    }

    void satellite(PointerTrack& track, Vec2 pos)
    {
        const PointerTrack* anchor = anchor_of(track);
        if (anchor == nullptr)
            return;

        if (anchor->dwell.is_node()) {
            const Node& centre = d_.node(anchor->dwell.id);
            advance_angle(track, centre, pos, false);
            const double radius = distance(centre.position, pos);
            const bool in_annulus = radius >= cfg_.orbit_min && radius <= cfg_.orbit_max;
            if (in_annulus && std::abs(track.angle - track.start_angle) >= cfg_.circle_start_angle) {
                track.phase = Phase::Circling;
                track.on_link.clear();
                InteractionEvent& e = emit(EventKind::CircleStart, track.id);
                e.anchor_pointer = anchor->id;
                e.element = ElementRef::node(centre.id);
                e.angle = wrap_angle(track.angle);
                report_crossings(track, centre, track.start_angle, track.angle);
                emit_progress(track, centre);
                return;
            }
        }

        const double reach = std::max(cfg_.tap_radius, anchor->dwell.is_node() ? cfg_.orbit_max : 0.0);
        const double from_anchor = anchor->dwell.is_node() ? distance(d_.node(anchor->dwell.id).position, pos)
                                                           : distance(anchor->pos, pos);
        if (from_anchor > reach) {
            to_sweeping(track);
            return;
        }

        // A second finger resting on a different element starts its own dwell.
        const HitResult hit = hit_test(d_, pos, {}, cfg_.spatial);
        if (!hit.same_element(track.own_hit)) {
            track.own_hit = hit;
            track.own_hit_since = t_;
        }
        if (hit.kind != HitResult::Kind::None && !(as_element(hit) == anchor->dwell) &&
            static_cast<double>(t_ - track.own_hit_since) >= cfg_.dwell_ms) {
            track.anchor.clear();
            track.current = hit;
            track.current_since = track.own_hit_since;
            track.holding = false;
            track.phase = Phase::Sweeping;
            start_dwell(track);
        }
    }

    void emit_progress(PointerTrack& track, const Node& centre)
    {
        InteractionEvent& e = emit(EventKind::CircleProgress, track.id);
        e.anchor_pointer = track.anchor;
        e.element = ElementRef::node(centre.id);
        e.angle = wrap_angle(track.angle);
    }

    void emit_circle_end(PointerTrack& track)
    {
        InteractionEvent& e = emit(EventKind::CircleEnd, track.id);
        e.anchor_pointer = track.anchor;
        if (const PointerTrack* anchor = anchor_of(track))
            e.element = anchor->dwell;
    }

    // Incident link whose corridor contains `pos`, nearest first.
    std::optional<std::string> link_under(const Node& centre, Vec2 pos) const
    {
        std::optional<std::string> best;
        double best_distance = 0.0;
        for (std::size_t index : d_.incident_links(centre.id)) {
            const Link& l = d_.links()[index];
            const double dist = distance_to_link(d_, l.id, pos);
            if (dist > cfg_.spatial.link_corridor)
                continue;
            if (!best || dist < best_distance) {
                best = l.id;
                best_distance = dist;
            }
        }
        return best;
    }

    double along_link(const Node& from, const Link& l, Vec2 pos) const
    {
        const Vec2 to = d_.node(l.other(from.id)).position;
        const double len = distance(from.position, to);
        return len > 0.0 ? dot(pos - from.position, (to - from.position) * (1.0 / len)) : 0.0;
    }

    void circle(PointerTrack& track, Vec2 pos)
    {
        const PointerTrack* anchor = anchor_of(track);
        if (anchor == nullptr)
            return;
        const Node& centre = d_.node(anchor->dwell.id);
        advance_angle(track, centre, pos, true);
        emit_progress(track, centre);

        const auto link = link_under(centre, pos);
        if (link) {
            const double along = along_link(centre, d_.link(*link), pos);
            if (track.on_link != *link) {
                track.on_link = *link;
                track.on_link_since = t_;
                track.on_link_min_along = along;
            } else {
                track.on_link_min_along = std::min(track.on_link_min_along, along);
            }
            if (static_cast<double>(t_ - track.on_link_since) >= cfg_.radiate_dwell_ms &&
                along - track.on_link_min_along >= cfg_.radiate_start_dist) {
                start_radiate(track, centre, *link, along);
            }
            return;
        }
        track.on_link.clear();

        const double radius = distance(centre.position, pos);
        if (radius < cfg_.orbit_min || radius > cfg_.orbit_max) {
            emit_circle_end(track);
            to_sweeping(track);
        }
    }

    void start_radiate(PointerTrack& track, const Node& centre, const std::string& link_id, double along)
    {
        const Link& l = d_.link(link_id);
        const Node& target = d_.node(l.other(centre.id));
        track.phase = Phase::Radiating;
        track.radiate_link = link_id;
        track.radiate_target = target.id;
        track.start_along = along;
        track.max_along = along;
        track.arrive_along = distance(centre.position, target.position) - target.radius;
        track.last_progress = 0.0;
        track.corridor_lost = false;

        InteractionEvent& s = emit(EventKind::RadiateStart, track.id);
        s.anchor_pointer = track.anchor;
        s.element = ElementRef::node(target.id);
        s.link = link_id;
        InteractionEvent& p = emit(EventKind::RadiateProgress, track.id);
        p.anchor_pointer = track.anchor;
        p.element = ElementRef::node(target.id);
        p.link = link_id;
        p.progress = 0.0;
    }

    void radiate_progress(PointerTrack& track, double progress)
    {
        if (progress <= track.last_progress)
            return;
        track.last_progress = progress;
        InteractionEvent& e = emit(EventKind::RadiateProgress, track.id);
        e.anchor_pointer = track.anchor;
        e.element = ElementRef::node(track.radiate_target);
        e.link = track.radiate_link;
        e.progress = progress;
    }

    void cancel_radiate(PointerTrack& track, const Node& centre)
    {
        emit(EventKind::RadiateEnd, track.id).link = track.radiate_link;
        track.phase = Phase::Circling;
        track.radiate_link.clear();
        track.radiate_target.clear();
        track.on_link.clear();
        track.angle = direction_angle(centre.position, track.pos);
        track.start_angle = track.angle;
    }

    void radiate(PointerTrack& track, Vec2 pos)
    {
        const PointerTrack* anchor = anchor_of(track);
        if (anchor == nullptr)
            return;
        const Node& centre = d_.node(anchor->dwell.id);
        const Node& target = d_.node(track.radiate_target);

        if (distance(pos, target.position) <= target.radius) {
            radiate_progress(track, 1.0);
            InteractionEvent& a = emit(EventKind::RadiateArrived, track.id);
            a.anchor_pointer = track.anchor;
            a.element = ElementRef::node(target.id);
            a.link = track.radiate_link;
            emit_circle_end(track);
            // The radiating finger now rests on the reached node and can anchor a new circle.
            track.anchor.clear();
            track.radiate_link.clear();
            track.radiate_target.clear();
            track.current = {HitResult::Kind::Node, target.id, distance(pos, target.position)};
            track.current_since = t_;
            track.hysteresis = {};
            track.holding = false;
            track.phase = Phase::Sweeping;
            start_dwell(track);
            return;
        }

        if (distance_to_link(d_, track.radiate_link, pos) > cfg_.spatial.link_corridor) {
            if (!track.corridor_lost) {
                track.corridor_lost = true;
                track.lost_since = t_;
                emit(EventKind::CorridorLost, track.id).link = track.radiate_link;
            } else if (static_cast<double>(t_ - track.lost_since) > cfg_.corridor_lost_ms) {
                cancel_radiate(track, centre);
            }
            return;
        }
        if (track.corridor_lost) {
            track.corridor_lost = false;
            emit(EventKind::CorridorRegained, track.id).link = track.radiate_link;
        }

        const double along = along_link(centre, d_.link(track.radiate_link), pos);
        if (along < track.max_along - cfg_.radiate_jitter) {
            cancel_radiate(track, centre);
            return;
        }
        track.max_along = std::max(track.max_along, along);
        const double span = track.arrive_along - track.start_along;
        const double progress = span > 0.0 ? std::clamp((track.max_along - track.start_along) / span, 0.0, 1.0) : 1.0;
        radiate_progress(track, progress);
    }

    GestureState& state_;
    const Diagram& d_;
    const EngineConfig& cfg_;
    TimeMs t_;
    std::vector<InteractionEvent> events_;
};

} // namespace

FrameResult process_frame(GestureState state, const Diagram& d, const EngineConfig& cfg, const TouchFrame& frame)
{
    if (state.last_t && frame.t <= *state.last_t)
        throw Error(Errc::NonMonotoneTime,
                    "frame at " + std::to_string(frame.t) + " ms follows " + std::to_string(*state.last_t) + " ms");
    FrameStep step(state, d, cfg, frame.t);
    auto events = step.run(frame);
    state.last_t = frame.t;
    return {std::move(state), std::move(events)};
}

FrameResult submit_speech_command(GestureState state, const EngineConfig& cfg, TimeMs t, std::string_view text)
{
    (void)cfg;
    if (state.last_t && t < *state.last_t)
        throw Error(Errc::NonMonotoneTime, "speech command predates the last frame");
    if (!state.listening_until || t > *state.listening_until)
        throw Error(Errc::NotListening, "no flick-down opened a listening window");
    state.listening_until.reset();

    InteractionEvent e;
    e.t = t;
    e.kind = EventKind::SpeechCommand;
    e.command = parse_speech_command(text);
    return {std::move(state), {std::move(e)}};
}

std::vector<InteractionEvent> GestureRecognizer::process(const TouchFrame& frame)
{
    auto result = process_frame(state_, *diagram_, cfg_, frame);
    state_ = std::move(result.state);
    return std::move(result.events);
}

InteractionEvent GestureRecognizer::speech(TimeMs t, std::string_view text)
{
    auto result = submit_speech_command(state_, cfg_, t, text);
    state_ = std::move(result.state);
    return std::move(result.events.front());
}

} // namespace sonode
