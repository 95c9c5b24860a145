// Acceptance suite: one PASS/FAIL line per headline criterion, each with its own time budget.
// Usage: acceptance [fixtures-dir]

#include "../support/oracles.hpp"
#include "../support/scenarios.hpp"

#include "sonode/audio.hpp"
#include "sonode/graphml.hpp"
#include "sonode/query.hpp"
#include "sonode/session.hpp"
#include "sonode/spatial.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace sonode;
using namespace sonode::testing;
namespace fs = std::filesystem;

namespace {

fs::path fixtures = SONODE_FIXTURES;

Diagram fixture(const std::string& name) { return load_graphml_file(fixtures / "diagrams" / name); }

const char* const diagram_names[] = {"friends_quadrants.graphml", "seven_friends.graphml", "ring.graphml",
                                     "hub.graphml", "genealogy.graphml"};

struct Verdict {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& why)
    {
        if (!cond && ok) {
            ok = false;
            detail = why;
        }
    }
};

EngineOutput drive(const Diagram& d, const std::vector<TraceRecord>& trace, const EngineConfig& cfg = {})
{
    Engine engine(d, cfg);
    EngineOutput all;
    for (const TraceRecord& r : trace) {
        EngineOutput step = engine.feed(r);
        all.events.insert(all.events.end(), step.events.begin(), step.events.end());
        all.audio.insert(all.audio.end(), step.audio.begin(), step.audio.end());
    }
    return all;
}

std::vector<InteractionEvent> of_kind(const std::vector<InteractionEvent>& events, EventKind kind)
{
    std::vector<InteractionEvent> out;
    for (const InteractionEvent& e : events)
        if (e.kind == kind)
            out.push_back(e);
    return out;
}

// Answer key for the four-quadrant questions, recounted by position.
Verdict quadrant_fixture()
{
    Verdict v;
    const Diagram d = fixture("friends_quadrants.graphml");
    const QuadrantStats stats = quadrant_stats(d);

    std::array<std::size_t, 4> nodes{}, links{};
    auto index = [](Vec2 p) { return (p.y <= 0.5 ? 0 : 2) + (p.x <= 0.5 ? 0 : 1); };
    for (const Node& n : d.nodes())
        ++nodes[static_cast<std::size_t>(index(n.position))];
    for (const Link& l : d.links())
        ++links[static_cast<std::size_t>(index((d.node(l.source).position + d.node(l.target).position) * 0.5))];
    for (std::size_t q = 0; q < 4; ++q) {
        v.require(stats[q].nodes == nodes[q], "node count differs from recount in quadrant " + std::to_string(q));
        v.require(stats[q].links == links[q], "link count differs from recount in quadrant " + std::to_string(q));
    }

    auto unique_extreme = [&](auto field, bool max) -> int {
        int best = -1;
        bool tied = false;
        for (int q = 0; q < 4; ++q) {
            const std::size_t value = stats[static_cast<std::size_t>(q)].*field;
            if (best < 0) {
                best = q;
                continue;
            }
            const std::size_t held = stats[static_cast<std::size_t>(best)].*field;
            if (value == held)
                tied = true;
            else if (max ? value > held : value < held) {
                best = q;
                tied = false;
            }
        }
        return tied ? -1 : best;
    };
    v.require(unique_extreme(&QuadrantCount::links, true) == int(Quadrant::BottomLeft), "max links is not bottom left");
    v.require(unique_extreme(&QuadrantCount::links, false) == int(Quadrant::TopLeft), "min links is not top left");
    v.require(unique_extreme(&QuadrantCount::nodes, true) == int(Quadrant::BottomRight), "max nodes is not bottom right");
    v.require(unique_extreme(&QuadrantCount::nodes, false) == int(Quadrant::TopLeft), "min nodes is not top left");
    if (v.ok)
        v.detail = "BL most links, TL fewest links, BR most nodes, TL fewest nodes";
    return v;
}

Verdict bob_connections()
{
    Verdict v;
    const Diagram d = fixture("seven_friends.graphml");
    v.require(d.node("p1").label == "Bob", "p1 is not Bob");
    const auto crossed = of_kind(drive(d, orbit_node(d, "p1")).events, EventKind::LinkCrossed);
    std::set<std::string> ids;
    for (const auto& e : crossed)
        ids.insert(e.link);
    std::set<std::string> incident;
    for (const Link& l : d.links())
        if (l.touches("p1"))
            incident.insert(l.id);
    v.require(crossed.size() == 4, std::to_string(crossed.size()) + " LinkCrossed, expected 4");
    v.require(ids == incident, "crossed links are not Bob's links");
    if (v.ok)
        v.detail = "4 LinkCrossed, one per incident link";
    return v;
}

Verdict radiate_completion()
{
    Verdict v;
    const Diagram d = fixture("seven_friends.graphml");
    int followed = 0;
    for (const Link& l : d.links()) {
        if (!l.touches("p1"))
            continue;
        const std::string target = l.other("p1");
        const EngineOutput out = drive(d, radiate(d, "p1", target));
        const std::string tag = "p1->" + target + ": ";

        std::vector<double> progress;
        std::optional<TimeMs> arrived_t;
        bool progress_after_arrival = false;
        for (const InteractionEvent& e : out.events) {
            if (e.kind == EventKind::RadiateProgress) {
                v.require(e.link == l.id, tag + "progress on the wrong link");
                if (arrived_t)
                    progress_after_arrival = true;
                progress.push_back(e.progress);
            }
            if (e.kind == EventKind::RadiateArrived) {
                v.require(!arrived_t, tag + "arrived twice");
                v.require(e.element == ElementRef::node(target), tag + "arrived at the wrong node");
                arrived_t = e.t;
            }
        }
        v.require(!progress.empty(), tag + "no RadiateProgress");
        v.require(arrived_t.has_value(), tag + "no RadiateArrived");
        if (!v.ok)
            return v;
        v.require(!progress_after_arrival, tag + "progress after arrival");
        v.require(progress.front() <= 0.05, tag + "progress does not start near 0");
        v.require(std::abs(progress.back() - 1.0) < 1e-12, tag + "progress does not reach 1");
        v.require(std::is_sorted(progress.begin(), progress.end()), tag + "progress not monotone");

        std::size_t fanfares = 0;
        for (const AudioEvent& a : out.audio)
            if (a.kind == AudioKind::Fanfare) {
                ++fanfares;
                v.require(a.t == *arrived_t && a.element == ElementRef::node(target), tag + "fanfare misplaced");
            }
        v.require(fanfares == 1, tag + std::to_string(fanfares) + " fanfares");
        ++followed;
    }
    if (v.ok)
        v.detail = std::to_string(followed) + " links: progress 0->1, arrival, one fanfare";
    return v;
}

Vec2 step_towards(Vec2 p, const std::vector<std::string>& words, double step)
{
    Vec2 move{};
    for (const std::string& w : words) {
        if (w == "up") move.y -= 1.0;
        if (w == "down") move.y += 1.0;
        if (w == "left") move.x -= 1.0;
        if (w == "right") move.x += 1.0;
    }
    if (norm(move) == 0.0)
        return p;
    p = p + move * (step / norm(move));
    return {std::clamp(p.x, 0.0, 1.0), std::clamp(p.y, 0.0, 1.0)};
}

Verdict guidance()
{
    Verdict v;
    const EngineConfig cfg;
    const auto first = guidance_step({0.3, 0.8}, cfg.default_node_radius, {0.5, 0.5}, cfg);
    v.require(first.words == std::vector<std::string>{"down", "left"}, "first prompt is not [down, left]");

    const Diagram d = fixture("seven_friends.graphml");
    const Node& bob = d.node("p1");
    const double radius = effective_radius(bob, {}, cfg.spatial);
    std::mt19937 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int worst = 0;
    for (int i = 0; i < 200; ++i) {
        Vec2 p{u(rng), u(rng)};
        int steps = 0;
        while (!guidance_step(bob.position, radius, p, cfg).arrived && steps <= 60) {
            p = step_towards(p, guidance_step(bob.position, radius, p, cfg).words, 0.03);
            ++steps;
        }
        worst = std::max(worst, steps);
        // Arrival must really mean the finger is on Bob.
        v.require(distance(p, bob.position) <= radius + cfg.arrive_eps, "arrived away from Bob");
    }
    v.require(worst <= 60, "a walker needed " + std::to_string(worst) + " steps");
    if (v.ok)
        v.detail = "200 walkers, worst " + std::to_string(worst) + " steps; first prompt [down, left]";
    return v;
}

DomeSchedule whole(const Diagram& d, const EngineConfig& cfg)
{
    std::vector<std::string> nodes, links;
    for (const Node& n : d.nodes())
        nodes.push_back(n.id);
    for (const Link& l : d.links())
        links.push_back(l.id);
    return dome_schedule(nodes, links, d, cfg);
}

Verdict dome_textures()
{
    Verdict v;
    const EngineConfig cfg;

    const DomeSchedule ring = whole(fixture("ring.graphml"), cfg);
    v.require(!ring.playlist.empty(), "empty ring schedule");
    for (std::size_t i = 0; i < ring.playlist.size(); ++i)
        v.require(ring.playlist[i].element.is_node() == (i % 2 == 0), "ring does not alternate at item " + std::to_string(i));

    const DomeSchedule hub = whole(fixture("hub.graphml"), cfg);
    v.require(hub.playlist.size() >= 4 && hub.playlist[0].element.is_node(), "hub does not open on a node");
    std::size_t strings = 0;
    while (1 + strings < hub.playlist.size() && hub.playlist[1 + strings].element.is_link())
        ++strings;
    v.require(strings >= 3, "hub has only " + std::to_string(strings) + " strings after the first horn");

    for (double cycle : {2000.0, 4000.0, 8000.0}) {
        EngineConfig c = cfg;
        c.cycle_duration_ms = cycle;
        for (const char* name : diagram_names) {
            const DomeSchedule s = whole(fixture(name), c);
            const DomeItem& last = s.playlist.back();
            const double span = last.onset_ms + last.duration_ms;
            v.require(std::abs(span - cycle) <= 1.0, std::string(name) + " spans " + std::to_string(span) + " ms");
            v.require(s.playlist.front().onset_ms == 0.0, std::string(name) + " does not start at 0");
        }
    }
    if (v.ok)
        v.detail = "ring alternates, hub H+" + std::to_string(strings) + "S, spans within 1 ms at 2/4/8 s";
    return v;
}

Verdict hit_test_oracle()
{
    Verdict v;
    const EngineConfig cfg;
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> u(-0.05, 1.05);
    int points = 0;
    for (const char* name : diagram_names) {
        const Diagram d = fixture(name);
        std::uniform_int_distribution<std::size_t> pick(0, d.nodes().size() - 1);
        for (int i = 0; i < 2000; ++i, ++points) {
            const Vec2 p{u(rng), u(rng)};
            HysteresisState h;
            if (i % 2)
                h.grown_node = d.nodes()[pick(rng)].id;
            const OracleHit want = brute_force_hit(d, p, cfg.spatial.link_corridor, h.grown_node.value_or(""),
                                                   cfg.spatial.growth_factor);
            const OracleHit got = as_oracle(hit_test(d, p, h, cfg.spatial));
            if (!(got == want)) {
                std::ostringstream os;
                os << name << " (" << p.x << "," << p.y << "): engine " << got.kind << got.id << ", oracle "
                   << want.kind << want.id;
                v.require(false, os.str());
                return v;
            }
        }
    }
    v.detail = std::to_string(points) + " points agree";
    return v;
}

Diagram random_diagram(std::mt19937& rng)
{
    std::uniform_int_distribution<int> count(2, 50);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = count(rng);
    std::vector<Node> nodes;
    for (int i = 0; i < n; ++i)
        nodes.push_back({"n" + std::to_string(i), "N" + std::to_string(i), {u(rng), u(rng)}, 0.02, {}});
    std::set<std::pair<int, int>> pairs;
    std::uniform_int_distribution<int> end(0, n - 1);
    const int wanted = std::min(n * (n - 1) / 2, std::uniform_int_distribution<int>(1, 2 * n)(rng));
    while (static_cast<int>(pairs.size()) < wanted) {
        int a = end(rng), b = end(rng);
        if (a == b)
            continue;
        pairs.insert({std::min(a, b), std::max(a, b)});
    }
    std::vector<Link> links;
    for (auto [a, b] : pairs) {
        const std::string s = "n" + std::to_string(a), t = "n" + std::to_string(b);
        links.push_back({s + "-" + t, s, t, "", {}});
    }
    return Diagram("random", "", std::move(nodes), std::move(links));
}

Verdict pitch_properties()
{
    Verdict v;
    const PitchMap pm;
    std::mt19937 rng(1977);
    for (int k = 0; k < 100 && v.ok; ++k) {
        const Diagram d = random_diagram(rng);
        const std::string tag = "diagram " + std::to_string(k) + ": ";

        std::map<std::string, int> degree;
        for (const Link& l : d.links()) {
            ++degree[l.source];
            ++degree[l.target];
        }
        int top = 0;
        for (auto& [id, deg] : degree)
            top = std::max(top, deg);
        double loudest = -1.0;
        for (const Node& n : d.nodes())
            loudest = std::max(loudest, node_pitch(d, n.id, pm));
        for (const Node& n : d.nodes()) {
            const bool max_degree = degree[n.id] == top;
            const bool max_pitch = node_pitch(d, n.id, pm) == loudest;
            v.require(max_degree == max_pitch, tag + n.id + " breaks argmax pitch = argmax degree");
        }

        std::vector<std::pair<double, double>> lp; // (length, pitch)
        for (const Link& l : d.links())
            lp.emplace_back(distance(d.node(l.source).position, d.node(l.target).position), link_pitch(d, l.id, pm));
        std::sort(lp.begin(), lp.end());
        for (std::size_t i = 1; i < lp.size(); ++i)
            if (lp[i].first > lp[i - 1].first)
                v.require(lp[i].second < lp[i - 1].second, tag + "link pitch not strictly decreasing in length");
    }
    if (v.ok)
        v.detail = "100 random diagrams up to 50 nodes";
    return v;
}

Verdict determinism()
{
    Verdict v;
    const EngineConfig cfg;
    int cases = 0;
    for (const GoldenCase& gc : golden_cases(fixtures / "diagrams")) {
        const fs::path trace = fixtures / "traces" / (gc.name + ".trace");
        const fs::path golden = fixtures / "golden" / (gc.name + ".log");
        const SessionLog a = run_replay(fixtures / "diagrams" / gc.diagram, trace);
        const SessionLog b = run_replay(fixtures / "diagrams" / gc.diagram, trace);
        v.require(a.text() == b.text(), gc.name + ": two replays differ");
        v.require(diff_logs(a, b) == "identical", gc.name + ": diff does not report identical");
        v.require(diff_logs(load_log(golden), a) == "identical", gc.name + ": replay differs from the golden log");
        // A log carries its own inputs, so replaying it must reproduce it.
        const SessionLog again = replay(load_graphml_file(fixtures / "diagrams" / gc.diagram), cfg, inputs_from_log(a));
        v.require(again.text() == a.text(), gc.name + ": replaying the log's inputs differs");
        ++cases;
    }
    if (v.ok)
        v.detail = std::to_string(cases) + " golden traces byte-identical";
    return v;
}

Verdict filter_soundness()
{
    Verdict v;
    const EngineConfig cfg;
    const Diagram d = fixture("genealogy.graphml");
    std::set<std::string> passing_nodes, passing_links;
    for (const Node& n : d.nodes())
        for (const auto& [key, value] : n.attributes)
            if (key == "gender" && value == "female")
                passing_nodes.insert(n.id);
    for (const Link& l : d.links())
        if (passing_nodes.count(l.source) || passing_nodes.count(l.target))
            passing_links.insert(l.id);
    auto passes = [&](const ElementRef& e) {
        return e.is_node() ? passing_nodes.count(e.id) > 0 : passing_links.count(e.id) > 0;
    };

    const EngineOutput out = drive(d, filter_sweep(d, cfg, "gender", "female"), cfg);
    const auto applied = of_kind(out.events, EventKind::FilterApplied);
    v.require(applied.size() == 1 && applied[0].count == passing_nodes.size(), "filter not applied as expected");

    std::size_t faint = 0, full = 0;
    for (std::size_t i = 0; i < out.audio.size(); ++i) {
        const AudioEvent& a = out.audio[i];
        if (!a.element || a.kind == AudioKind::NoiseOverlay)
            continue;
        if (passes(a.element)) {
            v.require(a.volume == 1.0, a.element.id + " passes but sounds faint");
            ++full;
            continue;
        }
        v.require(a.volume == cfg.filtered_volume, a.element.id + " leaks at volume " + std::to_string(a.volume));
        bool noise = false;
        for (std::size_t j = 0; j < i; ++j) {
            const AudioEvent& o = out.audio[j];
            if (o.kind == AudioKind::NoiseOverlay && o.on && o.t == a.t && o.voice == a.voice && o.element == a.element)
                noise = true;
        }
        v.require(noise, a.element.id + " sounds without the noise overlay");
        ++faint;
    }
    v.require(faint > 0 && full > 0, "sweep did not reach both kinds of element");
    if (v.ok)
        v.detail = std::to_string(faint) + " filtered sounds all faint with noise, " + std::to_string(full) + " at full volume";
    return v;
}

// Tap k reads the label, then each attribute in turn, wrapping around.
std::string expected_detail(const Node& n, int k)
{
    const int m = static_cast<int>(n.attributes.size()) + 1;
    const int i = k % m;
    if (i == 0)
        return n.label;
    return n.attributes[static_cast<std::size_t>(i - 1)].first + ": " + n.attributes[static_cast<std::size_t>(i - 1)].second;
}

Verdict simultaneity()
{
    Verdict v;
    const Diagram d = fixture("seven_friends.graphml");
    const int taps = 3;
    const EngineOutput out = drive(d, dwell_tap_pair(d, "p3", "p6", taps));
    const std::map<std::string, std::pair<std::string, std::string>> hands{{"Lt", {"L", "p3"}}, {"Rt", {"R", "p6"}}};

    std::map<std::string, int> next;
    std::size_t seen = 0;
    for (const InteractionEvent& e : of_kind(out.events, EventKind::DetailTap)) {
        const auto it = hands.find(e.pointer);
        v.require(it != hands.end(), "tap from unexpected pointer " + e.pointer);
        if (it == hands.end())
            break;
        v.require(e.anchor_pointer == it->second.first, e.pointer + " bound to " + e.anchor_pointer);
        v.require(e.element == ElementRef::node(it->second.second), e.pointer + " read " + e.element.id);
        v.require(e.tap_index == next[e.pointer]++, e.pointer + " tap index out of turn");
        ++seen;
    }
    v.require(seen == 2 * taps, std::to_string(seen) + " taps, expected " + std::to_string(2 * taps));

    std::map<std::string, std::vector<std::string>> spoken;
    for (const AudioEvent& a : out.audio)
        if (a.kind == AudioKind::Speech)
            spoken[a.voice].push_back(a.text);
    for (const auto& [tapper, hand] : hands) {
        std::vector<std::string> want;
        for (int k = 0; k < taps; ++k)
            want.push_back(expected_detail(d.node(hand.second), k));
        v.require(spoken[hand.first] == want, "speech on voice " + hand.first + " mixes up details");
    }
    if (v.ok)
        v.detail = "two hands, " + std::to_string(taps) + " taps each, no cross-talk";
    return v;
}

struct Criterion {
    const char* name;
    double budget_ms;
    std::function<Verdict()> check;
};

} // namespace

int main(int argc, char** argv)
{
    if (argc > 1)
        fixtures = argv[1];

    const std::vector<Criterion> criteria{
        {"quadrant_fixture", 1000, quadrant_fixture},
        {"bob_connections", 1000, bob_connections},
        {"radiate_completion", 1000, radiate_completion},
        {"guidance", 5000, guidance},
        {"dome_textures", 1000, dome_textures},
        {"hit_test_oracle", 5000, hit_test_oracle},
        {"pitch_properties", 5000, pitch_properties},
        {"determinism", 10000, determinism},
        {"filter_soundness", 2000, filter_soundness},
        {"simultaneity", 1000, simultaneity},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (v.ok && ms > c.budget_ms)
            v = {false, "over budget, " + v.detail};
        if (!v.ok)
            ++failed;
        std::printf("%s %-20s %9.2f ms (budget %5.0f ms)  %s\n", v.ok ? "PASS" : "FAIL", c.name, ms, c.budget_ms,
                    v.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
