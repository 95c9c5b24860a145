#include "fixtures.hpp"

#include "sonode/error.hpp"
#include "sonode/query.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <random>

using namespace sonode;
using namespace sonode::testing;

TEST(Search, FindsCaseInsensitiveMatchesNearestFirst)
{
    const Diagram d = load_fixture("genealogy.graphml");
    const Vec2 finger{0.9, 0.9};
    const SearchState s = search(d, "ER", finger);

    // Oracle: scan everything by hand, then sort all matches by distance.
    auto has = [](std::string text) {
        std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
        return text.find("er") != std::string::npos;
    };
    std::vector<std::pair<double, std::string>> want;
    for (const Node& n : d.nodes()) {
        bool hit = has(n.label);
        for (const auto& [k, v] : n.attributes)
            hit = hit || has(v);
        if (hit)
            want.emplace_back(distance(n.position, finger), n.id);
    }
    for (const Link& l : d.links()) {
        bool hit = has(l.label);
        for (const auto& [k, v] : l.attributes)
            hit = hit || has(v);
        if (hit)
            want.emplace_back(
                distance((d.node(l.source).position + d.node(l.target).position) * 0.5, finger), l.id);
    }
    std::stable_sort(want.begin(), want.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    ASSERT_GE(want.size(), 3u);
    ASSERT_EQ(s.results.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_EQ(s.results[i].element.id, want[i].second);
        EXPECT_NEAR(s.results[i].distance, want[i].first, 1e-12);
    }
    EXPECT_EQ(s.active_target, 0u);
}

TEST(Search, NothingFound)
{
    const Diagram d = load_fixture("seven_friends.graphml");
    const SearchState s = search(d, "zebra", {0.5, 0.5});
    EXPECT_TRUE(s.results.empty());
    EXPECT_FALSE(s.active_target);
    EXPECT_EQ(search_summary(s), "Nothing found");
    EXPECT_EQ(search_summary(search(d, "bob", {0.5, 0.5})), "Found 1 result(s)");
}

TEST(Filter, GenderFemalePassesExactlyTheFemaleNodes)
{
    const Diagram d = load_fixture("genealogy.graphml");
    const FilterState f = apply_filter(d, "Gender", "FEMALE");
    std::set<std::string> want;
    for (const Node& n : d.nodes())
        for (const auto& [k, v] : n.attributes)
            if (k == "gender" && v == "female")
                want.insert(n.id);
    EXPECT_EQ(f.passing, want);
    EXPECT_EQ(want, (std::set<std::string>{"g1", "g3", "g5", "g7"}));
    for (const Link& l : d.links())
        EXPECT_EQ(f.deemphasized(ElementRef::link(l.id)), !want.contains(l.source) && !want.contains(l.target));
    EXPECT_FALSE(clear_filter(f).active);
    EXPECT_FALSE(clear_filter(f).deemphasized(ElementRef::node("g2")));
}

TEST(Guidance, FirstPromptIsDownLeft)
{
    const GuidancePrompt p = guidance_step({0.3, 0.8}, 0.045, {0.5, 0.5}, {});
    EXPECT_EQ(p.words, (std::vector<std::string>{"down", "left"}));
    EXPECT_FALSE(p.arrived);
}

TEST(Guidance, AxisLockingAndArrival)
{
    const EngineConfig cfg;
    EXPECT_EQ(guidance_step({0.5, 0.8}, 0.045, {0.51, 0.5}, cfg).words, (std::vector<std::string>{"down"}));
    EXPECT_EQ(guidance_step({0.2, 0.5}, 0.045, {0.5, 0.49}, cfg).words, (std::vector<std::string>{"left"}));
    EXPECT_EQ(guidance_step({0.5, 0.2}, 0.045, {0.2, 0.5}, cfg).words, (std::vector<std::string>{"up", "right"}));
    EXPECT_TRUE(guidance_step({0.5, 0.5}, 0.045, {0.52, 0.51}, cfg).arrived);
}

TEST(Guidance, PromptsSlowDownNearTheTarget)
{
    const EngineConfig cfg;
    double last = 0.0;
    for (double dist = 0.9; dist > 0.05; dist -= 0.05) {
        const double interval = guidance_step({0.05, 0.05}, 0.01, {0.05 + dist * 0.6, 0.05 + dist * 0.8}, cfg)
                                    .repeat_interval_ms;
        EXPECT_GE(interval, last);
        last = interval;
    }
    EXPECT_LE(last, cfg.pace_max_ms);
}

TEST(Guidance, RandomWalkersReachBob)
{
    const EngineConfig cfg;
    const Diagram d = load_fixture("seven_friends.graphml");
    const SearchState s = search(d, "Bob", {0.5, 0.5});
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int walker = 0; walker < 200; ++walker) {
        Vec2 p{u(rng), u(rng)};
        int steps = 0;
        for (; steps <= 60; ++steps) {
            const GuidancePrompt g = guidance_step(s, d, p, cfg);
            if (g.arrived)
                break;
            Vec2 m{};
            for (const auto& w : g.words)
                m = m + (w == "up" ? Vec2{0, -1} : w == "down" ? Vec2{0, 1} : w == "left" ? Vec2{-1, 0} : Vec2{1, 0});
            p = p + m * (0.03 / norm(m));
        }
        EXPECT_LE(steps, 60) << "walker " << walker;
    }
}

TEST(Guidance, NeedsATarget)
{
    const Diagram d = load_fixture("seven_friends.graphml");
    try {
        guidance_step(SearchState{}, d, {0.5, 0.5}, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NoActiveTarget);
    }
}
