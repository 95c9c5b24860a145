#include "fixtures.hpp"

#include "sonode/error.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace sonode;
using sonode::testing::load_fixture;

namespace {

Node vertex(std::string id, double x, double y) { return {id, id, {x, y}, 0.05, {}}; }
Link edge(std::string a, std::string b) { return {a + "-" + b, a, b, "", {}}; }

Errc code_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::MalformedDocument;
}

} // namespace

TEST(Diagram, RejectsStructuralProblems)
{
    EXPECT_EQ(code_of([] { Diagram("t", "", {}, {}); }), Errc::EmptyDiagram);
    EXPECT_EQ(code_of([] { Diagram("t", "", {vertex("a", 0.1, 0.1), vertex("a", 0.2, 0.2)}, {}); }),
              Errc::SchemaViolation);
    EXPECT_EQ(code_of([] { Diagram("t", "", {vertex("a", 0.1, 0.1)}, {edge("a", "a")}); }),
              Errc::UnsupportedFeature);
    EXPECT_EQ(code_of([] {
                  Diagram("t", "", {vertex("a", 0.1, 0.1), vertex("b", 0.9, 0.9)}, {edge("a", "b"), edge("b", "a")});
              }),
              Errc::UnsupportedFeature);
    EXPECT_EQ(code_of([] { Diagram("t", "", {vertex("a", 0.1, 0.1)}, {edge("a", "zz")}); }), Errc::SchemaViolation);
    EXPECT_EQ(code_of([] { Diagram("t", "", {vertex("a", 1.5, 0.1)}, {}); }), Errc::SchemaViolation);
}

TEST(Diagram, LookupErrors)
{
    const Diagram d = load_fixture("seven_friends.graphml");
    EXPECT_EQ(code_of([&] { d.node("nobody"); }), Errc::UnknownNode);
    EXPECT_EQ(code_of([&] { d.link("p1-p7"); }), Errc::UnknownLink);
    EXPECT_EQ(code_of([&] { link_length(d, "nope"); }), Errc::UnknownLink);
}

TEST(Diagram, NodePitchFollowsDegree)
{
    const Diagram d = load_fixture("seven_friends.graphml");
    const PitchMap pm;
    EXPECT_EQ(node_degree(d, "p1"), 4u);
    EXPECT_EQ(d.max_degree(), 4u);
    for (const Node& n : d.nodes()) {
        const double expected = 220.0 * std::pow(2.0, 12.0 * node_degree(d, n.id) / 4.0 / 12.0);
        EXPECT_NEAR(node_pitch(d, n.id, pm), expected, 1e-9) << n.id;
    }
    EXPECT_NEAR(node_pitch(d, "p1", pm), 440.0, 1e-9); // the hub sits an octave up
}

TEST(Diagram, IsolatedNodesUseBasePitch)
{
    const Diagram d("t", "", {vertex("a", 0.1, 0.1), vertex("b", 0.8, 0.8)}, {});
    EXPECT_DOUBLE_EQ(node_pitch(d, "a", {}), 220.0);
}

TEST(Diagram, LinkPitchFallsWithLength)
{
    const Diagram d = load_fixture("seven_friends.graphml");
    const PitchMap pm;
    double lo = 1e9, hi = 0;
    for (const Link& l : d.links()) {
        lo = std::min(lo, link_length(d, l.id));
        hi = std::max(hi, link_length(d, l.id));
    }
    for (const Link& l : d.links()) {
        const Vec2 a = d.node(l.source).position, b = d.node(l.target).position;
        const double len = std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
        EXPECT_NEAR(link_length(d, l.id), len, 1e-12);
        EXPECT_NEAR(link_pitch(d, l.id, pm), 330.0 * std::pow(2.0, (hi - len) / (hi - lo)), 1e-9);
    }
}

TEST(Diagram, EqualLinkLengthsUseBasePitch)
{
    const Diagram d("t", "", {vertex("a", 0.1, 0.5), vertex("b", 0.5, 0.5), vertex("c", 0.9, 0.5)},
                    {edge("a", "b"), edge("b", "c")});
    EXPECT_DOUBLE_EQ(link_pitch(d, "a-b", {}), 330.0);
    EXPECT_DOUBLE_EQ(link_pitch(d, "b-c", {}), 330.0);
}

TEST(Diagram, IncidenceAndOtherEndpoint)
{
    const Diagram d = load_fixture("seven_friends.graphml");
    std::vector<std::string> others;
    for (std::size_t i : d.incident_links("p1"))
        others.push_back(d.links()[i].other("p1"));
    std::sort(others.begin(), others.end());
    EXPECT_EQ(others, (std::vector<std::string>{"p2", "p3", "p4", "p5"}));
}
