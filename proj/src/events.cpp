#include "sonode/events.hpp"

#include <algorithm>
#include <cctype>

namespace sonode {

std::string_view to_string(EventKind kind)
{
    switch (kind) {
    case EventKind::NodeSwept: return "NodeSwept";
    case EventKind::LinkSwept: return "LinkSwept";
    case EventKind::NodeDwellStart: return "NodeDwellStart";
    case EventKind::NodeDwellEnd: return "NodeDwellEnd";
    case EventKind::LinkDwellStart: return "LinkDwellStart";
    case EventKind::LinkDwellEnd: return "LinkDwellEnd";
    case EventKind::DomeStart: return "DomeStart";
    case EventKind::DomeUpdate: return "DomeUpdate";
    case EventKind::DomeEnd: return "DomeEnd";
    case EventKind::DetailTap: return "DetailTap";
    case EventKind::CircleStart: return "CircleStart";
    case EventKind::CircleProgress: return "CircleProgress";
    case EventKind::LinkCrossed: return "LinkCrossed";
    case EventKind::CircleEnd: return "CircleEnd";
    case EventKind::RadiateStart: return "RadiateStart";
    case EventKind::RadiateProgress: return "RadiateProgress";
    case EventKind::CorridorLost: return "CorridorLost";
    case EventKind::CorridorRegained: return "CorridorRegained";
    case EventKind::RadiateArrived: return "RadiateArrived";
    case EventKind::RadiateEnd: return "RadiateEnd";
    case EventKind::FlickDown: return "FlickDown";
    case EventKind::FlickRight: return "FlickRight";
    case EventKind::TwoFingerFlickLeft: return "TwoFingerFlickLeft";
    case EventKind::SpeechCommand: return "SpeechCommand";
    case EventKind::SearchResults: return "SearchResults";
    case EventKind::FilterApplied: return "FilterApplied";
    case EventKind::FilterCleared: return "FilterCleared";
    case EventKind::Guidance: return "Guidance";
    case EventKind::GuidanceArrived: return "GuidanceArrived";
    }
    return "?";
}

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string trim(std::string_view s, std::string_view junk = " \t\r\n")
{
    const auto first = s.find_first_not_of(junk);
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(junk);
    return std::string(s.substr(first, last - first + 1));
}

} // namespace

SpeechCommand parse_speech_command(std::string_view text)
{
    SpeechCommand cmd;
    cmd.text = trim(text);
    const std::string spoken = trim(cmd.text, " \t\r\n.!?");
    const std::string folded = lower(spoken);

    for (std::string_view prefix : {"searching for ", "search for ", "search "}) {
        if (folded.starts_with(prefix)) {
            cmd.query = trim(std::string_view(spoken).substr(prefix.size()), " \t\"'");
            if (!cmd.query.empty())
                cmd.kind = SpeechCommand::Kind::Search;
            return cmd;
        }
    }
    if (folded == "clear filter" || folded == "stop filtering" || folded == "filter off") {
        cmd.kind = SpeechCommand::Kind::ClearFilter;
        return cmd;
    }
    for (std::string_view prefix : {"filter by ", "filtering by ", "filter "}) {
        if (!folded.starts_with(prefix))
            continue;
        const std::string rest = trim(std::string_view(spoken).substr(prefix.size()));
        const auto split = rest.find_first_of(" :,");
        if (split == std::string::npos)
            return cmd;
        cmd.attribute = rest.substr(0, split);
        cmd.value = trim(std::string_view(rest).substr(split), " \t:,\"'");
        if (!cmd.attribute.empty() && !cmd.value.empty())
            cmd.kind = SpeechCommand::Kind::Filter;
        return cmd;
    }
    return cmd;
}

} // namespace sonode
