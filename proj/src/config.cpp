#include "sonode/config.hpp"

#include "sonode/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <variant>

namespace sonode {

namespace {

enum class Range {
    Positive,      // > 0
    Length,        // (0, 1]
    Unit,          // [0, 1]
    Growth,        // > 1
    Cycle,         // >= 500
    AtLeastOne,    // >= 1
    Angle,         // (0, pi]
    ConeDegrees,   // (0, 90)
    SchemaVersion, // == 1
};

struct Field {
    const char* name;
    std::variant<double EngineConfig::*, int EngineConfig::*, double PitchMap::*, int PitchMap::*,
                 double SpatialParams::*>
        member;
    Range range;
};

const std::vector<Field>& fields()
{
    static const std::vector<Field> table = {
        {"schema_version", &EngineConfig::schema_version, Range::SchemaVersion},
        {"node_base_hz", &PitchMap::node_base_hz, Range::Positive},
        {"node_span_semitones", &PitchMap::node_span_semitones, Range::AtLeastOne},
        {"link_base_hz", &PitchMap::link_base_hz, Range::Positive},
        {"link_span_semitones", &PitchMap::link_span_semitones, Range::AtLeastOne},
        {"default_node_radius", &EngineConfig::default_node_radius, Range::Length},
        {"warn_above_nodes", &EngineConfig::warn_above_nodes, Range::AtLeastOne},
        {"link_corridor", &SpatialParams::link_corridor, Range::Length},
        {"growth_factor", &SpatialParams::growth_factor, Range::Growth},
        {"slow_threshold", &SpatialParams::slow_threshold, Range::Length},
        {"dwell_ms", &EngineConfig::dwell_ms, Range::Positive},
        {"tap_ms", &EngineConfig::tap_ms, Range::Positive},
        {"tap_radius", &EngineConfig::tap_radius, Range::Length},
        {"orbit_min", &EngineConfig::orbit_min, Range::Length},
        {"orbit_max", &EngineConfig::orbit_max, Range::Length},
        {"circle_start_angle", &EngineConfig::circle_start_angle, Range::Angle},
        {"flick_ms", &EngineConfig::flick_ms, Range::Positive},
        {"flick_dist", &EngineConfig::flick_dist, Range::Length},
        {"flick_cone_deg", &EngineConfig::flick_cone_deg, Range::ConeDegrees},
        {"flick_pair_ms", &EngineConfig::flick_pair_ms, Range::Positive},
        {"dome_window_ms", &EngineConfig::dome_window_ms, Range::Positive},
        {"dome_span", &EngineConfig::dome_span, Range::Length},
        {"dome_move_eps", &EngineConfig::dome_move_eps, Range::Length},
        {"radiate_dwell_ms", &EngineConfig::radiate_dwell_ms, Range::Positive},
        {"radiate_start_dist", &EngineConfig::radiate_start_dist, Range::Length},
        {"radiate_jitter", &EngineConfig::radiate_jitter, Range::Length},
        {"corridor_lost_ms", &EngineConfig::corridor_lost_ms, Range::Positive},
        {"listen_window_ms", &EngineConfig::listen_window_ms, Range::Positive},
        {"speed_window_ms", &EngineConfig::speed_window_ms, Range::Positive},
        {"base_note_ms", &EngineConfig::base_note_ms, Range::Positive},
        {"min_note_ms", &EngineConfig::min_note_ms, Range::Positive},
        {"speed_ref", &EngineConfig::speed_ref, Range::Positive},
        {"cycle_duration_ms", &EngineConfig::cycle_duration_ms, Range::Cycle},
        {"filtered_volume", &EngineConfig::filtered_volume, Range::Unit},
        {"circle_gap_scale", &EngineConfig::circle_gap_scale, Range::Angle},
        {"arrive_eps", &EngineConfig::arrive_eps, Range::Length},
        {"pace_min_ms", &EngineConfig::pace_min_ms, Range::Positive},
        {"pace_max_ms", &EngineConfig::pace_max_ms, Range::Positive},
        {"pace_dist_ref", &EngineConfig::pace_dist_ref, Range::Positive},
    };
    return table;
}

double get(const EngineConfig& cfg, const Field& f)
{
    return std::visit(
        [&](auto member) -> double {
            using M = decltype(member);
            if constexpr (std::is_same_v<M, double PitchMap::*> || std::is_same_v<M, int PitchMap::*>)
                return cfg.pitch.*member;
            else if constexpr (std::is_same_v<M, double SpatialParams::*>)
                return cfg.spatial.*member;
            else
                return cfg.*member;
        },
        f.member);
}

bool is_integer_field(const Field& f)
{
    return std::holds_alternative<int EngineConfig::*>(f.member) || std::holds_alternative<int PitchMap::*>(f.member);
}

void set(EngineConfig& cfg, const Field& f, double v)
{
    std::visit(
        [&](auto member) {
            using M = decltype(member);
            if constexpr (std::is_same_v<M, int PitchMap::*>)
                cfg.pitch.*member = static_cast<int>(v);
            else if constexpr (std::is_same_v<M, double PitchMap::*>)
                cfg.pitch.*member = v;
            else if constexpr (std::is_same_v<M, double SpatialParams::*>)
                cfg.spatial.*member = v;
            else if constexpr (std::is_same_v<M, int EngineConfig::*>)
                cfg.*member = static_cast<int>(v);
            else
                cfg.*member = v;
        },
        f.member);
}

bool in_range(double v, Range r)
{
    if (!std::isfinite(v))
        return false;
    switch (r) {
    case Range::Positive: return v > 0.0;
    case Range::Length: return v > 0.0 && v <= 1.0;
    case Range::Unit: return v >= 0.0 && v <= 1.0;
    case Range::Growth: return v > 1.0;
    case Range::Cycle: return v >= 500.0;
    case Range::AtLeastOne: return v >= 1.0;
    case Range::Angle: return v > 0.0 && v <= std::numbers::pi;
    case Range::ConeDegrees: return v > 0.0 && v < 90.0;
    case Range::SchemaVersion: return v == 1.0;
    }
    return false;
}

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string shortest(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

void validate(const EngineConfig& cfg)
{
    for (const Field& f : fields()) {
        if (!in_range(get(cfg, f), f.range))
            throw Error(Errc::ValidationError, std::string(f.name) + " = " + shortest(get(cfg, f)) + " is out of range");
    }
    if (cfg.orbit_min >= cfg.orbit_max)
        throw Error(Errc::ValidationError, "orbit_min must be smaller than orbit_max");
    if (cfg.min_note_ms > cfg.base_note_ms)
        throw Error(Errc::ValidationError, "min_note_ms must not exceed base_note_ms");
    if (cfg.pace_min_ms > cfg.pace_max_ms)
        throw Error(Errc::ValidationError, "pace_min_ms must not exceed pace_max_ms");
}

EngineConfig parse_config(const std::string& text)
{
    EngineConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string body = trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));

        const auto it = std::find_if(fields().begin(), fields().end(), [&](const Field& f) { return key == f.name; });
        if (it == fields().end())
            throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (!seen.insert(key).second)
            throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");

        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (value.empty() || ec != std::errc() || ptr != value.data() + value.size())
            throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": '" + value + "' is not a number");
        if (is_integer_field(*it) && v != std::floor(v))
            throw Error(Errc::ValidationError, key + " must be an integer");
        set(cfg, *it, v);
    }
    validate(cfg);
    return cfg;
}

EngineConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::FileError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const EngineConfig& cfg)
{
    std::string out;
    for (const Field& f : fields()) {
        out += f.name;
        out += " = ";
        out += is_integer_field(f) ? std::to_string(static_cast<long long>(get(cfg, f))) : shortest(get(cfg, f));
        out += '\n';
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t config_hash(const EngineConfig& cfg) { return fnv1a64(serialize_config(cfg)); }

} // namespace sonode
