#pragma once

#include "sonode/diagram.hpp"
#include "sonode/spatial.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace sonode {

// Every tunable of the engine. Lengths are normalized units, durations milliseconds,
// angles radians unless the name says otherwise.
struct EngineConfig {
    int schema_version = 1;

    // diagram
    PitchMap pitch;
    double default_node_radius = 0.045;
    int warn_above_nodes = 60;

    // spatial
    SpatialParams spatial;

    // gesture
    double dwell_ms = 300;
    double tap_ms = 250;
    double tap_radius = 0.09;
    double orbit_min = 0.04;
    double orbit_max = 0.22;
    double circle_start_angle = 0.35;
    double flick_ms = 250;
    double flick_dist = 0.12;
    double flick_cone_deg = 30;
    double flick_pair_ms = 200;
    double dome_window_ms = 300;
    double dome_span = 0.5;
    double dome_move_eps = 0.03;
    double radiate_dwell_ms = 150;
    double radiate_start_dist = 0.02;
    double radiate_jitter = 0.01;
    double corridor_lost_ms = 600;
    double listen_window_ms = 5000;
    double speed_window_ms = 100;

    // audio
    double base_note_ms = 250;
    double min_note_ms = 40;
    double speed_ref = 0.5;
    double cycle_duration_ms = 4000;
    double filtered_volume = 0.25;
    double circle_gap_scale = 0.6;

    // query
    double arrive_eps = 0.02;
    double pace_min_ms = 350;
    double pace_max_ms = 1200;
    double pace_dist_ref = 0.7;

    bool operator==(const EngineConfig&) const = default;
};

// Throws ValidationError naming the first offending key.
void validate(const EngineConfig& cfg);

// `key = value` lines with `#` comments. Missing keys keep their defaults; unknown keys and
// malformed lines raise ParseError, out-of-range values ValidationError.
EngineConfig parse_config(const std::string& text);
EngineConfig load_config(const std::filesystem::path& path);

// Every key in a fixed order, values printed in shortest round-trip form.
std::string serialize_config(const EngineConfig& cfg);

// FNV-1a over the serialized form.
std::uint64_t config_hash(const EngineConfig& cfg);

std::uint64_t fnv1a64(std::string_view bytes);

} // namespace sonode
