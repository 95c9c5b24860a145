#pragma once

#include "sonode/audio.hpp"
#include "sonode/config.hpp"
#include "sonode/diagram.hpp"
#include "sonode/events.hpp"
#include "sonode/gesture.hpp"
#include "sonode/query.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sonode {

inline constexpr int log_schema_version = 1;
inline constexpr std::string_view engine_version = "0.1.0";

// One line of a trace file: either a touch frame or an utterance already turned into text.
struct TraceRecord {
    enum class Kind { Frame, Say };

    Kind kind = Kind::Frame;
    TouchFrame frame; // frame.t is the record time for both kinds
    std::string text;

    static TraceRecord touches(TouchFrame f) { return {Kind::Frame, std::move(f), {}}; }
    static TraceRecord say(TimeMs t, std::string text) { return {Kind::Say, {t, {}}, std::move(text)}; }
    TimeMs t() const { return frame.t; }
    bool operator==(const TraceRecord&) const = default;
};

// Trace syntax, one record per line (blank lines and `#` comments skipped):
//   t=<ms> touches=[(pid,x,y);(pid,x,y)]
//   t=<ms> say="filter by gender female"
// Times must not decrease. Pointer ids may not contain whitespace or any of `(),;"`.
std::vector<TraceRecord> parse_trace(std::istream& in);
std::vector<TraceRecord> parse_trace(const std::string& text);
std::vector<TraceRecord> load_trace(const std::filesystem::path& path);
std::string format_trace_record(const TraceRecord& r);
std::string format_trace(const std::vector<TraceRecord>& records);

std::string format_number(double v); // fixed, six decimals
std::string format_event(const InteractionEvent& e);
std::string format_event(const AudioEvent& e);
std::string format_input(const TraceRecord& r);

struct EngineOutput {
    std::vector<InteractionEvent> events;
    std::vector<AudioEvent> audio;
};

// Everything the interaction layer does for one diagram: gestures, audio, search, filter and
// follow guidance. Feed it frames and utterances in time order.
class Engine {
public:
    Engine(const Diagram& d, const EngineConfig& cfg);

    EngineOutput frame(const TouchFrame& frame);
    // Throws NotListening unless a flick-down opened the listening window.
    EngineOutput say(TimeMs t, std::string_view text);
    EngineOutput feed(const TraceRecord& r);

    const Diagram& diagram() const { return *d_; }
    const EngineConfig& config() const { return cfg_; }
    const GestureState& gestures() const { return gestures_.state(); }
    const SearchState& search_state() const { return search_; }
    const FilterState& filter() const { return filter_; }

private:
    void command(const InteractionEvent& e, std::vector<InteractionEvent>& out);
    void guide(TimeMs t, std::vector<InteractionEvent>& out);
    std::optional<Vec2> guide_finger(std::string* pointer = nullptr) const;

    const Diagram* d_;
    EngineConfig cfg_;
    GestureRecognizer gestures_;
    AudioRenderer audio_;
    SearchState search_;
    FilterState filter_;
    std::string guide_pointer_;
    std::vector<std::string> last_words_;
    TimeMs last_prompt_t_ = 0;
};

struct SessionLog {
    int schema_version = log_schema_version;
    std::string header;
    std::vector<std::string> records;

    std::string text() const; // header and records, LF terminated
    bool operator==(const SessionLog&) const = default;
};

std::string log_header(const Diagram& d, const EngineConfig& cfg);

// Each input is logged, followed by the interaction events it caused and then their audio.
SessionLog replay(const Diagram& d, const EngineConfig& cfg, const std::vector<TraceRecord>& trace);
SessionLog run_replay(const std::filesystem::path& diagram_path, const std::filesystem::path& trace_path,
                      const std::optional<std::filesystem::path>& config_path = std::nullopt);

// Throws SchemaError when the header is missing or unreadable.
SessionLog parse_log(const std::string& text);
SessionLog load_log(const std::filesystem::path& path);

// The Frame and Say records of a log, ready to be replayed.
std::vector<TraceRecord> inputs_from_log(const SessionLog& log);

// "identical", or the first divergent line with both versions. Throws VersionMismatch.
std::string diff_logs(const SessionLog& a, const SessionLog& b);

} // namespace sonode
