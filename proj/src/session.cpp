#include "sonode/session.hpp"

#include "sonode/error.hpp"
#include "sonode/graphml.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sonode {

namespace {

bool plain_char(char c)
{
    switch (c) {
    case ' ': case '\t': case '"': case '\\': case '=': case ';': case ',': case '(': case ')': case '[': case ']':
        return false;
    default: return static_cast<unsigned char>(c) >= 0x20;
    }
}

std::string quote(std::string_view s)
{
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
        }
    }
    return out + '"';
}

std::string token(std::string_view s)
{
    if (!s.empty() && std::all_of(s.begin(), s.end(), plain_char))
        return std::string(s);
    return quote(s);
}

std::string shortest(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string element_text(const ElementRef& e)
{
    return std::string(e.is_node() ? "node:" : "link:") + token(e.id);
}

std::string touches_text(const std::vector<Touch>& touches)
{
    std::string out = "[";
    for (std::size_t i = 0; i < touches.size(); ++i) {
        if (i)
            out += ';';
        out += '(' + touches[i].pointer + ',' + shortest(touches[i].position.x) + ',' +
               shortest(touches[i].position.y) + ')';
    }
    return out + ']';
}

// Splits `key=value key="quoted value" key=[...]` into pairs; quoted values are unescaped.
std::vector<std::pair<std::string, std::string>> fields(std::string_view line, int line_no)
{
    auto fail = [&](const std::string& why) {
        return Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": " + why);
    };
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == ' ' || line[i] == '\t') {
            ++i;
            continue;
        }
        const std::size_t eq = line.find('=', i);
        if (eq == std::string_view::npos)
            throw fail("expected key=value");
        std::string key(line.substr(i, eq - i));
        i = eq + 1;
        std::string value;
        if (i < line.size() && line[i] == '"') {
            ++i;
            bool closed = false;
            while (i < line.size()) {
                const char c = line[i++];
                if (c == '"') {
                    closed = true;
                    break;
                }
                if (c == '\\' && i < line.size()) {
                    const char n = line[i++];
                    value += n == 'n' ? '\n' : n == 't' ? '\t' : n == 'r' ? '\r' : n;
                } else {
                    value += c;
                }
            }
            if (!closed)
                throw fail("unterminated string");
        } else if (i < line.size() && line[i] == '[') {
            const std::size_t close = line.find(']', i);
            if (close == std::string_view::npos)
                throw fail("unterminated list");
            value = std::string(line.substr(i, close - i + 1));
            i = close + 1;
        } else {
            const std::size_t end = std::min(line.find(' ', i), line.size());
            value = std::string(line.substr(i, end - i));
            i = end;
        }
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

template <class T>
T number(std::string_view s, int line_no)
{
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
    return v;
}

std::vector<Touch> parse_touches(std::string_view list, int line_no)
{
    auto fail = [&](const std::string& why) {
        return Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": " + why);
    };
    if (list.size() < 2 || list.front() != '[' || list.back() != ']')
        throw fail("touches must be a [...] list");
    list = list.substr(1, list.size() - 2);
    std::vector<Touch> out;
    std::size_t i = 0;
    while (i < list.size()) {
        if (list[i] != '(')
            throw fail("expected '(' in touches");
        const std::size_t close = list.find(')', i);
        if (close == std::string_view::npos)
            throw fail("unterminated touch");
        const std::string_view body = list.substr(i + 1, close - i - 1);
        const std::size_t c1 = body.find(',');
        const std::size_t c2 = c1 == std::string_view::npos ? c1 : body.find(',', c1 + 1);
        if (c2 == std::string_view::npos)
            throw fail("touch needs (pid,x,y)");
        Touch touch;
        touch.pointer = std::string(body.substr(0, c1));
        touch.position = {number<double>(body.substr(c1 + 1, c2 - c1 - 1), line_no),
                          number<double>(body.substr(c2 + 1), line_no)};
        if (touch.pointer.empty() || !std::all_of(touch.pointer.begin(), touch.pointer.end(), plain_char))
            throw fail("bad pointer id '" + touch.pointer + "'");
        const Vec2 p = touch.position;
        if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0))
            throw fail("touch outside the unit square");
        for (const Touch& other : out)
            if (other.pointer == touch.pointer)
                throw fail("pointer '" + touch.pointer + "' appears twice");
        out.push_back(std::move(touch));
        i = close + 1;
        if (i < list.size()) {
            if (list[i] != ';')
                throw fail("touches are separated by ';'");
            ++i;
        }
    }
    return out;
}

// Shared by trace files and the input records of a log.
std::optional<TraceRecord> parse_record(std::string_view line, int line_no, bool log)
{
    auto kv = fields(line, line_no);
    if (kv.empty())
        return std::nullopt;
    if (kv[0].first != "t")
        throw Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": record must start with t=");
    const TimeMs t = number<TimeMs>(kv[0].second, line_no);
    std::size_t next = 1;
    if (log) {
        if (kv.size() < 2 || kv[1].first != "kind")
            throw Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": missing kind");
        if (kv[1].second != "Frame" && kv[1].second != "Say")
            return std::nullopt;
        next = 2;
    }
    if (kv.size() != next + 1)
        throw Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": unexpected fields");
    const auto& [key, value] = kv[next];
    if (key == "touches")
        return TraceRecord::touches({t, parse_touches(value, line_no)});
    if (key == (log ? "text" : "say"))
        return TraceRecord::say(t, value);
    throw Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": unknown field '" + key + "'");
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::FileError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::vector<TraceRecord> parse_trace(std::istream& in)
{
    std::vector<TraceRecord> out;
    std::string line;
    int line_no = 0;
    std::optional<TimeMs> last_frame;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#')
            continue;
        auto record = parse_record(line, line_no, false);
        if (!record)
            continue;
        if (!out.empty() && record->t() < out.back().t())
            throw Error(Errc::NonMonotoneTrace, "line " + std::to_string(line_no) + ": time goes backwards");
        if (record->kind == TraceRecord::Kind::Frame) {
            if (last_frame && record->t() <= *last_frame)
                throw Error(Errc::NonMonotoneTrace, "line " + std::to_string(line_no) + ": repeated frame time");
            last_frame = record->t();
        }
        out.push_back(std::move(*record));
    }
    return out;
}

std::vector<TraceRecord> parse_trace(const std::string& text)
{
    std::istringstream in(text);
    return parse_trace(in);
}

std::vector<TraceRecord> load_trace(const std::filesystem::path& path)
{
    return parse_trace(read_file(path));
}

std::string format_trace_record(const TraceRecord& r)
{
    const std::string t = "t=" + std::to_string(r.t());
    if (r.kind == TraceRecord::Kind::Say)
        return t + " say=" + quote(r.text);
    return t + " touches=" + touches_text(r.frame.touches);
}

std::string format_trace(const std::vector<TraceRecord>& records)
{
    std::string out;
    for (const TraceRecord& r : records)
        out += format_trace_record(r) + '\n';
    return out;
}

std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    if (s == "-0.000000")
        s = "0.000000";
    return s;
}

std::string format_input(const TraceRecord& r)
{
    const std::string t = "t=" + std::to_string(r.t());
    if (r.kind == TraceRecord::Kind::Say)
        return t + " kind=Say text=" + quote(r.text);
    // Input coordinates keep every digit so that a log replays to itself.
    return t + " kind=Frame touches=" + touches_text(r.frame.touches);
}

std::string format_event(const InteractionEvent& e)
{
    std::string out = "t=" + std::to_string(e.t) + " kind=" + std::string(to_string(e.kind));
    auto add = [&](std::string_view key, const std::string& value) {
        out += ' ';
        out += key;
        out += '=';
        out += value;
    };
    if (!e.pointer.empty())
        add("pointer", token(e.pointer));
    if (!e.anchor_pointer.empty())
        add("anchor", token(e.anchor_pointer));
    if (e.element)
        add("element", element_text(e.element));
    if (!e.link.empty())
        add("link", token(e.link));

    switch (e.kind) {
    case EventKind::NodeSwept:
    case EventKind::LinkSwept: add("speed", format_number(e.speed)); break;
    case EventKind::DetailTap: add("tap", std::to_string(e.tap_index)); break;
    case EventKind::CircleStart:
    case EventKind::CircleProgress: add("angle", format_number(e.angle)); break;
    case EventKind::RadiateProgress: add("progress", format_number(e.progress)); break;
    case EventKind::SearchResults:
    case EventKind::FilterApplied: add("count", std::to_string(e.count)); break;
    case EventKind::DomeStart:
    case EventKind::DomeUpdate: {
        std::string list = "[";
        for (std::size_t i = 0; i < e.contacts.size(); ++i) {
            if (i)
                list += ';';
            list += '(' + format_number(e.contacts[i].x) + ',' + format_number(e.contacts[i].y) + ')';
        }
        add("contacts", list + ']');
        break;
    }
    case EventKind::Guidance: {
        std::string list = "[";
        for (std::size_t i = 0; i < e.words.size(); ++i)
            list += (i ? "," : "") + e.words[i];
        add("words", list + ']');
        add("interval", format_number(e.interval_ms));
        break;
    }
    case EventKind::SpeechCommand: {
        const SpeechCommand& c = e.command;
        add("text", quote(c.text));
        switch (c.kind) {
        case SpeechCommand::Kind::Search:
            add("command", "Search");
            add("query", quote(c.query));
            break;
        case SpeechCommand::Kind::Filter:
            add("command", "Filter");
            add("attribute", quote(c.attribute));
            add("value", quote(c.value));
            break;
        case SpeechCommand::Kind::ClearFilter: add("command", "ClearFilter"); break;
        case SpeechCommand::Kind::Unrecognized: add("command", "Unrecognized"); break;
        }
        break;
    }
    default: break;
    }
    return out;
}

std::string format_event(const AudioEvent& e)
{
    std::string out = "t=" + std::to_string(e.t) + " kind=" + std::string(to_string(e.kind));
    auto add = [&](std::string_view key, const std::string& value) {
        out += ' ';
        out += key;
        out += '=';
        out += value;
    };
    auto duration = [&] { add("duration", e.duration_ms ? format_number(*e.duration_ms) : "sustained"); };
    add("voice", token(e.voice));
    if (e.element)
        add("element", element_text(e.element));
    switch (e.kind) {
    case AudioKind::HornNote:
    case AudioKind::StringPluck:
    case AudioKind::Fanfare:
        add("freq", format_number(e.freq));
        duration();
        add("volume", format_number(e.volume));
        break;
    case AudioKind::Tone150:
        add("freq", format_number(e.freq));
        add("on", e.on ? "1" : "0");
        add("volume", format_number(e.volume));
        break;
    case AudioKind::NoiseOverlay:
        add("on", e.on ? "1" : "0");
        duration();
        add("volume", format_number(e.volume));
        break;
    case AudioKind::Bell: duration(); break;
    case AudioKind::Speech:
        add("text", quote(e.text));
        add("interruptible", e.interruptible ? "1" : "0");
        add("volume", format_number(e.volume));
        break;
    case AudioKind::HornStop:
    case AudioKind::StringStop:
    case AudioKind::Silence: break;
    }
    return out;
}

Engine::Engine(const Diagram& d, const EngineConfig& cfg)
    : d_(&d), cfg_(cfg), gestures_(d, cfg), audio_(d, cfg)
{
    validate(cfg_);
}

EngineOutput Engine::frame(const TouchFrame& frame)
{
    EngineOutput out;
    out.events = gestures_.process(frame);
    guide(frame.t, out.events);
    out.audio = audio_.render(out.events, filter_);
    auto due = audio_.advance_to(frame.t, filter_);
    out.audio.insert(out.audio.end(), due.begin(), due.end());
    return out;
}

EngineOutput Engine::say(TimeMs t, std::string_view text)
{
    EngineOutput out;
    out.events.push_back(gestures_.speech(t, text));
    command(out.events.front(), out.events);
    out.audio = audio_.render(out.events, filter_);
    auto due = audio_.advance_to(t, filter_);
    out.audio.insert(out.audio.end(), due.begin(), due.end());
    return out;
}

EngineOutput Engine::feed(const TraceRecord& r)
{
    return r.kind == TraceRecord::Kind::Say ? say(r.t(), r.text) : frame(r.frame);
}

std::optional<Vec2> Engine::guide_finger(std::string* pointer) const
{
    for (const auto& [id, track] : gestures_.state().pointers) {
        if (track.phase == Phase::DomeMember || track.phase == Phase::Idle)
            continue;
        if (pointer)
            *pointer = id;
        return track.pos;
    }
    return std::nullopt;
}

void Engine::command(const InteractionEvent& said, std::vector<InteractionEvent>& out)
{
    InteractionEvent e;
    e.t = said.t;
    e.command = said.command;
    switch (said.command.kind) {
    case SpeechCommand::Kind::Search:
        search_ = search(*d_, said.command.query, guide_finger().value_or(Vec2{0.5, 0.5}));
        e.kind = EventKind::SearchResults;
        e.count = search_.results.size();
        if (search_.active_target)
            e.element = search_.results[*search_.active_target].element;
        guide_pointer_.clear();
        last_words_.clear();
        break;
    case SpeechCommand::Kind::Filter:
        filter_ = apply_filter(*d_, said.command.attribute, said.command.value);
        e.kind = EventKind::FilterApplied;
        e.count = filter_.passing.size();
        break;
    case SpeechCommand::Kind::ClearFilter:
        filter_ = clear_filter(filter_);
        e.kind = EventKind::FilterCleared;
        break;
    case SpeechCommand::Kind::Unrecognized: return;
    }
    out.push_back(std::move(e));
}

void Engine::guide(TimeMs t, std::vector<InteractionEvent>& out)
{
    if (!search_.active_target)
        return;
    std::string pointer;
    const auto finger = guide_finger(&pointer);
    if (!finger || pointer != guide_pointer_) {
        // A new finger hears the direction straight away.
        last_words_.clear();
        guide_pointer_ = finger ? pointer : std::string();
    }
    if (!finger)
        return;

    const GuidancePrompt prompt = guidance_step(search_, *d_, *finger, cfg_);
    InteractionEvent e;
    e.t = t;
    e.pointer = pointer;
    e.element = search_.results[*search_.active_target].element;
    if (prompt.arrived) {
        e.kind = EventKind::GuidanceArrived;
        out.push_back(std::move(e));
        search_.active_target.reset();
        last_words_.clear();
        guide_pointer_.clear();
        return;
    }
    const bool due = static_cast<double>(t - last_prompt_t_) >= prompt.repeat_interval_ms;
    if (prompt.words == last_words_ && !due)
        return;
    e.kind = EventKind::Guidance;
    e.words = prompt.words;
    e.interval_ms = prompt.repeat_interval_ms;
    out.push_back(std::move(e));
    last_words_ = prompt.words;
    last_prompt_t_ = t;
}

std::string SessionLog::text() const
{
    std::string out = header + '\n';
    for (const std::string& r : records)
        out += r + '\n';
    return out;
}

std::string log_header(const Diagram& d, const EngineConfig& cfg)
{
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
    return "header schema=" + std::to_string(log_schema_version) + " engine=" + std::string(engine_version) +
           " diagram=" + quote(d.title()) + " config_hash=" + hash;
}

SessionLog replay(const Diagram& d, const EngineConfig& cfg, const std::vector<TraceRecord>& trace)
{
    SessionLog log;
    log.header = log_header(d, cfg);
    Engine engine(d, cfg);
    for (const TraceRecord& r : trace) {
        log.records.push_back(format_input(r));
        const EngineOutput out = engine.feed(r);
        for (const InteractionEvent& e : out.events)
            log.records.push_back(format_event(e));
        for (const AudioEvent& a : out.audio)
            log.records.push_back(format_event(a));
    }
    return log;
}

SessionLog run_replay(const std::filesystem::path& diagram_path, const std::filesystem::path& trace_path,
                      const std::optional<std::filesystem::path>& config_path)
{
    const EngineConfig cfg = config_path ? load_config(*config_path) : EngineConfig{};
    LoadOptions options;
    options.default_node_radius = cfg.default_node_radius;
    options.warn_above_nodes = static_cast<std::size_t>(cfg.warn_above_nodes);
    const Diagram d = load_graphml_file(diagram_path, options);
    return replay(d, cfg, load_trace(trace_path));
}

SessionLog parse_log(const std::string& text)
{
    SessionLog log;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("header ", 0) != 0)
        throw Error(Errc::SchemaError, "log has no header line");
    log.header = line;
    bool found = false;
    for (const auto& [key, value] : fields(std::string_view(line).substr(7), 1)) {
        if (key == "schema") {
            log.schema_version = number<int>(value, 1);
            found = true;
        }
    }
    if (!found)
        throw Error(Errc::SchemaError, "header lacks schema version");
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        log.records.push_back(line);
    }
    return log;
}

SessionLog load_log(const std::filesystem::path& path) { return parse_log(read_file(path)); }

std::vector<TraceRecord> inputs_from_log(const SessionLog& log)
{
    std::vector<TraceRecord> out;
    for (std::size_t i = 0; i < log.records.size(); ++i)
        if (auto r = parse_record(log.records[i], static_cast<int>(i) + 2, true))
            out.push_back(std::move(*r));
    return out;
}

std::string diff_logs(const SessionLog& a, const SessionLog& b)
{
    if (a.schema_version != b.schema_version)
        throw Error(Errc::VersionMismatch, "log schema " + std::to_string(a.schema_version) + " vs " +
                                               std::to_string(b.schema_version));
    auto line_of = [](const SessionLog& log, std::size_t i) -> std::string {
        if (i == 0)
            return log.header;
        return i <= log.records.size() ? log.records[i - 1] : "<end of log>";
    };
    const std::size_t n = std::max(a.records.size(), b.records.size()) + 1;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string x = line_of(a, i);
        const std::string y = line_of(b, i);
        if (x != y)
            return "first divergence at line " + std::to_string(i + 1) + "\n< " + x + "\n> " + y;
    }
    return "identical";
}

} // namespace sonode
