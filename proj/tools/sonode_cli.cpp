#include "sonode/audio.hpp"
#include "sonode/config.hpp"
#include "sonode/error.hpp"
#include "sonode/graphml.hpp"
#include "sonode/session.hpp"
#include "sonode/spatial.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace sonode;

EngineConfig config_from(const std::string& path)
{
    return path.empty() ? EngineConfig{} : load_config(path);
}

Diagram diagram_from(const std::string& path, const EngineConfig& cfg)
{
    LoadOptions options;
    options.default_node_radius = cfg.default_node_radius;
    options.warn_above_nodes = static_cast<std::size_t>(cfg.warn_above_nodes);
    return load_graphml_file(path, options);
}

void emit(const std::string& text, const std::string& out_path)
{
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw Error(Errc::FileError, "cannot write " + out_path);
    out << text;
}

std::string inspect(const Diagram& d, const EngineConfig& cfg)
{
    std::ostringstream s;
    s << "title " << d.title() << '\n';
    s << "nodes " << d.nodes().size() << '\n';
    s << "links " << d.links().size() << '\n';
    s << "max_degree " << d.max_degree() << '\n';
    if (d.warning())
        s << "warning " << *d.warning() << '\n';

    const QuadrantStats stats = quadrant_stats(d);
    std::size_t most_nodes = 0, fewest_nodes = 0, most_links = 0, fewest_links = 0;
    for (std::size_t q = 0; q < stats.size(); ++q) {
        s << "quadrant " << to_string(static_cast<Quadrant>(q)) << " nodes=" << stats[q].nodes
          << " links=" << stats[q].links << '\n';
        if (stats[q].nodes > stats[most_nodes].nodes) most_nodes = q;
        if (stats[q].nodes < stats[fewest_nodes].nodes) fewest_nodes = q;
        if (stats[q].links > stats[most_links].links) most_links = q;
        if (stats[q].links < stats[fewest_links].links) fewest_links = q;
    }
    s << "most_nodes " << to_string(static_cast<Quadrant>(most_nodes)) << '\n';
    s << "fewest_nodes " << to_string(static_cast<Quadrant>(fewest_nodes)) << '\n';
    s << "most_links " << to_string(static_cast<Quadrant>(most_links)) << '\n';
    s << "fewest_links " << to_string(static_cast<Quadrant>(fewest_links)) << '\n';

    for (const Node& n : d.nodes())
        s << "node " << n.id << " degree=" << node_degree(d, n.id)
          << " pitch=" << format_number(node_pitch(d, n.id, cfg.pitch)) << " label=\"" << n.label << "\"\n";
    for (const Link& l : d.links())
        s << "link " << l.id << " length=" << format_number(link_length(d, l.id))
          << " pitch=" << format_number(link_pitch(d, l.id, cfg.pitch)) << '\n';
    return s.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Touch and audio exploration engine for node-link diagrams"};
    app.require_subcommand(1);

    std::string diagram, trace, config, out;
    std::uint64_t seed = 0;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", out, "write output here instead of stdout");
        sub->add_option("--seed", seed, "accepted for compatibility; the engine is deterministic");
    };

    auto* replay_cmd = app.add_subcommand("replay", "replay a touch trace and print the session log");
    replay_cmd->add_option("--diagram", diagram, "GraphML diagram")->required();
    replay_cmd->add_option("--trace", trace, "touch trace")->required();
    common(replay_cmd);

    auto* inspect_cmd = app.add_subcommand("inspect", "print diagram statistics");
    inspect_cmd->add_option("--diagram", diagram, "GraphML diagram")->required();
    common(inspect_cmd);

    auto* legend_cmd = app.add_subcommand("legend", "print the audio legend as events");
    common(legend_cmd);

    std::vector<std::string> logs;
    auto* diff_cmd = app.add_subcommand("diff", "compare two session logs");
    diff_cmd->add_option("logs", logs, "two log files")->required()->expected(2);
    common(diff_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        const EngineConfig cfg = config_from(config);
        if (*replay_cmd) {
            const SessionLog log =
                run_replay(diagram, trace, config.empty() ? std::nullopt : std::optional<std::filesystem::path>(config));
            emit(log.text(), out);
        } else if (*inspect_cmd) {
            emit(inspect(diagram_from(diagram, cfg), cfg), out);
        } else if (*legend_cmd) {
            std::string text;
            for (const AudioEvent& e : audio_legend(0, cfg))
                text += format_event(e) + '\n';
            emit(text, out);
        } else if (*diff_cmd) {
            const std::string report = diff_logs(load_log(logs[0]), load_log(logs[1]));
            emit(report + '\n', out);
            return report == "identical" ? 0 : 1;
        }
    } catch (const sonode::Error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    return 0;
}
