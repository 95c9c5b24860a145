#include "sonode/graphml.hpp"

#include "sonode/error.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace sonode {

namespace pt = boost::property_tree;

namespace {

struct KeyDecl {
    std::string name;
    std::string domain; // node, edge, graph, all
    std::optional<std::string> default_value;
};

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string attr(const pt::ptree& element, const std::string& name, const std::string& fallback = {})
{
    // '/' as separator: XML attribute names such as attr.name contain dots.
    return element.get<std::string>(pt::ptree::path_type("<xmlattr>/" + name, '/'), fallback);
}

double parse_number(const std::string& text, const std::string& what)
{
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value))
        throw Error(Errc::SchemaViolation, what + " is not a number: '" + t + "'");
    return value;
}

struct RawNode {
    std::string id;
    std::string label;
    Vec2 position;
    std::optional<double> size;
    Attributes attributes;
};

// Collects <data> children of an element, resolving key ids to names, in document order.
std::vector<std::pair<std::string, std::string>> collect_data(const pt::ptree& element,
                                                              const std::map<std::string, KeyDecl>& keys,
                                                              std::string_view domain)
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [tag, child] : element) {
        if (tag != "data")
            continue;
        const std::string key_id = attr(child, "key");
        const auto it = keys.find(key_id);
        std::string name = key_id;
        if (it != keys.end()) {
            if (it->second.domain != "all" && it->second.domain != domain)
                throw Error(Errc::SchemaViolation, "key '" + key_id + "' used outside its domain");
            name = it->second.name;
        }
        out.emplace_back(std::move(name), trim(child.data()));
    }
    // Declared defaults fill in absent keys, after explicit data.
    for (const auto& [id, decl] : keys) {
        if (!decl.default_value || (decl.domain != domain && decl.domain != "all"))
            continue;
        const bool present = std::any_of(out.begin(), out.end(), [&](const auto& kv) { return kv.first == decl.name; });
        if (!present)
            out.emplace_back(decl.name, trim(*decl.default_value));
    }
    return out;
}

bool is_true(const std::string& v) { return v == "true" || v == "1"; }

} // namespace

Diagram load_graphml(std::istream& document, const LoadOptions& options)
{
    pt::ptree tree;
    try {
        pt::read_xml(document, tree);
    } catch (const pt::xml_parser_error& e) {
        throw Error(Errc::MalformedDocument, e.what());
    }
    const auto root = tree.get_child_optional("graphml");
    if (!root)
        throw Error(Errc::MalformedDocument, "missing <graphml> root element");

    std::map<std::string, KeyDecl> keys;
    const pt::ptree* graph = nullptr;
    for (const auto& [tag, child] : *root) {
        if (tag == "key") {
            KeyDecl decl;
            const std::string id = attr(child, "id");
            if (id.empty())
                throw Error(Errc::SchemaViolation, "<key> without id");
            decl.name = attr(child, "attr.name", id);
            decl.domain = attr(child, "for", "all");
            if (const auto def = child.get_child_optional("default"))
                decl.default_value = def->data();
            keys[id] = std::move(decl);
        } else if (tag == "graph" && graph == nullptr) {
            graph = &child;
        }
    }
    if (graph == nullptr)
        throw Error(Errc::SchemaViolation, "document contains no <graph>");
    if (attr(*graph, "edgedefault", "undirected") == "directed")
        throw Error(Errc::UnsupportedFeature, "directed graphs are not supported");

    std::string title = attr(*graph, "id");
    std::string alt_text;
    for (auto& [name, value] : collect_data(*graph, keys, "graph")) {
        if (name == "title")
            title = value;
        else if (name == "alt_text")
            alt_text = value;
    }

    std::vector<RawNode> raw_nodes;
    std::vector<Link> links;
    for (const auto& [tag, child] : *graph) {
        if (tag == "node") {
            if (child.get_child_optional("graph"))
                throw Error(Errc::UnsupportedFeature, "nested graphs are not supported");
            RawNode n;
            n.id = attr(child, "id");
            if (n.id.empty())
                throw Error(Errc::SchemaViolation, "<node> without id");
            bool has_x = false, has_y = false, has_label = false;
            for (auto& [name, value] : collect_data(child, keys, "node")) {
                if (name == "x") {
                    n.position.x = parse_number(value, "node '" + n.id + "' x");
                    has_x = true;
                } else if (name == "y") {
                    n.position.y = parse_number(value, "node '" + n.id + "' y");
                    has_y = true;
                } else if (name == "label") {
                    n.label = value;
                    has_label = true;
                } else if (name == "size") {
                    n.size = parse_number(value, "node '" + n.id + "' size");
                } else {
                    n.attributes.emplace_back(name, value);
                }
            }
            if (!has_x || !has_y || !has_label)
                throw Error(Errc::SchemaViolation, "node '" + n.id + "' lacks x, y or label");
            raw_nodes.push_back(std::move(n));
        } else if (tag == "edge") {
            if (is_true(attr(child, "directed", "false")))
                throw Error(Errc::UnsupportedFeature, "directed edges are not supported");
            Link l;
            l.id = attr(child, "id");
            if (l.id.empty())
                l.id = "e" + std::to_string(links.size());
            l.source = attr(child, "source");
            l.target = attr(child, "target");
            if (l.source.empty() || l.target.empty())
                throw Error(Errc::SchemaViolation, "edge '" + l.id + "' lacks source or target");
            for (auto& [name, value] : collect_data(child, keys, "edge")) {
                if (name == "label")
                    l.label = value;
                else
                    l.attributes.emplace_back(name, value);
            }
            links.push_back(std::move(l));
        } else if (tag == "hyperedge") {
            throw Error(Errc::UnsupportedFeature, "hyperedges are not supported");
        }
    }
    if (raw_nodes.empty())
        throw Error(Errc::EmptyDiagram, "graph has no nodes");

    double min_x = raw_nodes.front().position.x, max_x = min_x;
    double min_y = raw_nodes.front().position.y, max_y = min_y;
    for (const RawNode& n : raw_nodes) {
        min_x = std::min(min_x, n.position.x);
        max_x = std::max(max_x, n.position.x);
        min_y = std::min(min_y, n.position.y);
        max_y = std::max(max_y, n.position.y);
    }
    const double width = max_x - min_x;
    const double height = max_y - min_y;
    const double scale = std::max(width, height);
    const double unit = scale > 0.0 ? scale : 1.0;
    const double offset_x = scale > 0.0 ? (1.0 - width / scale) / 2.0 : 0.5;
    const double offset_y = scale > 0.0 ? (1.0 - height / scale) / 2.0 : 0.5;

    std::vector<Node> nodes;
    nodes.reserve(raw_nodes.size());
    for (RawNode& r : raw_nodes) {
        Node n;
        n.id = std::move(r.id);
        n.label = std::move(r.label);
        n.position = {std::clamp((r.position.x - min_x) / unit + offset_x, 0.0, 1.0),
                      std::clamp((r.position.y - min_y) / unit + offset_y, 0.0, 1.0)};
        n.radius = r.size ? *r.size / unit : options.default_node_radius;
        n.attributes = std::move(r.attributes);
        nodes.push_back(std::move(n));
    }

    Diagram d(std::move(title), std::move(alt_text), std::move(nodes), std::move(links));
    if (d.nodes().size() > options.warn_above_nodes)
        d.set_warning(std::to_string(d.nodes().size()) + " nodes exceeds the recommended " +
                      std::to_string(options.warn_above_nodes));
    return d;
}

Diagram load_graphml(const std::string& document, const LoadOptions& options)
{
    std::istringstream in(document);
    return load_graphml(in, options);
}

Diagram load_graphml_file(const std::filesystem::path& path, const LoadOptions& options)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::FileError, "cannot open " + path.string());
    return load_graphml(in, options);
}

namespace {

std::string escape_xml(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string exact(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// First-appearance order of attribute keys across a set of elements.
template <typename Range>
std::vector<std::string> attribute_keys(const Range& elements)
{
    std::vector<std::string> keys;
    for (const auto& e : elements)
        for (const auto& [k, v] : e.attributes)
            if (std::find(keys.begin(), keys.end(), k) == keys.end())
                keys.push_back(k);
    return keys;
}

} // namespace

void save_graphml(const Diagram& d, std::ostream& out)
{
    const auto node_keys = attribute_keys(d.nodes());
    const auto link_keys = attribute_keys(d.links());

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    out << "  <key id=\"g_title\" for=\"graph\" attr.name=\"title\" attr.type=\"string\"/>\n";
    out << "  <key id=\"g_alt\" for=\"graph\" attr.name=\"alt_text\" attr.type=\"string\"/>\n";
    out << "  <key id=\"n_x\" for=\"node\" attr.name=\"x\" attr.type=\"double\"/>\n";
    out << "  <key id=\"n_y\" for=\"node\" attr.name=\"y\" attr.type=\"double\"/>\n";
    out << "  <key id=\"n_label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
    out << "  <key id=\"n_size\" for=\"node\" attr.name=\"size\" attr.type=\"double\"/>\n";
    out << "  <key id=\"e_label\" for=\"edge\" attr.name=\"label\" attr.type=\"string\"/>\n";
    for (std::size_t i = 0; i < node_keys.size(); ++i)
        out << "  <key id=\"na" << i << "\" for=\"node\" attr.name=\"" << escape_xml(node_keys[i])
            << "\" attr.type=\"string\"/>\n";
    for (std::size_t i = 0; i < link_keys.size(); ++i)
        out << "  <key id=\"ea" << i << "\" for=\"edge\" attr.name=\"" << escape_xml(link_keys[i])
            << "\" attr.type=\"string\"/>\n";
    out << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
    out << "    <data key=\"g_title\">" << escape_xml(d.title()) << "</data>\n";
    out << "    <data key=\"g_alt\">" << escape_xml(d.alt_text()) << "</data>\n";

    auto key_index = [](const std::vector<std::string>& keys, const std::string& k) {
        return std::find(keys.begin(), keys.end(), k) - keys.begin();
    };
    for (const Node& n : d.nodes()) {
        out << "    <node id=\"" << escape_xml(n.id) << "\">\n";
        out << "      <data key=\"n_x\">" << exact(n.position.x) << "</data>\n";
        out << "      <data key=\"n_y\">" << exact(n.position.y) << "</data>\n";
        out << "      <data key=\"n_label\">" << escape_xml(n.label) << "</data>\n";
        out << "      <data key=\"n_size\">" << exact(n.radius) << "</data>\n";
        for (const auto& [k, v] : n.attributes)
            out << "      <data key=\"na" << key_index(node_keys, k) << "\">" << escape_xml(v) << "</data>\n";
        out << "    </node>\n";
    }
    for (const Link& l : d.links()) {
        out << "    <edge id=\"" << escape_xml(l.id) << "\" source=\"" << escape_xml(l.source) << "\" target=\""
            << escape_xml(l.target) << "\">\n";
        out << "      <data key=\"e_label\">" << escape_xml(l.label) << "</data>\n";
        for (const auto& [k, v] : l.attributes)
            out << "      <data key=\"ea" << key_index(link_keys, k) << "\">" << escape_xml(v) << "</data>\n";
        out << "    </edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

std::string to_graphml(const Diagram& d)
{
    std::ostringstream out;
    save_graphml(d, out);
    return out.str();
}

} // namespace sonode
