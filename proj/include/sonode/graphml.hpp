#pragma once

#include "sonode/diagram.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace sonode {

struct LoadOptions {
    // Fraction of the shorter bounds side, used when a node carries no `size` key.
    double default_node_radius = 0.045;
    // Diagrams above this node count load with a warning.
    std::size_t warn_above_nodes = 60;
};

// Reads an undirected GraphML document. Nodes need `x`, `y` and `label` data keys; `size` is an
// optional radius in document units; every other key becomes an ordered attribute. The graph may
// carry `title` and `alt_text`. Positions are scaled uniformly into the unit square and centred.
Diagram load_graphml(std::istream& document, const LoadOptions& options = {});
Diagram load_graphml(const std::string& document, const LoadOptions& options = {});
Diagram load_graphml_file(const std::filesystem::path& path, const LoadOptions& options = {});

// Canonical form: keys declared in a fixed order, coordinates in normalized units.
void save_graphml(const Diagram& d, std::ostream& out);
std::string to_graphml(const Diagram& d);

} // namespace sonode
