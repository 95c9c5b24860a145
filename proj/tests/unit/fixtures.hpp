#pragma once

#include "sonode/diagram.hpp"
#include "sonode/graphml.hpp"

#include <filesystem>
#include <string>

namespace sonode::testing {

inline std::filesystem::path fixtures_dir() { return SONODE_FIXTURES; }
inline std::filesystem::path diagram_path(const std::string& name) { return fixtures_dir() / "diagrams" / name; }
inline Diagram load_fixture(const std::string& name) { return load_graphml_file(diagram_path(name)); }

inline const char* const all_diagrams[] = {"friends_quadrants.graphml", "seven_friends.graphml", "ring.graphml",
                                           "hub.graphml", "genealogy.graphml"};

} // namespace sonode::testing
