#pragma once

#include <string>

#include "fodd/manager.hpp"

namespace fodd {

/// Graphviz rendering. Nodes are numbered by store insertion order, solid
/// edges are true branches, dashed edges false branches, leaves are boxes
/// showing the value and the action tag when present.
std::string to_dot(const Manager& mgr, NodeRef d, const std::string& graph_name = "fodd");

}  // namespace fodd
