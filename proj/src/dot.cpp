#include "fodd/dot.hpp"

#include <sstream>

namespace fodd {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const Manager& mgr, NodeRef d, const std::string& graph_name) {
  std::ostringstream os;
  os << "digraph \"" << escape(graph_name) << "\" {\n";
  for (NodeRef x : mgr.reachable(d)) {
    os << "  n" << x.index << " [";
    if (mgr.is_leaf(x)) {
      const Leaf& leaf = mgr.leaf_of(x);
      std::string text = to_decimal_string(leaf.value);
      if (leaf.tag) text += "\\n" + escape(to_string(*leaf.tag));
      os << "shape=box,label=\"" << text << "\"";
    } else {
      os << "shape=ellipse,label=\"" << escape(to_string(mgr.label_of(x))) << "\"";
    }
    os << "];\n";
  }
  for (NodeRef x : mgr.reachable(d)) {
    if (mgr.is_leaf(x)) continue;
    os << "  n" << x.index << " -> n" << mgr.hi(x).index << " [style=solid];\n";
    os << "  n" << x.index << " -> n" << mgr.lo(x).index << " [style=dashed];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace fodd
