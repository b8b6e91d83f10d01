#include "fodd/bundle.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fodd/dot.hpp"
#include "fodd/error.hpp"

namespace fodd {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

nlohmann::ordered_json number(const Rational& r) {
  return {{"exact", to_exact_string(r)}, {"decimal", to_decimal_string(r)}};
}

}  // namespace

std::string trace_jsonl(const Manager& mgr, const DomainSpec& spec, const SolveTrace& trace) {
  std::string out;
  for (const auto& step : trace.steps) {
    nlohmann::ordered_json rec;
    rec["generation"] = step.generation;
    rec["outer"] = step.outer;
    rec["kind"] = to_string(step.kind);
    rec["nodes"] = step.nodes;
    rec["max_leaf"] = number(step.max_leaf);
    rec["norm_bound"] = step.norm_bound ? number(*step.norm_bound) : nlohmann::ordered_json(nullptr);
    rec["value"] = to_expression(mgr, step.value);
    auto rules = decision_list(mgr, spec, step.policy.diagram);
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& r : rules)
      list.push_back({{"condition", r.condition}, {"value", number(r.value)}, {"action", r.action}});
    rec["policy"] = std::move(list);
    out += rec.dump() + "\n";
  }
  return out;
}

void write_bundle(const std::string& dir, const Manager& mgr, const DomainSpec& spec, const SolveResult& result,
                  const ExportFlags& flags) {
  fs::path root(dir);
  fs::create_directories(root);
  write_file(root / "domain.txt", print_domain(spec, mgr));
  write_file(root / "value.expr", to_expression(mgr, result.value) + "\n");
  write_file(root / "policy.expr", to_expression(mgr, result.policy.diagram) + "\n");
  nlohmann::ordered_json summary;
  summary["status"] = result.trace.converged ? "converged" : "iteration-cap";
  summary["threshold"] = number(result.trace.threshold);
  summary["steps"] = result.trace.steps.size();
  summary["outer_iterations"] = result.trace.outer_values.size() - 1;
  summary["warnings"] = result.trace.warnings;
  write_file(root / "summary.json", summary.dump(2) + "\n");
  if (flags.dot) {
    write_file(root / "value.dot", to_dot(mgr, result.value, "value"));
    write_file(root / "policy.dot", to_dot(mgr, result.policy.diagram, "policy"));
  }
  if (flags.list) write_file(root / "policy.list", format_decision_list(decision_list(mgr, spec, result.policy.diagram)));
  if (flags.trace) write_file(root / "trace.jsonl", trace_jsonl(mgr, spec, result.trace));
}

LoadedBundle load_bundle(const std::string& dir, Manager& mgr) {
  fs::path root(dir);
  LoadedBundle out{parse_domain(read_file(root / "domain.txt"), mgr), {}, {}};
  Vocabulary vocab = out.spec.vocabulary();
  out.value = parse_expression(read_file(root / "value.expr"), mgr, vocab);
  out.policy.diagram = parse_expression(read_file(root / "policy.expr"), mgr, vocab);
  return out;
}

}  // namespace fodd
