#pragma once

#include <string>

#include "fodd/solver.hpp"

namespace fodd {

struct ExportFlags {
  bool dot = true;
  bool list = true;
  bool trace = true;
};

/// Writes the result directory:
///   domain.txt    canonical domain echo
///   value.expr    final value diagram (always)
///   policy.expr   final policy diagram with tagged leaves (always)
///   summary.json  status, threshold, step count (always)
///   value.dot, policy.dot      when flags.dot
///   policy.list   decision list  when flags.list
///   trace.jsonl   one record per step  when flags.trace
void write_bundle(const std::string& dir, const Manager& mgr, const DomainSpec& spec, const SolveResult& result,
                  const ExportFlags& flags = {});

/// One JSON object per trace step, newline separated.
std::string trace_jsonl(const Manager& mgr, const DomainSpec& spec, const SolveTrace& trace);

struct LoadedBundle {
  DomainSpec spec;
  NodeRef value;
  PolicyDiagram policy;
};

/// Reads domain.txt, value.expr and policy.expr back. Throws Error.
LoadedBundle load_bundle(const std::string& dir, Manager& mgr);

}  // namespace fodd
