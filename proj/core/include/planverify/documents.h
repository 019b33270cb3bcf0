#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "planverify/constraints.h"
#include "planverify/plan.h"
#include "planverify/verifier.h"

namespace planverify {

/// Reads a JSON or YAML document (chosen by the .yaml/.yml extension).
nlohmann::json load_document(const std::filesystem::path & path);
nlohmann::json parse_document_text(std::string_view text, bool yaml);

/// Pretty-printed JSON with a trailing newline.
std::string dump_json(const nlohmann::json & doc);
void write_text_file(const std::filesystem::path & path, const std::string & text);

// Plan file: {plan_id, product_requirement, tasks: [{id, function, part,
// resource_jid, process, source, dest, predecessors}]}.
TaskPlan parse_plan(const nlohmann::json & doc,
                    const ResourceSet * resources = nullptr);
nlohmann::json plan_to_json(const TaskPlan & plan);
nlohmann::json task_to_json(const Task & task);

// Resource file: {resources: [{id, capabilities, label}]}.
ResourceSet parse_resources(const nlohmann::json & doc);
nlohmann::json resources_to_json(const ResourceSet & resources);

// Constraint file: a list of records, or {constraints: [...]}.
std::vector<StructuredConstraint> parse_constraints(const nlohmann::json & doc);
nlohmann::json constraint_to_json(const StructuredConstraint & c);
nlohmann::json constraints_to_json(
    const std::vector<StructuredConstraint> & constraints);

struct ReportJsonOptions
{
  // When false, wall_time_ms is emitted as null so output is reproducible.
  bool include_timing = false;
};

// {verdict, violations: [{constraint_id, kind, witness_events, message}],
//  explored_states, wall_time_ms}
nlohmann::json report_to_json(const VerificationReport & report,
                              const ReportJsonOptions & options = {});
nlohmann::json violation_to_json(const Violation & v);

/// Multi-line human-readable rendering of a report.
std::string format_report(const VerificationReport & report,
                          bool include_timing = true);

}  // namespace planverify
