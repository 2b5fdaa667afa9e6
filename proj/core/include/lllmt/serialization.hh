#pragma once

#include <lllmt/criteria.hh>
#include <lllmt/parallel.hh>
#include <lllmt/sequential.hh>
#include <lllmt/vcmep.hh>

#include <nlohmann/json.hpp>

#include <iosfwd>

namespace lllmt {

// JSON shapes used by the command-line tool. Non-finite numbers are written
// as null and read back as +infinity.

[[nodiscard]] auto to_json(const Criterion & c) -> nlohmann::json;
[[nodiscard]] auto criterion_from_json(const nlohmann::json & j) -> Criterion;

/// {"kind", "epsilon", "relation", "W", "satisfied", "events": [{"id", "mu", "rhs", "ok"}]}
[[nodiscard]] auto to_json(const CriterionReport & r) -> nlohmann::json;
[[nodiscard]] auto report_from_json(const nlohmann::json & j) -> CriterionReport;

[[nodiscard]] auto to_json(const MuSearchResult & r) -> nlohmann::json;
[[nodiscard]] auto to_json(const RunStats & s) -> nlohmann::json;
[[nodiscard]] auto to_json(const BatchStats & s) -> nlohmann::json;
[[nodiscard]] auto to_json(const DistributionEstimate & e) -> nlohmann::json;
[[nodiscard]] auto to_json(const SubRoundRecord & r) -> nlohmann::json;
/// Summary without the trace or log.
[[nodiscard]] auto to_json(const ParallelResult & r) -> nlohmann::json;
[[nodiscard]] auto to_json(const VcmepResult & r) -> nlohmann::json;

/// JSON lines: first {"initial": [...]}, then one {"t", "event", "values": [[var, value], ...]} per step.
void write_log_jsonl(std::ostream & out, const ExecutionLog & log);
/// Throws InputError (with line number) on malformed input.
[[nodiscard]] auto read_log_jsonl(std::istream & in) -> ExecutionLog;

/// One SubRoundRecord per line.
void write_trace_jsonl(std::ostream & out, const std::vector<SubRoundRecord> & trace);

}
