#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fars/model.hpp"
#include "fars/reliability.hpp"
#include "fars/simulation.hpp"

namespace fars {

// Shortest round-trip decimal representation (locale-independent).
std::string fmt_double(double v);

// Model files: JSON with keys "lambda" (array of rows), "phi", optional
// "psi2" (derived as 1 - communalities when absent). A CSV pair is accepted
// equivalently: pass the lambda CSV path; the phi path is derived by
// replacing "lambda" with "phi" in the filename. Raises ParseError.
FactorModel model_from_json(const std::string& text);
FactorModel load_model_file(const std::filesystem::path& path);
std::string model_to_json(const FactorModel& model);

// Report serialization. Values are clamped to [0, 1] here and only here.
std::string report_to_csv(const ReliabilityReport& report);
std::string report_to_json(const ReliabilityReport& report);
// Fixed-width display table, 3 decimals.
std::string report_table(const ReliabilityReport& report);

// Aggregate table, one row per condition x quantity x factor.
std::string aggregate_to_csv(const std::vector<AggregateRow>& rows);

// Per-replication archive of one condition (optional output).
std::string replications_to_json(const ConditionResult& result);

// Simulation config: {"master_seed": ..., "conditions": [{...}]} with fields
// mirroring SimulationCondition. condition_index is assigned by position.
std::vector<SimulationCondition> conditions_from_json(const std::string& text);

// Write-then-rename so readers never observe partial files.
void atomic_write(const std::filesystem::path& path, const std::string& content);

} // namespace fars
