#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qlab/fieldnum.hpp"
#include "qlab/measure.hpp"
#include "qlab/relcheck.hpp"
#include "qlab/scenarios.hpp"

namespace qlab::report {

// Canonical decimal rendering used for every number a report prints, so that
// identical (config, seed) runs produce byte-identical files.
std::string format_double(double v);

// Line-oriented text: one `quantity` record per checked number (label,
// predicted, expected, tolerance, PASS/FAIL), then branches, then notes.
// Quantity and branch records are emitted sorted by label; notes keep their
// narrative order.
std::string to_text(const scenarios::ScenarioReport& report);

// The same content as a JSON document with a stable key order.
std::string to_json(const scenarios::ScenarioReport& report);

// Writes <name>.txt and <name>.json under out_dir (created if missing);
// returns the paths written, text file first.
std::vector<std::filesystem::path> write_files(const scenarios::ScenarioReport& report,
                                               const std::filesystem::path& out_dir);

// Table rendering for the two-point-function sweep: a fixed `columns` header
// line followed by one `row` record per grid point, plus the JSON mirror (an
// array of row objects) — same pairing of files as a scenario report.
std::string sweep_to_text(const std::vector<fieldnum::SweepRow>& rows);
std::string sweep_to_json(const std::vector<fieldnum::SweepRow>& rows);
std::vector<std::filesystem::path> write_sweep_files(const std::vector<fieldnum::SweepRow>& rows,
                                                     const std::string& name,
                                                     const std::filesystem::path& out_dir);

// Adapters: render checker results through the same report pipeline. Values
// without a pinned expectation are carried as notes.
scenarios::ScenarioReport as_report(const measure::EtaReport& eta, std::string name);
scenarios::ScenarioReport as_report(const relcheck::ViolationReport& violation, std::string name);
scenarios::ScenarioReport as_report(const relcheck::FactorizationResult& factorization,
                                    std::string name);

} // namespace qlab::report
