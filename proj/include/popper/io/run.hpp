// Orchestration: load a manifest, apply command-line overrides, run the
// selected experiment, and write the report.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "popper/io/manifest.hpp"
#include "popper/io/report_io.hpp"

namespace popper::io {

struct CliOverrides {
    std::optional<std::string> out;
    std::optional<OutputFormat> format;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> shots;
    std::optional<Experiment> experiment;  // the chosen subcommand, cross-checked
};

/// Runs every sweep grid point in row-major list order (sigma_plus outer,
/// slit width inner). Failures are recorded per row and never abort the
/// sweep.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

/// Full pipeline; exit status semantics: 0 success, 1 config validation,
/// 2 numerical/resolution error, 3 I/O error. Diagnostics go to `err`.
int run_manifest(const std::string& manifest_path, const CliOverrides& overrides,
                 std::ostream& err);

}  // namespace popper::io
