// Run manifests: the JSON config files driving the command-line tool.
// Unknown keys anywhere in a manifest are errors, so a typo cannot silently
// change the physics.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "popper/continuous.hpp"
#include "popper/discrete.hpp"

namespace popper::io {

enum class Experiment { discrete, continuous, sweep };
enum class OutputFormat { json, csv };

/// Cartesian sweep over pair spreads and slit widths; each point runs the
/// continuous protocol on an n x n grid with extents scaled to the state.
struct SweepConfig {
    std::vector<double> sigma_plus;
    std::vector<double> sigma_minus;
    std::vector<double> slit_width;
    Index grid_n = 512;
    double extent_factor = 5.0;
};

struct RunManifest {
    Experiment experiment = Experiment::discrete;
    DiscreteConfig<double> discrete;     // populated when experiment == discrete
    ContinuousConfig<double> continuous; // populated when experiment == continuous
    SweepConfig sweep;                   // populated when experiment == sweep
    std::string out;                     // output path; may come from the CLI instead
    OutputFormat format = OutputFormat::json;
    std::optional<std::uint64_t> seed;   // overrides the payload seed when present
};

/// Parses and validates a manifest file. Read failures raise IoError;
/// malformed or invalid content raises ConfigError naming the problem.
RunManifest parse_manifest_file(const std::string& path);

/// Same, from an in-memory JSON document.
RunManifest parse_manifest_text(const std::string& text);

std::string to_string(Experiment experiment);
std::string to_string(OutputFormat format);
OutputFormat parse_format(const std::string& text);

}  // namespace popper::io
