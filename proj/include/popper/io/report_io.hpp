// Deterministic report serialization: fixed key order, floats at 12
// significant digits via locale-independent std::to_chars. Identical inputs
// always produce byte-identical documents, and parse/render is a fixed
// point, so a written report can be re-read and re-emitted losslessly.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "popper/continuous.hpp"
#include "popper/discrete.hpp"
#include "popper/io/manifest.hpp"

namespace popper::io {

std::string format_double(double value);

// --- plain mirrors of the serialized documents ---------------------------

struct LabeledProbs {
    std::vector<std::string> labels;
    std::vector<double> probs;
};

struct LabeledCounts {
    std::vector<std::string> labels;
    std::vector<std::int64_t> counts;
};

struct DiscreteReportDump {
    double alpha = 0, beta = 0;
    std::int64_t shots = 0;
    std::uint64_t seed = 0;
    LabeledProbs unconditional;
    double selection_probability = 0;
    double discarded_probability = 0;
    LabeledProbs conditional;
    std::optional<std::pair<LabeledCounts, LabeledCounts>> counts;  // (unconditional, conditional)
};

struct DistributionDump {
    double mean = 0, stddev = 0, step = 0;
    std::vector<double> points;
    std::vector<double> density;
};

struct ContinuousReportDump {
    std::int64_t n1 = 0, n2 = 0;
    double extent1 = 0, extent2 = 0;
    double sigma_plus = 0, sigma_minus = 0;
    double slit_center = 0, slit_width = 0;
    std::string slit_edge = "hard";
    std::optional<double> smoothing_length;  // soft edges only
    std::optional<double> evolve_time;
    double pass_probability = 0;
    DistributionDump unconditional_p2, conditional_p2, conditional_y2;
};

DiscreteReportDump make_dump(const DiscreteConfig<double>& cfg, const DiscreteReport<double>& report);
ContinuousReportDump make_dump(const ContinuousConfig<double>& cfg, const SpreadReport<double>& report);

std::string render(const DiscreteReportDump& dump);
std::string render(const ContinuousReportDump& dump);

DiscreteReportDump parse_discrete_report(const std::string& json_text);
ContinuousReportDump parse_continuous_report(const std::string& json_text);

// --- sweep table ----------------------------------------------------------

struct SweepRow {
    double sigma_plus = 0, sigma_minus = 0, slit_width = 0;
    bool ok = false;
    double pass_prob = 0, p2_std_uncond = 0, p2_std_cond = 0, ratio = 0;
    double y2_std_cond = 0;  // carried for analysis; not a CSV column
    std::string error;       // non-empty on failed grid points
};

/// Frozen header sigma_plus,sigma_minus,slit_width,pass_prob,p2_std_uncond,
/// p2_std_cond,ratio plus a trailing error column (empty on success rows).
std::string render_sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace popper::io
