#include "popper/io/report_io.hpp"

#include <charconv>
#include <json.hpp>
#include <sstream>

#include "popper/errors.hpp"

namespace popper::io {

namespace {

using nlohmann::json;

std::string json_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size() + 2);
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string quoted(const std::string& text) { return "\"" + json_escape(text) + "\""; }

void append_labels(std::string& out, const std::vector<std::string>& labels) {
    out += "[";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) out += ",";
        out += quoted(labels[i]);
    }
    out += "]";
}

void append_numbers(std::string& out, const std::vector<double>& values) {
    out += "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += format_double(values[i]);
    }
    out += "]";
}

void append_counts(std::string& out, const std::vector<std::int64_t>& values) {
    out += "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(values[i]);
    }
    out += "]";
}

void append_probs_object(std::string& out, const LabeledProbs& dist) {
    out += "{\"labels\": ";
    append_labels(out, dist.labels);
    out += ", \"probs\": ";
    append_numbers(out, dist.probs);
    out += "}";
}

void append_counts_object(std::string& out, const LabeledCounts& table) {
    out += "{\"labels\": ";
    append_labels(out, table.labels);
    out += ", \"counts\": ";
    append_counts(out, table.counts);
    out += "}";
}

void append_distribution(std::string& out, const DistributionDump& dist) {
    out += "{\"mean\": " + format_double(dist.mean);
    out += ", \"stddev\": " + format_double(dist.stddev);
    out += ", \"step\": " + format_double(dist.step);
    out += ", \"points\": ";
    append_numbers(out, dist.points);
    out += ", \"density\": ";
    append_numbers(out, dist.density);
    out += "}";
}

LabeledProbs read_probs(const json& obj) {
    LabeledProbs out;
    for (const auto& label : obj.at("labels")) out.labels.push_back(label.get<std::string>());
    for (const auto& p : obj.at("probs")) out.probs.push_back(p.get<double>());
    return out;
}

LabeledCounts read_counts(const json& obj) {
    LabeledCounts out;
    for (const auto& label : obj.at("labels")) out.labels.push_back(label.get<std::string>());
    for (const auto& c : obj.at("counts")) out.counts.push_back(c.get<std::int64_t>());
    return out;
}

DistributionDump read_distribution(const json& obj) {
    DistributionDump out;
    out.mean = obj.at("mean").get<double>();
    out.stddev = obj.at("stddev").get<double>();
    out.step = obj.at("step").get<double>();
    for (const auto& p : obj.at("points")) out.points.push_back(p.get<double>());
    for (const auto& d : obj.at("density")) out.density.push_back(d.get<double>());
    return out;
}

std::vector<double> to_std(const RealVector<double>& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

DistributionDump to_dump(const GridDistribution<double>& dist) {
    DistributionDump out;
    out.mean = dist.mean();
    out.stddev = dist.stddev();
    out.step = dist.step;
    out.points = to_std(dist.points);
    out.density = to_std(dist.density);
    return out;
}

std::string csv_cell(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

DiscreteReportDump make_dump(const DiscreteConfig<double>& cfg,
                             const DiscreteReport<double>& report) {
    DiscreteReportDump dump;
    dump.alpha = cfg.alpha;
    dump.beta = cfg.beta;
    dump.shots = cfg.shots;
    dump.seed = cfg.seed;
    dump.unconditional = {report.unconditional.labels, to_std(report.unconditional.probs)};
    dump.selection_probability = report.selection_probability;
    dump.discarded_probability = report.discarded_probability;
    dump.conditional = {report.conditional.labels, to_std(report.conditional.probs)};
    if (report.counts) {
        dump.counts = std::make_pair(
            LabeledCounts{report.counts->unconditional.labels, report.counts->unconditional.counts},
            LabeledCounts{report.counts->conditional.labels, report.counts->conditional.counts});
    }
    return dump;
}

ContinuousReportDump make_dump(const ContinuousConfig<double>& cfg,
                               const SpreadReport<double>& report) {
    ContinuousReportDump dump;
    dump.n1 = cfg.grid.n1;
    dump.n2 = cfg.grid.n2;
    dump.extent1 = cfg.grid.extent1;
    dump.extent2 = cfg.grid.extent2;
    dump.sigma_plus = cfg.sigma_plus;
    dump.sigma_minus = cfg.sigma_minus;
    dump.slit_center = cfg.slit.center;
    dump.slit_width = cfg.slit.width;
    dump.slit_edge = cfg.slit.edge == SlitEdge::hard ? "hard" : "soft";
    if (cfg.slit.edge == SlitEdge::soft) dump.smoothing_length = cfg.slit.smoothing_length;
    if (cfg.evolve_time) dump.evolve_time = *cfg.evolve_time;
    dump.pass_probability = report.pass_probability;
    dump.unconditional_p2 = to_dump(report.unconditional_p2);
    dump.conditional_p2 = to_dump(report.conditional_p2);
    dump.conditional_y2 = to_dump(report.conditional_y2);
    return dump;
}

std::string render(const DiscreteReportDump& dump) {
    std::string out = "{\n";
    out += "\"experiment\": \"discrete\",\n";
    out += "\"config\": {\"alpha\": " + format_double(dump.alpha) +
           ", \"beta\": " + format_double(dump.beta) +
           ", \"shots\": " + std::to_string(dump.shots) +
           ", \"seed\": " + std::to_string(dump.seed) + "},\n";
    out += "\"unconditional\": ";
    append_probs_object(out, dump.unconditional);
    out += ",\n";
    out += "\"selection_probability\": " + format_double(dump.selection_probability) + ",\n";
    out += "\"discarded_probability\": " + format_double(dump.discarded_probability) + ",\n";
    out += "\"conditional\": ";
    append_probs_object(out, dump.conditional);
    if (dump.counts) {
        out += ",\n\"counts\": {\"unconditional\": ";
        append_counts_object(out, dump.counts->first);
        out += ", \"conditional\": ";
        append_counts_object(out, dump.counts->second);
        out += "}";
    }
    out += "\n}\n";
    return out;
}

std::string render(const ContinuousReportDump& dump) {
    std::string out = "{\n";
    out += "\"experiment\": \"continuous\",\n";
    out += "\"config\": {\"grid\": {\"n1\": " + std::to_string(dump.n1) +
           ", \"n2\": " + std::to_string(dump.n2) +
           ", \"extent1\": " + format_double(dump.extent1) +
           ", \"extent2\": " + format_double(dump.extent2) + "}";
    out += ", \"sigma_plus\": " + format_double(dump.sigma_plus);
    out += ", \"sigma_minus\": " + format_double(dump.sigma_minus);
    out += ", \"slit\": {\"center\": " + format_double(dump.slit_center) +
           ", \"width\": " + format_double(dump.slit_width) + ", \"edge\": \"" + dump.slit_edge +
           "\"";
    if (dump.smoothing_length)
        out += ", \"smoothing_length\": " + format_double(*dump.smoothing_length);
    out += "}";
    if (dump.evolve_time) out += ", \"evolve_time\": " + format_double(*dump.evolve_time);
    out += "},\n";
    out += "\"pass_probability\": " + format_double(dump.pass_probability) + ",\n";
    out += "\"unconditional_p2\": ";
    append_distribution(out, dump.unconditional_p2);
    out += ",\n\"conditional_p2\": ";
    append_distribution(out, dump.conditional_p2);
    out += ",\n\"conditional_y2\": ";
    append_distribution(out, dump.conditional_y2);
    out += "\n}\n";
    return out;
}

DiscreteReportDump parse_discrete_report(const std::string& json_text) {
    try {
        const json doc = json::parse(json_text);
        DiscreteReportDump dump;
        dump.alpha = doc.at("config").at("alpha").get<double>();
        dump.beta = doc.at("config").at("beta").get<double>();
        dump.shots = doc.at("config").at("shots").get<std::int64_t>();
        dump.seed = doc.at("config").at("seed").get<std::uint64_t>();
        dump.unconditional = read_probs(doc.at("unconditional"));
        dump.selection_probability = doc.at("selection_probability").get<double>();
        dump.discarded_probability = doc.at("discarded_probability").get<double>();
        dump.conditional = read_probs(doc.at("conditional"));
        if (doc.contains("counts"))
            dump.counts = std::make_pair(read_counts(doc.at("counts").at("unconditional")),
                                         read_counts(doc.at("counts").at("conditional")));
        return dump;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed discrete report: ") + e.what());
    }
}

ContinuousReportDump parse_continuous_report(const std::string& json_text) {
    try {
        const json doc = json::parse(json_text);
        const json& cfg = doc.at("config");
        ContinuousReportDump dump;
        dump.n1 = cfg.at("grid").at("n1").get<std::int64_t>();
        dump.n2 = cfg.at("grid").at("n2").get<std::int64_t>();
        dump.extent1 = cfg.at("grid").at("extent1").get<double>();
        dump.extent2 = cfg.at("grid").at("extent2").get<double>();
        dump.sigma_plus = cfg.at("sigma_plus").get<double>();
        dump.sigma_minus = cfg.at("sigma_minus").get<double>();
        dump.slit_center = cfg.at("slit").at("center").get<double>();
        dump.slit_width = cfg.at("slit").at("width").get<double>();
        dump.slit_edge = cfg.at("slit").at("edge").get<std::string>();
        if (cfg.at("slit").contains("smoothing_length"))
            dump.smoothing_length = cfg.at("slit").at("smoothing_length").get<double>();
        if (cfg.contains("evolve_time")) dump.evolve_time = cfg.at("evolve_time").get<double>();
        dump.pass_probability = doc.at("pass_probability").get<double>();
        dump.unconditional_p2 = read_distribution(doc.at("unconditional_p2"));
        dump.conditional_p2 = read_distribution(doc.at("conditional_p2"));
        dump.conditional_y2 = read_distribution(doc.at("conditional_y2"));
        return dump;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed continuous report: ") + e.what());
    }
}

std::string render_sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out =
        "sigma_plus,sigma_minus,slit_width,pass_prob,p2_std_uncond,p2_std_cond,ratio,error\n";
    for (const SweepRow& row : rows) {
        out += format_double(row.sigma_plus) + "," + format_double(row.sigma_minus) + "," +
               format_double(row.slit_width) + ",";
        if (row.ok) {
            out += format_double(row.pass_prob) + "," + format_double(row.p2_std_uncond) + "," +
                   format_double(row.p2_std_cond) + "," + format_double(row.ratio) + ",";
        } else {
            out += ",,,," + csv_cell(row.error);
        }
        out += "\n";
    }
    return out;
}

}  // namespace popper::io
