#include "popper/io/manifest.hpp"

#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>

#include "popper/errors.hpp"

namespace popper::io {

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& context) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + context);
    }
}

const json& require(const json& obj, const char* key, const std::string& context) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError("missing key '" + std::string(key) + "' in " + context);
    return *it;
}

double as_number(const json& value, const std::string& what) {
    if (!value.is_number()) throw ConfigError(what + " must be a number");
    return value.get<double>();
}

std::int64_t as_integer(const json& value, const std::string& what) {
    if (!value.is_number_integer()) throw ConfigError(what + " must be an integer");
    return value.get<std::int64_t>();
}

std::uint64_t as_seed(const json& value, const std::string& what) {
    if (!value.is_number_integer() ||
        (!value.is_number_unsigned() && value.get<std::int64_t>() < 0))
        throw ConfigError(what + " must be a non-negative integer");
    return value.get<std::uint64_t>();
}

std::vector<double> as_number_list(const json& value, const std::string& what) {
    if (!value.is_array()) throw ConfigError(what + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(value.size());
    for (const auto& entry : value) out.push_back(as_number(entry, what + " entry"));
    return out;
}

DiscreteConfig<double> parse_discrete(const json& cfg) {
    check_keys(cfg, {"alpha", "beta", "shots", "seed"}, "discrete config");
    DiscreteConfig<double> out;
    out.alpha = as_number(require(cfg, "alpha", "discrete config"), "alpha");
    out.beta = as_number(require(cfg, "beta", "discrete config"), "beta");
    if (cfg.contains("shots")) out.shots = as_integer(cfg["shots"], "shots");
    if (cfg.contains("seed")) out.seed = as_seed(cfg["seed"], "seed");
    return out;
}

ContinuousConfig<double> parse_continuous(const json& cfg) {
    check_keys(cfg, {"grid", "sigma_plus", "sigma_minus", "slit", "evolve_time"},
               "continuous config");
    ContinuousConfig<double> out;

    const json& grid = require(cfg, "grid", "continuous config");
    if (!grid.is_object()) throw ConfigError("grid must be an object");
    check_keys(grid, {"n1", "n2", "extent1", "extent2"}, "grid");
    out.grid.n1 = as_integer(require(grid, "n1", "grid"), "n1");
    out.grid.n2 = as_integer(require(grid, "n2", "grid"), "n2");
    out.grid.extent1 = as_number(require(grid, "extent1", "grid"), "extent1");
    out.grid.extent2 = as_number(require(grid, "extent2", "grid"), "extent2");

    out.sigma_plus = as_number(require(cfg, "sigma_plus", "continuous config"), "sigma_plus");
    out.sigma_minus = as_number(require(cfg, "sigma_minus", "continuous config"), "sigma_minus");

    const json& slit = require(cfg, "slit", "continuous config");
    if (!slit.is_object()) throw ConfigError("slit must be an object");
    check_keys(slit, {"center", "width", "edge", "smoothing_length"}, "slit");
    out.slit.center = as_number(require(slit, "center", "slit"), "slit center");
    out.slit.width = as_number(require(slit, "width", "slit"), "slit width");
    const json& edge = require(slit, "edge", "slit");
    if (!edge.is_string()) throw ConfigError("slit edge must be \"hard\" or \"soft\"");
    const std::string edge_name = edge.get<std::string>();
    if (edge_name == "hard") {
        out.slit.edge = SlitEdge::hard;
        if (slit.contains("smoothing_length"))
            throw ConfigError("smoothing_length only applies to soft slit edges");
    } else if (edge_name == "soft") {
        out.slit.edge = SlitEdge::soft;
        out.slit.smoothing_length =
            as_number(require(slit, "smoothing_length", "slit"), "smoothing_length");
    } else {
        throw ConfigError("slit edge must be \"hard\" or \"soft\" (got \"" + edge_name + "\")");
    }

    if (cfg.contains("evolve_time"))
        out.evolve_time = as_number(cfg["evolve_time"], "evolve_time");
    return out;
}

SweepConfig parse_sweep(const json& cfg) {
    check_keys(cfg, {"sigma_plus", "sigma_minus", "slit_width", "grid_n", "extent_factor"},
               "sweep config");
    SweepConfig out;
    out.sigma_plus = as_number_list(require(cfg, "sigma_plus", "sweep config"), "sigma_plus");
    out.sigma_minus = as_number_list(require(cfg, "sigma_minus", "sweep config"), "sigma_minus");
    out.slit_width = as_number_list(require(cfg, "slit_width", "sweep config"), "slit_width");
    if (cfg.contains("grid_n")) out.grid_n = as_integer(cfg["grid_n"], "grid_n");
    if (cfg.contains("extent_factor"))
        out.extent_factor = as_number(cfg["extent_factor"], "extent_factor");
    if (out.sigma_plus.empty() || out.sigma_minus.empty() || out.slit_width.empty())
        throw ConfigError("sweep grid must not be empty");
    return out;
}

}  // namespace

std::string to_string(Experiment experiment) {
    switch (experiment) {
        case Experiment::discrete: return "discrete";
        case Experiment::continuous: return "continuous";
        case Experiment::sweep: return "sweep";
    }
    return "?";
}

std::string to_string(OutputFormat format) {
    return format == OutputFormat::json ? "json" : "csv";
}

OutputFormat parse_format(const std::string& text) {
    if (text == "json") return OutputFormat::json;
    if (text == "csv") return OutputFormat::csv;
    throw ConfigError("format must be \"json\" or \"csv\" (got \"" + text + "\")");
}

RunManifest parse_manifest_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("manifest must be a JSON object");
    check_keys(doc, {"experiment", "config", "out", "format", "seed"}, "manifest");

    RunManifest manifest;
    const json& experiment = require(doc, "experiment", "manifest");
    if (!experiment.is_string())
        throw ConfigError("experiment must be \"discrete\", \"continuous\" or \"sweep\"");
    const std::string name = experiment.get<std::string>();
    const json& cfg = require(doc, "config", "manifest");
    if (!cfg.is_object()) throw ConfigError("config must be an object");

    if (name == "discrete") {
        manifest.experiment = Experiment::discrete;
        manifest.discrete = parse_discrete(cfg);
        manifest.format = OutputFormat::json;
    } else if (name == "continuous") {
        manifest.experiment = Experiment::continuous;
        manifest.continuous = parse_continuous(cfg);
        manifest.format = OutputFormat::json;
    } else if (name == "sweep") {
        manifest.experiment = Experiment::sweep;
        manifest.sweep = parse_sweep(cfg);
        manifest.format = OutputFormat::csv;
    } else {
        throw ConfigError("unknown experiment \"" + name + "\"");
    }

    if (doc.contains("out")) {
        if (!doc["out"].is_string()) throw ConfigError("out must be a string path");
        manifest.out = doc["out"].get<std::string>();
    }
    if (doc.contains("format")) {
        if (!doc["format"].is_string()) throw ConfigError("format must be a string");
        manifest.format = parse_format(doc["format"].get<std::string>());
    }
    if (doc.contains("seed")) manifest.seed = as_seed(doc["seed"], "seed");
    return manifest;
}

RunManifest parse_manifest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read manifest file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("failed while reading manifest file " + path);
    return parse_manifest_text(buffer.str());
}

}  // namespace popper::io
