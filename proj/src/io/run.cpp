#include "popper/io/run.hpp"

#include <exception>
#include <fstream>

#include "popper/errors.hpp"

namespace popper::io {

namespace {

void write_file(const std::string& path, const std::string& payload) {
    if (path.empty()) throw IoError("no output path: set \"out\" in the manifest or pass --out");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output file " + path);
    out << payload;
    out.flush();
    if (!out) throw IoError("failed while writing " + path);
}

void apply_overrides(RunManifest& manifest, const CliOverrides& overrides) {
    if (overrides.experiment && *overrides.experiment != manifest.experiment)
        throw ConfigError("manifest experiment \"" + to_string(manifest.experiment) +
                          "\" does not match the \"" + to_string(*overrides.experiment) +
                          "\" subcommand");
    if (overrides.out) manifest.out = *overrides.out;
    if (overrides.format) manifest.format = *overrides.format;
    if (overrides.seed) manifest.seed = *overrides.seed;
    if (overrides.shots) {
        if (manifest.experiment != Experiment::discrete)
            throw ConfigError("--shots only applies to the discrete experiment");
        manifest.discrete.shots = *overrides.shots;
    }
    if (manifest.seed) manifest.discrete.seed = *manifest.seed;

    // Report formats are fixed per experiment: JSON for single runs, CSV for
    // sweep tables.
    if (manifest.experiment == Experiment::sweep) {
        if (manifest.format != OutputFormat::csv)
            throw ConfigError("sweep reports are CSV only");
    } else if (manifest.format != OutputFormat::json) {
        throw ConfigError("single-run reports are JSON only");
    }
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    if (cfg.sigma_plus.empty() || cfg.sigma_minus.empty() || cfg.slit_width.empty())
        throw ConfigError("sweep grid must not be empty");
    std::vector<SweepRow> rows;
    rows.reserve(cfg.sigma_plus.size() * cfg.sigma_minus.size() * cfg.slit_width.size());
    for (double sp : cfg.sigma_plus) {
        for (double sm : cfg.sigma_minus) {
            for (double width : cfg.slit_width) {
                SweepRow row;
                row.sigma_plus = sp;
                row.sigma_minus = sm;
                row.slit_width = width;
                try {
                    ContinuousConfig<double> point;
                    point.grid = suggested_grid(sp, sm, cfg.grid_n, cfg.extent_factor);
                    point.sigma_plus = sp;
                    point.sigma_minus = sm;
                    point.slit = SlitAperture<double>{0.0, width, SlitEdge::hard, 0.0};
                    const SpreadReport<double> report = run_popper_continuous(point);
                    row.ok = true;
                    row.pass_prob = report.pass_probability;
                    row.p2_std_uncond = report.unconditional_p2.stddev();
                    row.p2_std_cond = report.conditional_p2.stddev();
                    row.ratio = row.p2_std_cond / row.p2_std_uncond;
                    row.y2_std_cond = report.conditional_y2.stddev();
                } catch (const std::exception& e) {
                    row.ok = false;
                    row.error = e.what();
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

int run_manifest(const std::string& manifest_path, const CliOverrides& overrides,
                 std::ostream& err) {
    try {
        RunManifest manifest = parse_manifest_file(manifest_path);
        apply_overrides(manifest, overrides);

        std::string payload;
        switch (manifest.experiment) {
            case Experiment::discrete: {
                validate(manifest.discrete);
                const auto report = run_coincidence(manifest.discrete);
                payload = render(make_dump(manifest.discrete, report));
                break;
            }
            case Experiment::continuous: {
                validate(manifest.continuous);
                const auto report = run_popper_continuous(manifest.continuous);
                payload = render(make_dump(manifest.continuous, report));
                break;
            }
            case Experiment::sweep: {
                payload = render_sweep_csv(run_sweep(manifest.sweep));
                break;
            }
        }
        write_file(manifest.out, payload);
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace popper::io
