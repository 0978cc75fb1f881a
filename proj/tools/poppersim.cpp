// Command-line front end: discrete / continuous / sweep experiments driven
// by JSON run manifests.
#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "popper/io/run.hpp"

int main(int argc, char** argv) {
    using popper::io::Experiment;

    CLI::App app{
        "poppersim: an entangled-pair simulator covering a discrete two-spin\n"
        "coincidence experiment and a continuous slit experiment with\n"
        "momentum-spread statistics"};
    app.require_subcommand(1);

    std::string config, out, format;
    std::uint64_t seed = 0;
    std::int64_t shots = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "run manifest (JSON)")->required();
        sub->add_option("--out", out, "output file path (overrides the manifest)");
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--seed", seed, "sampling seed (overrides manifest and payload)");
        sub->add_option("--shots", shots, "Monte-Carlo shots (discrete runs only)");
    };

    CLI::App* discrete =
        app.add_subcommand("discrete", "two-spin experiment with coincidence counting");
    CLI::App* continuous =
        app.add_subcommand("continuous", "entangled pair, slit conditioning, momentum statistics");
    CLI::App* sweep =
        app.add_subcommand("sweep", "momentum-spread ratio table over pair and slit parameters");
    for (CLI::App* sub : {discrete, continuous, sweep}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage problems count as config errors
    }

    CLI::App* sub = app.get_subcommands().front();
    popper::io::CliOverrides overrides;
    overrides.experiment = sub == discrete    ? Experiment::discrete
                           : sub == continuous ? Experiment::continuous
                                               : Experiment::sweep;
    if (sub->count("--out")) overrides.out = out;
    if (sub->count("--format")) overrides.format = popper::io::parse_format(format);
    if (sub->count("--seed")) overrides.seed = seed;
    if (sub->count("--shots")) overrides.shots = shots;

    return popper::io::run_manifest(config, overrides, std::cerr);
}
