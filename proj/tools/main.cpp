#include <cstdio>
#include <exception>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tradeshock/tradeshock.hpp"

namespace {

struct StageCommand {
    const char* name;
    const char* description;
};

constexpr StageCommand stage_commands[] = {
    {"simulate", "compute shocked forces and write the scoped route reports"},
    {"field", "interpolate the force-difference field onto the grid (needs simulate)"},
    {"sweep", "run the parameter sweeps and classify their response shapes"},
    {"fit", "fit the nested gravity regression chain"},
    {"deltas", "rank trade changes between the two configured years"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gravity-model trade shock engine"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::vector<std::string> stage_names;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_override, "override the configured output directory");
    };
    for (const StageCommand& cmd : stage_commands) {
        add_common(app.add_subcommand(cmd.name, cmd.description));
    }
    CLI::App* all = app.add_subcommand("all", "run every stage in dependency order");
    add_common(all);
    all->add_option("--stage", stage_names,
                    "restrict to these stages (repeatable: simulate, field, sweep, fit, deltas)");

    CLI11_PARSE(app, argc, argv);

    try {
        const CLI::App* chosen = app.get_subcommands().front();
        std::set<tradeshock::Stage> stages;
        if (chosen->get_name() == "all") {
            if (stage_names.empty()) {
                stages = {tradeshock::Stage::simulate, tradeshock::Stage::field,
                          tradeshock::Stage::sweep, tradeshock::Stage::fit,
                          tradeshock::Stage::deltas};
            } else {
                for (const std::string& name : stage_names) {
                    stages.insert(tradeshock::parse_stage(name));
                }
            }
        } else {
            stages.insert(tradeshock::parse_stage(chosen->get_name()));
        }

        tradeshock::RunConfig config = tradeshock::load_config(config_path);
        if (!out_override.empty()) {
            config.out_dir =
                std::filesystem::absolute(std::filesystem::path(out_override)).lexically_normal();
        }
        const tradeshock::RunReport report = tradeshock::run_pipeline(config, stages);
        for (const std::string& line : report.log) {
            std::printf("%s\n", line.c_str());
        }
        return 0;
    } catch (const tradeshock::engine_error& e) {
        std::fprintf(stderr, "error: %s: %s\n", tradeshock::to_string(e.kind()), e.what());
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: internal: %s\n", e.what());
        return 3;
    }
}
