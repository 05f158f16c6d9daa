#include "spdelab/commands.hpp"
#include "spdelab/config.hpp"
#include "spdelab/errors.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>
#include <random>

namespace {

struct Flags {
    std::string config;
    std::vector<std::string> sets;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

void add_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "YAML configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--set", f.sets, "Override a config field, KEY=VALUE with a dotted key (repeatable)");
    sub->add_option("--out", f.out, "Output directory (overrides output.dir)");
    sub->add_option("--seed", f.seed, "Master seed (overrides the config)");
    sub->add_option("--threads", f.threads, "Worker threads, 0 for all cores");
}

std::uint64_t fresh_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace

int main(int argc, char** argv) {
    using namespace spdelab;
    CLI::App app{"Numerical laboratory for moment growth of parabolic SPDEs"};
    app.require_subcommand(1);
    Flags flags;
    const std::map<std::string, std::pair<std::string, std::function<CommandResult(const RunConfig&)>>> commands = {
        {"bounds", {"Analytic Lyapunov bounds and classification flags", cmd_bounds}},
        {"simulate", {"Monte Carlo moment curves and growth-rate fits", cmd_simulate}},
        {"renewal", {"Second moment from the renewal equation", cmd_renewal}},
        {"classify", {"Recurrence, local times and smallness thresholds", cmd_classify}},
    };
    for (const auto& [name, entry] : commands) add_flags(app.add_subcommand(name, entry.first), flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ExitCode::Config);
    }
    const std::string name = app.get_subcommands().front()->get_name();

    std::string out_dir;
    try {
        RunConfig cfg = load_config(flags.config, flags.sets);
        if (!flags.out.empty()) cfg.output.dir = flags.out;
        out_dir = cfg.output.dir;
        if (flags.threads) cfg.threads = cfg.grid.threads = *flags.threads;
        if (flags.seed) cfg.seed = *flags.seed;
        if (!cfg.seed && name == "simulate") {
            cfg.seed = fresh_seed();
            std::cerr << "seed: " << *cfg.seed << "\n";
        }
        if (cfg.seed) cfg.grid.seed = *cfg.seed;

        const CommandResult res = commands.at(name).second(cfg);
        for (const auto& f : res.files) std::cout << f.string() << "\n";
        return 0;
    } catch (const Error& e) {
        const Json err = error_to_json(e);
        std::cerr << err.dump(2) << "\n";
        if (!out_dir.empty()) {
            try {
                write_atomic(std::filesystem::path(out_dir) / "error.json", err.dump(2) + "\n");
            } catch (const Error&) {
                // The error itself is already on stderr.
            }
        }
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
