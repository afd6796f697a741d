// polaron: ground states of the Ohmic spin-boson model from a JSON config.
//
//   polaron solve --config run.json --bath.alpha_list='[0.3,0.5]' --jobs 2
//
// Exit codes: 0 ok, 2 config error, 3 physics-domain error, 4 convergence
// failure (outputs are still written).

#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "handles.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Multi-polaron ground states of the Ohmic spin-boson model"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(polaron_version()));

    struct Sub {
        const char* name;
        const char* help;
        std::function<int(const cli::RunContext&)> run;
    };
    const Sub subs[] = {
        {"solve", "variational ladder N = 1..N_max for each alpha", cli::cmd_solve},
        {"wigner", "Wigner slices of selected modes", cli::cmd_wigner},
        {"thermal", "Toulouse-line coherence vs temperature against the one-polaron formula", cli::cmd_thermal},
        {"ed-check", "variational ladder against exact diagonalization of a few-mode bath", cli::cmd_ed_check},
        {"discretize", "dump the discretized bath", cli::cmd_discretize},
    };

    std::string config_path;
    std::size_t jobs = 1;
    std::map<CLI::App*, const Sub*> lookup;
    for (const Sub& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("-c,--config", config_path, "JSON config file");
        sub->add_option("-j,--jobs", jobs, "worker threads for sweeps")->envname("POLARON_JOBS")->check(CLI::PositiveNumber);
        sub->allow_extras();
        sub->footer("Any config key can be overridden as --section.key=value, e.g. --bath.alpha=0.5");
        lookup[sub] = &s;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitConfig;
    }

    try {
        for (auto& [sub, s] : lookup) {
            if (!sub->parsed()) continue;
            cli::RunContext ctx;
            ctx.config = cli::default_config();
            if (!config_path.empty()) cli::merge(ctx.config, cli::load_config_file(config_path));
            cli::apply_overrides(ctx.config, sub->remaining());
            ctx.settings = cli::resolve(ctx.config);
            ctx.jobs = jobs;
            return s->run(ctx);
        }
    } catch (const cli::Failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return cli::kExitConfig;
}
