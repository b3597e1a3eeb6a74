// Command-line front end: batch simulation, convergence studies, kernel
// verification and trajectory post-processing.

#include "vortex/cli.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"2D regularized point-vortex simulator"};
    app.require_subcommand(1);

    vortex::cli::Options opts;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--workers", opts.workers, "worker count for the pairwise sums");
        sub->add_option("--seed", opts.seed, "seed for randomized property suites");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run one simulation from a config file");
    simulate->add_option("--config", opts.config_path, "config file")->required();
    add_common(simulate);

    CLI::App* converge = app.add_subcommand("converge", "run an eps-family convergence study");
    converge->add_option("--config", opts.config_path, "config file")->required();
    add_common(converge);

    CLI::App* kernel_check =
        app.add_subcommand("kernel-check", "verify admissibility and profile identities");
    kernel_check->add_option("kernel", opts.kernel_spec, "blob | alpha | custom:<path>")->required();
    add_common(kernel_check);

    CLI::App* diagnose = app.add_subcommand("diagnose", "recompute diagnostics from a trajectory");
    diagnose->add_option("--trajectory", opts.trajectory_path, "trajectory file")->required();
    diagnose->add_option("--select", opts.select, "comma list: conserved,vmf,decay,weak");
    diagnose->add_option("--radii", opts.radii, "maximal-function radii")->delimiter(',');
    add_common(diagnose);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    if (simulate->parsed()) return vortex::cli::cmd_simulate(opts);
    if (converge->parsed()) return vortex::cli::cmd_converge(opts);
    if (kernel_check->parsed()) return vortex::cli::cmd_kernel_check(opts);
    return vortex::cli::cmd_diagnose(opts);
}
