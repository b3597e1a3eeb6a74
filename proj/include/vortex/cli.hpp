#pragma once

#include <string>
#include <vector>

namespace vortex::cli {

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    int workers = 1;
    unsigned long seed = 0; // randomized property suites only
    // diagnose
    std::string trajectory_path;
    std::string select = "conserved";
    std::vector<double> radii = {0.02, 0.05, 0.1, 0.2};
    // kernel-check
    std::string kernel_spec;
};

// Exit codes: 0 success, 1 configuration/user error, 2 numerical abort.
int cmd_simulate(const Options& opts);
int cmd_converge(const Options& opts);
int cmd_kernel_check(const Options& opts);
int cmd_diagnose(const Options& opts);

} // namespace vortex::cli
