#pragma once

#include <cstddef>

#include "config.hpp"

namespace cli {

struct RunContext {
    json config;      // fully merged document, echoed into every output header
    Settings settings;
    std::size_t jobs = 1;
};

// Each returns the process exit code; hard failures throw Failure.
int cmd_solve(const RunContext& ctx);
int cmd_wigner(const RunContext& ctx);
int cmd_thermal(const RunContext& ctx);
int cmd_ed_check(const RunContext& ctx);
int cmd_discretize(const RunContext& ctx);

} // namespace cli
