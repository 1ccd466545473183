#pragma once

#include <string>

#include "axvv/sim.hpp"
#include "axvv/sweep.hpp"

namespace axvv {

/// Raised for malformed config text, unknown keys, or bad values; the CLI
/// maps it to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SolverChoice { ns, euler };

struct RunConfig {
    SimConfig sim;
    SolverChoice solver = SolverChoice::ns;
    std::string out_dir;
};

/// Flat `key = value` text ('#' starts a comment).  Unknown keys are errors.
RunConfig run_config_from_text(const std::string& text);
SweepConfig sweep_config_from_text(const std::string& text);

}  // namespace axvv
