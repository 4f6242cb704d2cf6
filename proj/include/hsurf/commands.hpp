#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "hsurf/config.hpp"

namespace hsurf {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

struct CommandIo {
    std::optional<std::string> out;  // primary output path; stdout when absent for JSON commands
    std::optional<std::string> csv;  // optional trajectory CSV
    std::ostream* stdout_stream;
    std::ostream* stderr_stream;
};

int cmd_validate(const RunConfig& cfg, const CommandIo& io);
int cmd_classify(const RunConfig& cfg, const CommandIo& io);
int cmd_phase_plot(const RunConfig& cfg, const CommandIo& io);
int cmd_profile(const RunConfig& cfg, const CommandIo& io);
int cmd_mesh(const RunConfig& cfg, const CommandIo& io);
int cmd_torus_search(const RunConfig& cfg, const CommandIo& io);

// Full command line entry point.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hsurf
