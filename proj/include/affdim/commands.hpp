#pragma once

#include "affdim/carpets.hpp"
#include "affdim/error.hpp"
#include "affdim/estimators.hpp"
#include "affdim/ifs.hpp"
#include "affdim/io.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace affdim {

struct RunConfig {
    std::string input;
    std::optional<int> depth;
    std::optional<std::size_t> budget;
    double tol = 1e-13;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::string out;
    bool directions = false;
    std::optional<double> eps;
    std::string suite;
    std::string fixture;
    std::string fixtures_dir;
};

enum ExitCode { kOk = 0, kInputError = 1, kConditionFailure = 2, kBudgetFailure = 3 };

struct CommandResult {
    Json report;
    int exit_code = kOk;
    std::string svg;  // render only
    PointCloud cloud; // render only
};

/// An IFS file or a carpet file, as loaded by every command.
struct System {
    Ifs ifs;
    std::optional<CarpetSpec> carpet;
};
System load_system(const std::string& path);

CommandResult cmd_check(const RunConfig& cfg);
CommandResult cmd_dims(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_render(const RunConfig& cfg);
CommandResult cmd_carpet(const RunConfig& cfg);

/// Exit code for an error escaping a command.
int exit_code_for(const Error& e);

/// Largest eps (within 1e-6) with s_eps(spec, default extra) < mackay, or 0.5.
double eps_threshold(const CarpetSpec& spec);

} // namespace affdim
