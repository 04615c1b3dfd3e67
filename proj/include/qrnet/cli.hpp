#pragma once

// Command implementations behind the `qrnet` executable. Each command is a
// pure function of its inputs and flags and reports an exit code:
// 0 success, 1 a legitimate negative verdict (infeasible, flagged), 2 bad input.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qrnet::cli {

enum ExitCode : int { kOk = 0, kNegativeVerdict = 1, kInputError = 2 };

enum class Format { json, csv };

struct CommandResult {
    int exit_code = kOk;
    std::vector<std::filesystem::path> artifacts;
};

struct CheckOptions {
    std::filesystem::path scenario;
    Format format = Format::json;
};

struct SimulateOptions {
    std::filesystem::path scenario;
    std::optional<std::int64_t> trials;  // overrides n_trials
    std::optional<std::uint64_t> seed;   // overrides seed
    std::filesystem::path out = ".";
};

struct AdversaryOptions {
    std::filesystem::path scenario;
    std::size_t samples = 500;
    std::size_t baseline_samples = 2000;
    std::size_t shots = 1000;
    double threshold_sigma = 3.0;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
};

struct KmsOptions {
    std::optional<std::filesystem::path> config;  // JSON KmsConfig
    std::vector<std::int64_t> n;
    std::string mode = "both";  // full_mesh | hierarchical | both
    std::optional<std::int64_t> cluster_size;
    std::optional<double> per_handshake_time;
    std::optional<double> t_auth;
    std::optional<std::int64_t> parallelism;
    std::optional<std::filesystem::path> out;
    Format format = Format::csv;
};

struct SweepOptions {
    std::filesystem::path scenario;
    std::string param;
    std::vector<double> values;
    std::optional<std::int64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
    Format format = Format::csv;
};

struct ProfilesOptions {
    std::optional<std::filesystem::path> scenario;
    Format format = Format::csv;
};

CommandResult cmd_check(const CheckOptions& opts, std::ostream& out, std::ostream& err);
CommandResult cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
CommandResult cmd_adversary(const AdversaryOptions& opts, std::ostream& out, std::ostream& err);
CommandResult cmd_kms(const KmsOptions& opts, std::ostream& out, std::ostream& err);
CommandResult cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);
CommandResult cmd_profiles(const ProfilesOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches. Always returns 0, 1 or 2.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qrnet::cli
