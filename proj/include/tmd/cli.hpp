#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace tmd {

enum class Method { Auto, Closed, Numeric };
enum class OutputFormat { Csv, Json, Both };

// Unset optionals fall back to the scenario's [run] section, then to built-in defaults.
struct RunConfig {
    std::string command;
    std::filesystem::path scenario;
    std::optional<double> t_end;
    std::optional<int> grid;
    std::optional<double> tol;
    std::optional<int> n_max;
    std::optional<int> steps;
    std::filesystem::path out_dir = ".";
    OutputFormat format = OutputFormat::Both;
    Method method = Method::Auto;
    bool corrupt_factors = false;  // negative control for verify
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitPartial = 2;

int cmd_factors(const RunConfig& cfg);
int cmd_smatrix(const RunConfig& cfg);
int cmd_evolve(const RunConfig& cfg);
int cmd_coherent(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);

// Dispatches on cfg.command; reports failures on stderr and maps them to exit codes.
int run_command(const RunConfig& cfg);

Method parse_method(const std::string& s);
OutputFormat parse_format(const std::string& s);

}  // namespace tmd
