#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tmd/scenario.hpp"

namespace tmd {

// Optional run defaults carried in a scenario file's [run] section.
struct RunHints {
    std::optional<double> t_end;
    std::optional<int> grid;
    std::optional<double> tol;
    std::optional<int> n_max;
    std::optional<int> steps;
};

struct ScenarioFile {
    Scenario scenario;
    RunHints hints;
};

// INI text: [scenario] with `case` and the case keys, optional [drive] and [run].
// Relative table paths resolve against base_dir.
ScenarioFile parse_scenario(const std::string& text,
                            const std::filesystem::path& base_dir = ".");
ScenarioFile load_scenario(const std::filesystem::path& path);

inline const std::vector<std::string> kTableHeader = {
    "t", "w11", "w22", "re_w12", "im_w12", "re_F1", "im_F1", "re_F2", "im_F2", "B"};

std::vector<std::vector<double>> read_table_csv(const std::filesystem::path& path);

// Round-trip formatting, 17 significant digits.
std::string format_number(double x);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void flush();

private:
    std::filesystem::path path_;
    std::string buf_;
};

}  // namespace tmd
