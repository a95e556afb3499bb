#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "protmeas/coupling_profile.hpp"
#include "protmeas/scaling.hpp"
#include "protmeas/system_model.hpp"

namespace protmeas {

// Experiment configuration in TOML. Every table is optional:
//
//   command = "oracle"            # subcommand when none is given on the CLI
//   out = "results"               # output directory
//   format = "json"               # csv | json | text
//   [system]   energies, observable (rows of numbers or [re, im] pairs), initial_level
//   [profile]  kind, T, turn_on_fraction, area, csv
//   [pointer]  x0, sigma_x, grid_size, grid_span, apparatus = "static" | { free = { mass } }
//   [scan]     x_lo, x_hi, points, fit_x_min, profiles
//   [dyson]    max_order, a, nodes
//   [oracle]   a, steps, tolerance
//
// Errors are ConfigError with a dotted field path and the source line.

struct SystemConfig {
    Eigen::VectorXd energies;
    Eigen::MatrixXcd observable;
    int initial_level = 0;
};

struct ProfileConfig {
    std::string kind = "boxcar";
    double duration = 100.0;
    double turn_on_fraction = 0.2;
    double area = 1.0;
    /// Two-column CSV for sampled profiles.
    std::filesystem::path csv;
};

struct PointerConfig {
    double x0 = 0.0;
    double sigma_x = 1.0;
    int grid_size = 64;
    double grid_span = 10.0;
    ApparatusModel apparatus = StaticApparatus{};
};

struct ScanConfig {
    double x_lo = 0.0;
    double x_hi = kTable1XMax;
    int points = 2000;
    double fit_x_min = 20.0 * 3.14159265358979323846;
    std::vector<std::string> profiles{"boxcar", "triangle", "raised-cosine"};
};

struct DysonConfig {
    int max_order = 2;
    double a = 1.0;
    int nodes = 32;
};

struct OracleConfig {
    double a = 1.0;
    int steps = 0;
    double tolerance = 1e-9;
};

struct ExperimentConfig {
    std::string command;
    std::string out;
    std::string format;
    std::optional<SystemConfig> system;
    ProfileConfig profile;
    PointerConfig pointer;
    ScanConfig scan;
    DysonConfig dyson;
    OracleConfig oracle;
};

/// Parses TOML text; relative paths resolve against `base_dir`.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>",
                              const std::filesystem::path& base_dir = {});
/// Throws IoError when the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

/// System from a TOML file holding a [system] table or top-level keys.
SystemConfig load_system_file(const std::filesystem::path& path);
/// Profile from a TOML file ([profile] table or top-level keys) or a CSV of samples.
ProfileConfig load_profile_file(const std::filesystem::path& path);

/// Two-column (time, value) CSV with an optional header row.
std::pair<std::vector<double>, std::vector<double>> read_profile_csv(const std::filesystem::path& path);

SystemModel make_system(const SystemConfig& config);
CouplingProfile make_profile(const ProfileConfig& config);
PointerModel make_pointer(const PointerConfig& config);

}  // namespace protmeas
