#pragma once

/**
 * @file experiments.hpp
 * Named experiments, their flat key/value configuration and CSV output.
 */

#include "nlcorr/entropy.hpp"
#include "nlcorr/protocols.hpp"
#include "nlcorr/qstate.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace nlcorr {

inline constexpr std::string_view kVersion = "0.3.1";

enum class ProtocolChoice { unset, switching, zeno, both };

struct ExperimentConfig {
    std::string state = "paper-state";
    double a = 8.0;
    double b = 0.5;
    double t1 = 3.5;
    double t2 = 8.0;
    double t_end = 10.0;
    double dt = 1e-3;
    ProtocolChoice protocol = ProtocolChoice::unset;
    Vec3 direction_a{1.0, 0.0, 0.0};
    Vec3 direction_b{1.0, 0.0, 0.0};
    std::string out;
    bool linear_mode = false;
    ZenoMode zeno_mode = ZenoMode::mixture;
    EvolutionMethod method = EvolutionMethod::automatic;

    // entropy-sweep
    double q = 2.0;
    double range_start = 0.1;
    double range_stop = 3.0;
    double range_step = 0.1;
    std::string distribution = "uniform:4";
    double base = 2.0;

    // locality-check
    std::vector<double> b_values{0.0, 0.5, 5.0};
    std::vector<double> t2_values{5.0, 8.0, 20.0};

    // teleport-demo
    std::size_t n_pairs = 10000;
    std::string selection = "both";
    int keep = -1;
    std::uint64_t seed = 2001;
    double coupling = 1.0;

    // history-check
    std::size_t trials = 100;

    // qvn
    Vec3 rho_bloch{0.3, 0.2, 0.5};
    Vec3 field{0.6, 0.0, 0.8};

    /// Parses one entry; throws ConfigError for unknown keys or bad values.
    void set(const std::string &key, const std::string &value);
    /// `key = value` lines; '#' starts a comment.
    void load_file(const std::string &path);
    /// Raw values of every key that was set, for metadata headers.
    [[nodiscard]] const std::map<std::string, std::string> &entries() const noexcept { return raw_; }

    [[nodiscard]] StateVector initial_state() const;
    [[nodiscard]] PairSetup pair_setup() const;

    static const std::vector<std::string> &keys();

  private:
    std::map<std::string, std::string> raw_;
};

struct ResultTable {
    std::string experiment;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> metadata;
    std::vector<std::string> summary;
    bool passed = true;
};

/// Fixed 12-significant-digit formatting; -0 prints as 0.
std::string format_number(double v);
/// Metadata lines prefixed '#', then the header and rows, '\n' line endings.
std::string to_csv(const ResultTable &table);
/// Writes to a temporary sibling file and renames it over `path`.
void write_atomically(const std::string &path, const std::string &contents);

ResultTable run_figure2(const ExperimentConfig &config);
ResultTable run_figure3(const ExperimentConfig &config);
ResultTable run_entropy_sweep(const ExperimentConfig &config);
ResultTable run_locality_check(const ExperimentConfig &config);
ResultTable run_teleport_demo(const ExperimentConfig &config);
ResultTable run_history_check(const ExperimentConfig &config);
ResultTable run_qvn(const ExperimentConfig &config);

/// Dispatch by subcommand name; throws ConfigError for unknown names.
ResultTable run_experiment(const std::string &name, const ExperimentConfig &config);
const std::vector<std::string> &experiment_names();

} // namespace nlcorr
