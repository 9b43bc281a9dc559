#pragma once

#include "natopt/algorithms.hpp"
#include "natopt/benchmarks.hpp"
#include "natopt/core.hpp"
#include "natopt/schedule.hpp"
#include "natopt/tuning.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace natopt {

/// Invalid configuration. The message names the offending key.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct AlgorithmEntry {
    std::string name;
    std::string label;  // report name, defaults to name
    ParameterSet parameters;
    std::vector<ParameterSchedule> schedules;
    bool per_coordinate = false;  // PSO draw mode
};

struct ProblemEntry {
    std::string name;
    std::string label;  // report name, defaults to name
    int dimension = 2;
    IslandParams island;
    ConstraintPolicy policy = ConstraintPolicy::repair;  // island only

    Problem build() const;
};

struct ExperimentConfig {
    std::vector<AlgorithmEntry> algorithms;
    std::vector<ProblemEntry> problems;
    std::size_t population_size = 25;
    std::size_t budget = 50000;
    std::size_t runs = 30;
    std::uint64_t seed = 42;
    double delta = 1e-5;
    std::string output = "results";
};

/// Parses and validates a JSON experiment description, filling defaults.
/// Algorithms are names or objects {name, label, params, schedules,
/// per_coordinate}; problems are objects {name, dimension, label, N, a, policy}.
ExperimentConfig parse_config(std::string_view json_text);

/// Runs of one (algorithm, problem) cell in run-index order.
struct CellResult {
    std::size_t algorithm;
    std::size_t problem;
    std::vector<RunRecord> runs;
};

struct ExperimentResult {
    std::vector<CellResult> cells;  // algorithm-major, then problem
};

/// Run r of cell (a, p) draws from RandomStream(seed, run_stream_id(a * |problems| + p, r)).
/// Output does not depend on `threads`.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t threads = 1);

inline constexpr const char* report_header =
    "algorithm,problem,runs,best,worst,mean,std,median,success_rate_obj,success_rate_pos,"
    "mean_evals_to_target,mean_rank";
inline constexpr const char* raw_header =
    "run_id,algorithm,problem,dimension,seed,evals_used,best_f,success_obj,success_pos,wall_ms";

/// One row per cell. Success columns and mean_evals_to_target read "NA" for
/// problems without a known optimum; mean_evals_to_target averages over the
/// runs that reached f_min + delta and reads "NA" when none did. mean_rank is
/// the cell's rank among algorithms on that problem by mean final fitness.
void write_report_csv(std::ostream& out, const ExperimentConfig& config, const ExperimentResult& result);

/// One row per run; wall_ms is the last column.
void write_raw_csv(std::ostream& out, const ExperimentConfig& config, const ExperimentResult& result);

/// Writes report.csv and runs.csv into `directory` (created if missing).
/// Throws std::runtime_error if the files cannot be written.
void write_experiment(const std::filesystem::path& directory, const ExperimentConfig& config,
                      const ExperimentResult& result);

struct TuningConfig {
    TuningTask task;
    std::string output;  // empty: stdout
};

/// {algorithm, bounds: {name: [lo, hi]}, problems, inner_budget, repetitions,
/// meta_budget, weight, population_size, meta_population, seed, target_delta, output}
TuningConfig parse_tuning_config(std::string_view json_text);

/// Stream id of the meta-optimizer's own draws.
inline constexpr std::uint64_t meta_stream_id = ~std::uint64_t{0};

} // namespace natopt
