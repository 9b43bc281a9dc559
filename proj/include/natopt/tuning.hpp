#pragma once

#include "natopt/algorithms.hpp"
#include "natopt/core.hpp"
#include "natopt/random.hpp"
#include "natopt/schedule.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace natopt {

struct ParameterBounds {
    std::string name;
    double lower;
    double upper;
};

/// A self-tuning job: tune `algorithm`'s parameters inside `bounds` by running
/// the same algorithm (with its defaults) over the parameter box.
struct TuningTask {
    std::string algorithm;
    std::vector<ParameterBounds> bounds;
    std::vector<Problem> problems;
    std::size_t inner_budget = 2000;      // evaluations per inner run
    std::size_t repetitions = 3;          // inner runs per problem and trial
    std::size_t meta_budget = 50;         // parameter-set trials
    double weight = 0.5;                  // 1: quality only, 0: cost only
    std::size_t population_size = 20;     // inner runs
    std::size_t meta_population = 10;     // meta-optimizer
    std::uint64_t seed = 42;              // inner-run seeds, shared by every trial
    double target_delta = 1e-5;           // target = f_min + target_delta
};

struct TuningTrial {
    std::size_t index;
    ParameterSet parameters;
    double value;
};

struct TuningResult {
    ParameterSet best;
    double best_value = 0.0;
    std::vector<TuningTrial> trials;
    std::size_t inner_evaluations = 0;
};

using MetaObjective = std::function<double(const ParameterSet&)>;

/// Throws std::invalid_argument (or ParameterError) for malformed tasks.
void validate(const TuningTask& task);

/// w * mean(best / initial population mean) + (1 - w) * mean(evals to target
/// / inner budget), unreached targets counting as 1. Every trial reuses the
/// same inner seeds. Lower is better.
double meta_objective(const ParameterSet& params, const TuningTask& task, std::size_t* inner_evaluations = nullptr);

/// Self-tuning against the task's own inner runs.
TuningResult self_tune(const TuningTask& task, RandomStream& stream);

/// Self-tuning against an arbitrary objective over the parameter box.
/// With meta_budget below the meta population this degenerates to uniform
/// random sampling of meta_budget parameter sets.
TuningResult self_tune(const TuningTask& task, const MetaObjective& objective, RandomStream& stream);

/// "trial,<parameter names...>,meta_objective" with one row per trial.
void write_tuning_csv(std::ostream& out, const TuningTask& task, const TuningResult& result);

} // namespace natopt
