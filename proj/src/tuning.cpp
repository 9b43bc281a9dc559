#include "natopt/tuning.hpp"

#include "natopt/csv.hpp"
#include "natopt/measures.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace natopt {

void validate(const TuningTask& task)
{
    const AlgorithmDescriptor& d = find_algorithm(task.algorithm);
    if (task.bounds.empty())
        throw std::invalid_argument("tuning: no parameters to tune");
    for (const auto& b : task.bounds) {
        const ParameterSpec* spec = d.find(b.name);
        if (!spec)
            throw ParameterError("algorithm '" + d.name + "' has no parameter '" + b.name + "'");
        if (!(b.lower < b.upper))
            throw std::invalid_argument("tuning bounds for " + b.name + " need lower < upper");
        if (!spec->admits(b.lower) || !spec->admits(b.upper))
            throw ParameterError("tuning bounds for " + b.name + " must lie in " + spec->range_text());
    }
    if (task.meta_budget < 1)
        throw std::invalid_argument("tuning: meta budget must be at least 1");
    if (task.repetitions < 1)
        throw std::invalid_argument("tuning: repetitions must be at least 1");
    if (!(task.weight >= 0.0 && task.weight <= 1.0))
        throw std::invalid_argument("tuning: weight must lie in [0, 1]");
    if (task.inner_budget < task.population_size)
        throw std::invalid_argument("tuning: inner budget must cover the inner population");
}

double meta_objective(const ParameterSet& params, const TuningTask& task, std::size_t* inner_evaluations)
{
    for (const auto& b : task.bounds) {
        auto it = params.find(b.name);
        if (it == params.end() || it->second < b.lower || it->second > b.upper)
            throw ContractViolation("meta_objective: parameter " + b.name + " missing or outside its tuning bounds");
    }
    if (task.problems.empty())
        throw std::invalid_argument("tuning: no problems");
    const AlgorithmDescriptor& d = find_algorithm(task.algorithm);
    RunSettings settings;
    settings.population_size = task.population_size;
    settings.budget = task.inner_budget;

    double quality = 0.0, cost = 0.0;
    std::size_t runs = 0;
    for (std::size_t p = 0; p < task.problems.size(); ++p) {
        const Problem& problem = task.problems[p];
        for (std::size_t r = 0; r < task.repetitions; ++r) {
            RandomStream stream(task.seed, run_stream_id(p, r));
            const RunRecord rec = run(d, params, problem, settings, stream);
            if (inner_evaluations)
                *inner_evaluations += rec.evaluations;
            const double scale = rec.initial_mean_fitness != 0.0 ? rec.initial_mean_fitness : 1.0;
            quality += rec.best_fitness / scale;
            double c = 1.0;
            if (problem.optimum) {
                if (auto hit = evals_to_target(rec, problem.optimum->value + task.target_delta))
                    c = static_cast<double>(*hit) / static_cast<double>(task.inner_budget);
            }
            cost += c;
            ++runs;
        }
    }
    const double n = static_cast<double>(runs);
    return task.weight * (quality / n) + (1.0 - task.weight) * (cost / n);
}

TuningResult self_tune(const TuningTask& task, RandomStream& stream)
{
    std::size_t inner = 0;
    MetaObjective objective = [&](const ParameterSet& p) { return meta_objective(p, task, &inner); };
    TuningResult result = self_tune(task, objective, stream);
    result.inner_evaluations = inner;
    return result;
}

TuningResult self_tune(const TuningTask& task, const MetaObjective& objective, RandomStream& stream)
{
    validate(task);
    const AlgorithmDescriptor& d = find_algorithm(task.algorithm);
    const auto m = static_cast<int>(task.bounds.size());

    TuningResult result;
    auto to_params = [&](const Vector& v) {
        ParameterSet ps;
        for (int k = 0; k < m; ++k) {
            const auto& b = task.bounds[static_cast<std::size_t>(k)];
            double value = std::clamp(v[k], b.lower, b.upper);
            if (d.find(b.name)->integer)
                value = std::clamp(std::round(value), std::ceil(b.lower), std::floor(b.upper));
            ps[b.name] = value;
        }
        return ps;
    };

    Problem meta;
    meta.name = "self-tuning:" + d.name;
    meta.dimension = m;
    meta.lower.resize(m);
    meta.upper.resize(m);
    for (int k = 0; k < m; ++k) {
        meta.lower[k] = task.bounds[static_cast<std::size_t>(k)].lower;
        meta.upper[k] = task.bounds[static_cast<std::size_t>(k)].upper;
    }
    meta.objective = [&](const Vector& v) {
        ParameterSet ps = to_params(v);
        const double value = objective(ps);
        result.trials.push_back({result.trials.size(), std::move(ps), value});
        return value;
    };

    RunSettings settings;
    settings.population_size = std::max(task.meta_population, d.min_population);
    settings.budget = task.meta_budget;
    settings.allow_partial_initialization = true;
    if (d.name == "ga")
        settings.population_size = std::max<std::size_t>(settings.population_size, 2);
    run(d, {}, meta, settings, stream);

    if (result.trials.empty())
        throw std::runtime_error("self_tune: meta-optimizer evaluated no parameter set");
    std::size_t best = 0;
    for (std::size_t i = 1; i < result.trials.size(); ++i)
        if (result.trials[i].value < result.trials[best].value)
            best = i;
    result.best = result.trials[best].parameters;
    result.best_value = result.trials[best].value;
    return result;
}

void write_tuning_csv(std::ostream& out, const TuningTask& task, const TuningResult& result)
{
    std::vector<std::string> header{"trial"};
    for (const auto& b : task.bounds)
        header.push_back(csv::field(b.name));
    header.push_back("meta_objective");
    csv::write_row(out, header);
    for (const auto& t : result.trials) {
        std::vector<std::string> row{std::to_string(t.index)};
        for (const auto& b : task.bounds)
            row.push_back(csv::number(t.parameters.at(b.name)));
        row.push_back(csv::number(t.value));
        csv::write_row(out, row);
    }
}

} // namespace natopt
