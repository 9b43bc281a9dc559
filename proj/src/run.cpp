#include "natopt/algorithms.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace natopt {

namespace {

constexpr std::size_t max_feasible_draws = 1000000;

Vector draw_in_box(RandomStream& stream, const Problem& problem)
{
    Vector x(problem.dimension);
    for (Eigen::Index k = 0; k < x.size(); ++k)
        x[k] = stream.uniform(problem.lower[k], problem.upper[k]);
    return x;
}

ParameterSet scheduled(const ParameterSet& base, const std::vector<ParameterSchedule>& schedules,
                       const Evaluator& evaluator)
{
    if (schedules.empty())
        return base;
    ParameterSet out = base;
    const double t = static_cast<double>(evaluator.used());
    const double t_max = static_cast<double>(std::max<std::size_t>(evaluator.budget(), 1));
    for (const auto& s : schedules)
        out[s.parameter] = parameter_schedule(s, std::min(t, t_max), t_max);
    return out;
}

} // namespace

Population initialize_population(const AlgorithmDescriptor& descriptor, std::size_t size,
                                 RandomStream& stream, Evaluator& evaluator)
{
    const Problem& problem = evaluator.problem();
    Population population;
    population.members.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        Individual m;
        m.position = draw_in_box(stream, problem);
        if (problem.policy == ConstraintPolicy::reject) {
            std::size_t draws = 1;
            while (!problem.feasible(m.position)) {
                if (++draws > max_feasible_draws)
                    throw std::runtime_error("initialization: no feasible point found for '" + problem.name + "'");
                m.position = draw_in_box(stream, problem);
            }
        }
        if (!evaluator.exhausted()) {
            auto scored = evaluator.propose(m.position);
            m.position = std::move(scored->position);
            m.fitness = scored->fitness;
        }
        if (descriptor.uses_velocity)
            m.velocity = Vector::Zero(problem.dimension);
        if (descriptor.name == "pso") {
            m.best_position = m.position;
            m.best_fitness = m.fitness;
        }
        population.members.push_back(std::move(m));
    }
    refresh_best(population);
    return population;
}

RunRecord run(const AlgorithmDescriptor& descriptor, const ParameterSet& parameters, const Problem& problem,
              const RunSettings& settings, RandomStream& stream)
{
    validate(problem);
    const std::size_t n = settings.population_size;
    if (n < descriptor.min_population)
        throw ContractViolation(descriptor.name + " needs a population of at least " +
                                std::to_string(descriptor.min_population));
    if (settings.budget < n && !settings.allow_partial_initialization)
        throw ContractViolation("run: budget must cover the initial population");
    const ParameterSet resolved = resolve_parameters(descriptor, parameters);
    for (const auto& s : settings.schedules)
        if (!descriptor.find(s.parameter))
            throw ParameterError("algorithm '" + descriptor.name + "' has no parameter '" + s.parameter + "'");
    if (descriptor.name == "ga" && GAParams::from(resolved).elite_count >= n)
        throw ParameterError("parameter elite_count of ga must be smaller than the population size");

    const auto t0 = std::chrono::steady_clock::now();
    Evaluator evaluator(problem, settings.budget);
    Population population = initialize_population(descriptor, n, stream, evaluator);

    RunRecord record;
    record.algorithm = descriptor.name;
    record.problem = problem.name;
    record.dimension = problem.dimension;
    record.master_seed = stream.master_seed();
    record.stream_id = stream.stream_id();
    record.engine_seed = stream.engine_seed();
    record.parameters = resolved;
    record.budget = settings.budget;
    {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& m : population.members)
            if (std::isfinite(m.fitness)) {
                sum += m.fitness;
                ++count;
            }
        record.initial_mean_fitness = count ? sum / static_cast<double>(count) : 0.0;
    }

    SAState sa;
    if (descriptor.name == "sa") {
        sa.current = population.best();
        sa.best = sa.current;
        sa.temperature = SAParams::from(resolved).initial_temperature;
    }

    std::size_t idle = 0;
    while (!evaluator.exhausted() && idle < settings.max_idle_iterations) {
        const ParameterSet p = scheduled(resolved, settings.schedules, evaluator);
        const std::size_t before = evaluator.used();
        const std::string& name = descriptor.name;
        if (name == "gd") {
            // too little budget left for another gradient
            if (evaluator.remaining() < 2 * static_cast<std::size_t>(problem.dimension) + 1)
                break;
            gd_step(population, GDParams::from(p), stream, evaluator);
        } else if (name == "de") {
            de_step(population, DEParams::from(p), stream, evaluator);
        } else if (name == "pso") {
            PSOParams pp = PSOParams::from(p);
            pp.per_coordinate = settings.pso_per_coordinate;
            pso_step(population, pp, stream, evaluator);
        } else if (name == "fa") {
            fa_step(population, FAParams::from(p), stream, evaluator);
        } else if (name == "ba") {
            ba_step(population, BAParams::from(p), stream, evaluator);
        } else if (name == "cs") {
            cs_step(population, CSParams::from(p), stream, evaluator);
        } else if (name == "fpa") {
            fpa_step(population, FPAParams::from(p), stream, evaluator);
        } else if (name == "ga") {
            ga_step(population, GAParams::from(p), stream, evaluator);
        } else if (name == "sa") {
            SAParams sp = SAParams::from(p);
            sa_step(sa, sp, stream, evaluator);
        } else {
            throw ParameterError("unknown algorithm '" + name + "'");
        }
        idle = evaluator.used() == before ? idle + 1 : 0;
    }

    record.evaluations = evaluator.used();
    record.trace = evaluator.trace();
    record.best_fitness = evaluator.best_fitness();
    record.best_position = evaluator.best_position();
    record.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return record;
}

RunRecord run(std::string_view algorithm, const ParameterSet& parameters, const Problem& problem,
              const RunSettings& settings, RandomStream& stream)
{
    return run(find_algorithm(algorithm), parameters, problem, settings, stream);
}

} // namespace natopt
