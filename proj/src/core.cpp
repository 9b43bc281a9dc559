#include "natopt/core.hpp"

#include <cmath>

namespace natopt {

const char* to_string(ConstraintPolicy policy)
{
    switch (policy) {
    case ConstraintPolicy::none: return "none";
    case ConstraintPolicy::reject: return "reject";
    case ConstraintPolicy::repair: return "repair";
    }
    return "none";
}

ConstraintPolicy parse_constraint_policy(const std::string& name)
{
    if (name == "none") return ConstraintPolicy::none;
    if (name == "reject") return ConstraintPolicy::reject;
    if (name == "repair") return ConstraintPolicy::repair;
    throw std::invalid_argument("unknown constraint policy '" + name + "' (expected reject or repair)");
}

void validate(const Problem& problem)
{
    if (problem.dimension <= 0)
        throw ContractViolation("problem '" + problem.name + "': dimension must be positive");
    if (!problem.objective)
        throw ContractViolation("problem '" + problem.name + "': missing objective");
    if (problem.lower.size() != problem.dimension || problem.upper.size() != problem.dimension)
        throw ContractViolation("problem '" + problem.name + "': bounds do not match dimension");
    if (!(problem.lower.array() < problem.upper.array()).all())
        throw ContractViolation("problem '" + problem.name + "': lower bound must be below upper bound");
    if (problem.policy != ConstraintPolicy::none && !problem.feasible)
        throw ContractViolation("problem '" + problem.name + "': constraint policy needs a feasibility predicate");
    if (problem.policy == ConstraintPolicy::repair && !problem.repair)
        throw ContractViolation("problem '" + problem.name + "': repair policy needs a repair map");
}

static void check_dimension(const Problem& problem, const Vector& position)
{
    if (position.size() != problem.dimension)
        throw ContractViolation("dimension mismatch: got " + std::to_string(position.size()) +
                                " coordinates for a " + std::to_string(problem.dimension) +
                                "-dimensional problem");
}

double evaluate(const Problem& problem, const Vector& position)
{
    check_dimension(problem, position);
    return problem.objective(position);
}

Evaluator::Evaluator(const Problem& problem, std::size_t budget)
    : problem_(&problem), budget_(budget)
{
}

double Evaluator::evaluate(const Vector& position)
{
    if (exhausted())
        throw ContractViolation("evaluation budget exhausted");
    double f = natopt::evaluate(*problem_, position);
    ++used_;
    if (!std::isfinite(f)) {
        ++invalid_;
        f = std::numeric_limits<double>::infinity();
    }
    if (f < best_fitness_ || trace_.empty()) {
        if (f < best_fitness_) {
            best_fitness_ = f;
            best_position_ = position;
        }
        trace_.push_back({used_, best_fitness_});
    }
    return f;
}

std::optional<Scored> Evaluator::propose(const Vector& candidate)
{
    switch (problem_->policy) {
    case ConstraintPolicy::none:
        return Scored{candidate, evaluate(candidate)};
    case ConstraintPolicy::reject:
        if (!problem_->feasible(candidate))
            return std::nullopt;
        return Scored{candidate, evaluate(candidate)};
    case ConstraintPolicy::repair: {
        Vector fixed = problem_->feasible(candidate) ? candidate : problem_->repair(candidate);
        double f = evaluate(fixed);
        return Scored{std::move(fixed), f};
    }
    }
    return std::nullopt;
}

Vector clamp_to_bounds(const Vector& position, const Problem& problem)
{
    check_dimension(problem, position);
    return position.cwiseMax(problem.lower).cwiseMin(problem.upper);
}

Vector apply_increment(const Vector& position, const Vector& delta, const Problem& problem)
{
    if (delta.size() != position.size())
        throw ContractViolation("apply_increment: length mismatch");
    if (!delta.allFinite())
        throw ContractViolation("apply_increment: non-finite increment");
    return clamp_to_bounds(position + delta, problem);
}

std::pair<std::size_t, const Individual&> select_best(const Population& population)
{
    if (population.members.empty())
        throw ContractViolation("select_best: empty population");
    std::size_t best = 0;
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (std::isnan(population[i].fitness))
            throw ContractViolation("select_best: NaN fitness");
        if (population[i].fitness < population[best].fitness)
            best = i;
    }
    return {best, population[best]};
}

void refresh_best(Population& population)
{
    population.best_index = select_best(population).first;
}

Individual update_personal_best(Individual individual)
{
    if (!individual.best_fitness || individual.fitness < *individual.best_fitness) {
        individual.best_fitness = individual.fitness;
        individual.best_position = individual.position;
    }
    return individual;
}

} // namespace natopt
