#include "natopt/algorithms.hpp"

#include "natopt/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace natopt {

// ---------------------------------------------------------------------------
// Increments
// ---------------------------------------------------------------------------

Vector de_increment(const Vector& xj, const Vector& xk, double F)
{
    return F * (xj - xk);
}

Vector pso_velocity_increment(const Vector& x, const Vector& global_best, const Vector& personal_best,
                              const PSOParams& params, double eps1, double eps2)
{
    return params.alpha * eps1 * (global_best - x) + params.beta * eps2 * (personal_best - x);
}

Vector pso_velocity_increment(const Vector& x, const Vector& global_best, const Vector& personal_best,
                              const PSOParams& params, const Vector& eps1, const Vector& eps2)
{
    return params.alpha * eps1.cwiseProduct(global_best - x) + params.beta * eps2.cwiseProduct(personal_best - x);
}

Vector fa_increment(const Vector& xi, const Vector& xj, const FAParams& params, const Vector& eps)
{
    const double r2 = (xj - xi).squaredNorm();
    return params.beta0 * std::exp(-params.gamma * r2) * (xj - xi) + params.alpha * eps;
}

double ba_frequency(const BAParams& params, double beta)
{
    return params.f_min + beta * (params.f_max - params.f_min);
}

Vector ba_velocity_increment(const Vector& xi, const Vector& x_best, double frequency)
{
    return (xi - x_best) * frequency;
}

Vector cs_increment(const Vector& xj, const Vector& xk, const CSParams& params, double eps, double levy_step)
{
    return params.alpha * levy_step * heaviside(params.p_a - eps) * (xj - xk);
}

Vector fpa_global_increment(const Vector& xi, const Vector& global_best, double gamma, const Vector& levy)
{
    return gamma * levy.cwiseProduct(global_best - xi);
}

Vector fpa_local_increment(const Vector& xj, const Vector& xk, double eps)
{
    return eps * (xj - xk);
}

Vector single_point_crossover(const Vector& a, const Vector& b, Eigen::Index cut)
{
    if (a.size() != b.size() || cut < 0 || cut > a.size())
        throw ContractViolation("single_point_crossover: bad parents or cut point");
    Vector child(a.size());
    child.head(cut) = a.head(cut);
    child.tail(a.size() - cut) = b.tail(a.size() - cut);
    return child;
}

bool metropolis_accept(double f_old, double f_new, double temperature, double u)
{
    if (f_new <= f_old)
        return true;
    return u < std::exp(-(f_new - f_old) / temperature);
}

Vector finite_difference_gradient(Evaluator& evaluator, const Vector& x)
{
    const auto d = static_cast<std::size_t>(x.size());
    if (evaluator.remaining() < 2 * d)
        throw ContractViolation("finite_difference_gradient: needs 2D evaluations of budget");
    Vector grad(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[k]));
        Vector xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        grad[k] = (evaluator.evaluate(xp) - evaluator.evaluate(xm)) / (2.0 * h);
    }
    if (!grad.allFinite())
        throw std::runtime_error("gradient_step: non-finite gradient");
    return grad;
}

std::pair<std::size_t, std::size_t> draw_distinct_pair(RandomStream& stream, std::size_t n, std::size_t exclude)
{
    if (n < 3)
        throw ContractViolation("draw_distinct_pair: needs at least 3 members");
    std::size_t j = stream.index(n - 1);
    if (j >= exclude)
        ++j;
    std::size_t k = stream.index(n - 2);
    const std::size_t lo = std::min(j, exclude), hi = std::max(j, exclude);
    if (k >= lo)
        ++k;
    if (k >= hi)
        ++k;
    return {j, k};
}

// ---------------------------------------------------------------------------
// Steps
// ---------------------------------------------------------------------------

namespace {

void require_size(const Population& population, std::size_t minimum, const char* who)
{
    if (population.size() < minimum)
        throw ContractViolation(std::string(who) + ": population needs at least " + std::to_string(minimum) +
                                " members");
}

std::vector<Vector> positions_of(const Population& population)
{
    std::vector<Vector> out;
    out.reserve(population.size());
    for (const auto& m : population.members)
        out.push_back(m.position);
    return out;
}

Vector gaussian_vector(RandomStream& stream, Eigen::Index d)
{
    Vector g(d);
    for (Eigen::Index k = 0; k < d; ++k)
        g[k] = stream.gaussian();
    return g;
}

/// Greedy replacement: keep the candidate only if strictly better.
void replace_if_better(Individual& member, const std::optional<Scored>& candidate)
{
    if (candidate && candidate->fitness < member.fitness) {
        member.position = candidate->position;
        member.fitness = candidate->fitness;
    }
}

} // namespace

Vector gradient_step(Evaluator& evaluator, const Vector& position, double eta)
{
    if (!(eta > 0.0))
        throw ContractViolation("gradient_step: eta must be positive");
    return position - eta * finite_difference_gradient(evaluator, position);
}

void gd_step(Population& population, const GDParams& params, RandomStream&, Evaluator& evaluator)
{
    const Problem& problem = evaluator.problem();
    const auto needed = 2 * static_cast<std::size_t>(problem.dimension) + 1;
    for (auto& member : population.members) {
        if (evaluator.remaining() < needed)
            break;
        const Vector grad = finite_difference_gradient(evaluator, member.position);
        auto scored = evaluator.propose(apply_increment(member.position, -params.eta * grad, problem));
        if (scored) {
            member.position = std::move(scored->position);
            member.fitness = scored->fitness;
        }
    }
    refresh_best(population);
}

void de_step(Population& population, const DEParams& params, RandomStream& stream, Evaluator& evaluator)
{
    require_size(population, 4, "de_step");
    if (!(params.F > 0.0 && params.F < 2.0))
        throw ContractViolation("de_step: F must lie in (0, 2)");
    const Problem& problem = evaluator.problem();
    const auto x = positions_of(population);
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (evaluator.exhausted())
            break;
        auto [j, k] = draw_distinct_pair(stream, population.size(), i);
        Vector trial = apply_increment(x[i], de_increment(x[j], x[k], params.F), problem);
        replace_if_better(population[i], evaluator.propose(trial));
    }
    refresh_best(population);
}

void pso_step(Population& population, const PSOParams& params, RandomStream& stream, Evaluator& evaluator)
{
    for (const auto& m : population.members)
        if (!m.velocity || !m.best_position || !m.best_fitness)
            throw ContractViolation("pso_step: every particle needs velocity and personal best");
    const Problem& problem = evaluator.problem();
    const auto d = static_cast<Eigen::Index>(problem.dimension);

    std::size_t g = 0;
    for (std::size_t i = 1; i < population.size(); ++i)
        if (*population[i].best_fitness < *population[g].best_fitness)
            g = i;
    const Vector global_best = *population[g].best_position;

    for (auto& m : population.members) {
        if (evaluator.exhausted())
            break;
        Vector dv;
        if (params.per_coordinate) {
            Vector e1(d), e2(d);
            for (Eigen::Index k = 0; k < d; ++k) {
                e1[k] = stream.uniform01();
                e2[k] = stream.uniform01();
            }
            dv = pso_velocity_increment(m.position, global_best, *m.best_position, params, e1, e2);
        } else {
            const double e1 = stream.uniform01();
            const double e2 = stream.uniform01();
            dv = pso_velocity_increment(m.position, global_best, *m.best_position, params, e1, e2);
        }
        *m.velocity += dv;
        auto scored = evaluator.propose(apply_increment(m.position, *m.velocity, problem));
        if (!scored)
            continue;
        m.position = std::move(scored->position);
        m.fitness = scored->fitness;
        m = update_personal_best(std::move(m));
    }
    refresh_best(population);
}

void fa_step(Population& population, const FAParams& params, RandomStream& stream, Evaluator& evaluator)
{
    require_size(population, 2, "fa_step");
    const Problem& problem = evaluator.problem();
    const auto d = static_cast<Eigen::Index>(problem.dimension);
    const std::size_t n = population.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (evaluator.exhausted())
            break;
        Vector xi = population[i].position;
        const double fi = population[i].fitness;
        bool moved = false;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || !(population[j].fitness < fi))
                continue;
            xi += fa_increment(xi, population[j].position, params, gaussian_vector(stream, d));
            moved = true;
        }
        if (!moved)
            continue;
        if (!xi.allFinite())
            throw ContractViolation("fa_step: non-finite position");
        auto scored = evaluator.propose(clamp_to_bounds(xi, problem));
        if (scored) {
            population[i].position = std::move(scored->position);
            population[i].fitness = scored->fitness;
        }
    }
    refresh_best(population);
}

void ba_step(Population& population, const BAParams& params, RandomStream& stream, Evaluator& evaluator)
{
    for (const auto& m : population.members)
        if (!m.velocity)
            throw ContractViolation("ba_step: every bat needs a velocity");
    const Problem& problem = evaluator.problem();
    refresh_best(population);
    const Vector x_best = population.best().position;
    for (auto& m : population.members) {
        if (evaluator.exhausted())
            break;
        const double f = ba_frequency(params, stream.uniform01());
        *m.velocity += ba_velocity_increment(m.position, x_best, f);
        replace_if_better(m, evaluator.propose(apply_increment(m.position, *m.velocity, problem)));
    }
    refresh_best(population);
}

void cs_step(Population& population, const CSParams& params, RandomStream& stream, Evaluator& evaluator)
{
    require_size(population, 3, "cs_step");
    const Problem& problem = evaluator.problem();
    const auto x = positions_of(population);
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (evaluator.exhausted())
            break;
        auto [j, k] = draw_distinct_pair(stream, population.size(), i);
        const double eps = stream.uniform01();
        const double s = sample_levy_mantegna(stream, params.lambda);
        // closed gate: the nest stays put, nothing to evaluate
        if (heaviside(params.p_a - eps) == 0.0)
            continue;
        Vector candidate = apply_increment(x[i], cs_increment(x[j], x[k], params, eps, s), problem);
        replace_if_better(population[i], evaluator.propose(candidate));
    }
    refresh_best(population);
}

void fpa_step(Population& population, const FPAParams& params, RandomStream& stream, Evaluator& evaluator)
{
    require_size(population, 3, "fpa_step");
    const Problem& problem = evaluator.problem();
    const auto d = static_cast<Eigen::Index>(problem.dimension);
    refresh_best(population);
    const Vector g = population.best().position;
    const auto x = positions_of(population);
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (evaluator.exhausted())
            break;
        Vector dx;
        if (stream.uniform01() < params.p) {
            Vector levy(d);
            for (Eigen::Index k = 0; k < d; ++k)
                levy[k] = sample_levy_mantegna(stream, params.lambda);
            dx = fpa_global_increment(x[i], g, params.gamma, levy);
        } else {
            auto [j, k] = draw_distinct_pair(stream, population.size(), i);
            dx = fpa_local_increment(x[j], x[k], stream.uniform01());
        }
        replace_if_better(population[i], evaluator.propose(apply_increment(x[i], dx, problem)));
    }
    refresh_best(population);
}

void ga_step(Population& population, const GAParams& params, RandomStream& stream, Evaluator& evaluator)
{
    require_size(population, 2, "ga_step");
    const std::size_t n = population.size();
    if (params.elite_count >= n)
        throw ContractViolation("ga_step: elite_count must be smaller than the population");
    const Problem& problem = evaluator.problem();
    const Eigen::Index d = problem.dimension;
    const Vector span = problem.upper - problem.lower;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return population[a].fitness < population[b].fitness; });

    // rank r (0 = best) gets weight n - r
    const std::size_t total_weight = n * (n + 1) / 2;
    auto select_parent = [&]() -> const Individual& {
        std::size_t ticket = stream.index(total_weight);
        for (std::size_t r = 0; r < n; ++r) {
            const std::size_t w = n - r;
            if (ticket < w)
                return population[order[r]];
            ticket -= w;
        }
        return population[order.back()];
    };

    std::vector<Individual> next;
    next.reserve(n);
    for (std::size_t r = 0; r < n; ++r)
        next.push_back(population[order[r]]);

    for (std::size_t slot = params.elite_count; slot < n; ++slot) {
        if (evaluator.exhausted())
            break;
        const Individual& a = select_parent();
        const Individual& b = select_parent();
        Vector child = a.position;
        if (stream.uniform01() < params.crossover_rate && d >= 2) {
            const auto cut = static_cast<Eigen::Index>(1 + stream.index(static_cast<std::size_t>(d - 1)));
            child = single_point_crossover(a.position, b.position, cut);
        }
        for (Eigen::Index k = 0; k < d; ++k)
            if (stream.uniform01() < params.mutation_rate)
                child[k] += stream.gaussian() * params.mutation_scale * span[k];
        auto scored = evaluator.propose(clamp_to_bounds(child, problem));
        Individual offspring;
        if (scored) {
            offspring.position = std::move(scored->position);
            offspring.fitness = scored->fitness;
        } else {
            offspring.position = a.position;
            offspring.fitness = a.fitness;
        }
        next[slot] = std::move(offspring);
    }
    population.members = std::move(next);
    refresh_best(population);
}

void sa_step(SAState& state, const SAParams& params, RandomStream& stream, Evaluator& evaluator)
{
    if (!(state.temperature > 0.0))
        throw ContractViolation("sa_step: temperature must be positive");
    if (evaluator.exhausted())
        return;
    const Problem& problem = evaluator.problem();
    const Vector step = params.step_scale * gaussian_vector(stream, problem.dimension);
    auto scored = evaluator.propose(apply_increment(state.current.position, step, problem));
    if (scored) {
        const double f_old = state.current.fitness;
        const double f_new = scored->fitness;
        const double u = f_new <= f_old ? 0.0 : stream.uniform01();
        if (metropolis_accept(f_old, f_new, state.temperature, u)) {
            state.current.position = std::move(scored->position);
            state.current.fitness = f_new;
            if (f_new < state.best.fitness)
                state.best = state.current;
        }
    }
    state.temperature *= params.cooling_factor;
}

} // namespace natopt
