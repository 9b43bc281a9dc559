#pragma once

#include "natopt/core.hpp"
#include "natopt/random.hpp"
#include "natopt/schedule.hpp"

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace natopt {

// ---------------------------------------------------------------------------
// Mechanism registry
// ---------------------------------------------------------------------------

/// Ways an increment is generated: gradient-guided move, random permutation,
/// direction-based perturbation, isotropic random walk, long-tailed random walk.
enum class Mechanism { GGM, RP, DBP, IRW, LTRW };

const char* to_string(Mechanism m);

struct ParameterSpec {
    std::string name;
    double lower;
    double upper;
    bool lower_open = false;
    bool upper_open = false;
    double default_value = 0.0;
    bool integer = false;

    bool admits(double value) const;
    /// "(0, 2)", "[0, 1]" and so on.
    std::string range_text() const;
};

struct AlgorithmDescriptor {
    std::string name;          // CLI name: gd, de, pso, fa, ba, cs, fpa, ga, sa
    std::string table_row;     // row label in the mechanism table
    std::vector<ParameterSpec> parameters;
    std::set<Mechanism> position_mechanisms;
    std::set<Mechanism> velocity_mechanisms;
    bool uses_velocity = false;
    std::size_t min_population = 1;

    const ParameterSpec* find(std::string_view parameter) const;
    ParameterSet defaults() const;
};

/// Unknown algorithm name or out-of-schema parameter.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

const std::vector<AlgorithmDescriptor>& algorithm_registry();

/// Throws ParameterError for names not in the registry.
const AlgorithmDescriptor& find_algorithm(std::string_view name);

/// Defaults overlaid with overrides; every value checked against the schema.
ParameterSet resolve_parameters(const AlgorithmDescriptor& descriptor, const ParameterSet& overrides = {});

// ---------------------------------------------------------------------------
// Per-algorithm parameters
// ---------------------------------------------------------------------------

struct GDParams {
    double eta = 0.1;
    static GDParams from(const ParameterSet& p);
};

struct DEParams {
    double F = 0.7;
    static DEParams from(const ParameterSet& p);
};

struct PSOParams {
    double alpha = 1.0;
    double beta = 1.0;
    /// Draw epsilon_1, epsilon_2 per coordinate instead of once per member.
    bool per_coordinate = false;
    static PSOParams from(const ParameterSet& p);
};

struct FAParams {
    double beta0 = 1.0;
    double gamma = 1.0;
    double alpha = 0.01;
    static FAParams from(const ParameterSet& p);
};

struct BAParams {
    double f_min = 0.0;
    double f_max = 2.0;
    static BAParams from(const ParameterSet& p);
};

struct CSParams {
    double p_a = 0.25;
    double alpha = 1.0;
    double lambda = 1.5;
    static CSParams from(const ParameterSet& p);
};

struct FPAParams {
    double p = 0.8;
    double gamma = 0.1;
    double lambda = 1.5;
    static FPAParams from(const ParameterSet& p);
};

struct GAParams {
    double crossover_rate = 0.9;
    double mutation_rate = 0.2;
    double mutation_scale = 0.01;
    std::size_t elite_count = 1;
    static GAParams from(const ParameterSet& p);
};

struct SAParams {
    double initial_temperature = 1.0;
    double cooling_factor = 0.99;
    double step_scale = 0.05;
    static SAParams from(const ParameterSet& p);
};

// ---------------------------------------------------------------------------
// Increments (pure arithmetic, draws supplied by the caller)
// ---------------------------------------------------------------------------

/// F (x_j - x_k)
Vector de_increment(const Vector& xj, const Vector& xk, double F);

/// alpha eps1 (g - x) + beta eps2 (pbest - x), scalar draws.
Vector pso_velocity_increment(const Vector& x, const Vector& global_best, const Vector& personal_best,
                              const PSOParams& params, double eps1, double eps2);

/// Same with one draw per coordinate.
Vector pso_velocity_increment(const Vector& x, const Vector& global_best, const Vector& personal_best,
                              const PSOParams& params, const Vector& eps1, const Vector& eps2);

/// beta0 exp(-gamma r^2) (x_j - x_i) + alpha eps
Vector fa_increment(const Vector& xi, const Vector& xj, const FAParams& params, const Vector& eps);

/// Frequency f_min + beta (f_max - f_min).
double ba_frequency(const BAParams& params, double beta);

/// (x_i - x_best) f
Vector ba_velocity_increment(const Vector& xi, const Vector& x_best, double frequency);

/// H(z) = 1 for z > 0, else 0.
inline double heaviside(double z) { return z > 0.0 ? 1.0 : 0.0; }

/// alpha s H(p_a - eps) (x_j - x_k)
Vector cs_increment(const Vector& xj, const Vector& xk, const CSParams& params, double eps, double levy_step);

/// gamma L (g - x_i), L one Lévy draw per coordinate.
Vector fpa_global_increment(const Vector& xi, const Vector& global_best, double gamma, const Vector& levy);

/// eps (x_j - x_k)
Vector fpa_local_increment(const Vector& xj, const Vector& xk, double eps);

/// First `cut` coordinates from a, the rest from b.
Vector single_point_crossover(const Vector& a, const Vector& b, Eigen::Index cut);

/// Metropolis rule: improvements always, otherwise u < exp(-(f_new - f_old)/T).
bool metropolis_accept(double f_old, double f_new, double temperature, double u);

/// Central differences with h = 1e-6 max(1, |x_d|); 2D evaluations.
Vector finite_difference_gradient(Evaluator& evaluator, const Vector& x);

/// Two distinct indices != exclude, as the head of a random permutation of
/// the other n - 1 indices.
std::pair<std::size_t, std::size_t> draw_distinct_pair(RandomStream& stream, std::size_t n, std::size_t exclude);

// ---------------------------------------------------------------------------
// Step operations. Each mutates one run's population in place, routes every
// objective call through the evaluator and stops early once it is exhausted.
// ---------------------------------------------------------------------------

/// x - eta grad f(x), gradient by central differences (2D evaluations).
Vector gradient_step(Evaluator& evaluator, const Vector& position, double eta);

void gd_step(Population& population, const GDParams& params, RandomStream& stream, Evaluator& evaluator);
void de_step(Population& population, const DEParams& params, RandomStream& stream, Evaluator& evaluator);
void pso_step(Population& population, const PSOParams& params, RandomStream& stream, Evaluator& evaluator);
void fa_step(Population& population, const FAParams& params, RandomStream& stream, Evaluator& evaluator);
void ba_step(Population& population, const BAParams& params, RandomStream& stream, Evaluator& evaluator);
void cs_step(Population& population, const CSParams& params, RandomStream& stream, Evaluator& evaluator);
void fpa_step(Population& population, const FPAParams& params, RandomStream& stream, Evaluator& evaluator);
void ga_step(Population& population, const GAParams& params, RandomStream& stream, Evaluator& evaluator);

struct SAState {
    Individual current;
    Individual best;
    double temperature = 1.0;
};

void sa_step(SAState& state, const SAParams& params, RandomStream& stream, Evaluator& evaluator);

// ---------------------------------------------------------------------------
// Run loop
// ---------------------------------------------------------------------------

struct RunSettings {
    std::size_t population_size = 25;
    std::size_t budget = 50000;
    std::vector<ParameterSchedule> schedules;
    bool pso_per_coordinate = false;
    /// Permit budget < population_size (only the first `budget` members get
    /// evaluated). Used by the self-tuning loop.
    bool allow_partial_initialization = false;
    /// A run ends after this many consecutive iterations without an evaluation.
    std::size_t max_idle_iterations = 1000;
};

/// Uniform initialization in the box. Velocities start at zero for
/// velocity-based algorithms; personal bests are seeded with the start point.
/// Reject-policy problems redraw infeasible points without spending budget.
Population initialize_population(const AlgorithmDescriptor& descriptor, std::size_t size,
                                 RandomStream& stream, Evaluator& evaluator);

RunRecord run(const AlgorithmDescriptor& descriptor, const ParameterSet& parameters, const Problem& problem,
              const RunSettings& settings, RandomStream& stream);

RunRecord run(std::string_view algorithm, const ParameterSet& parameters, const Problem& problem,
              const RunSettings& settings, RandomStream& stream);

} // namespace natopt
