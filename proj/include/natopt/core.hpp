#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace natopt {

using Vector = Eigen::VectorXd;

/// Violated precondition of a library operation.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Named parameter values, e.g. {"F": 0.7}.
using ParameterSet = std::map<std::string, double>;

enum class ConstraintPolicy { none, reject, repair };

const char* to_string(ConstraintPolicy policy);
ConstraintPolicy parse_constraint_policy(const std::string& name);

struct KnownOptimum {
    std::vector<Vector> positions;  // every global minimizer (at least one)
    double value = 0.0;
};

/// Minimization problem over a box.
struct Problem {
    std::string name;
    int dimension = 0;
    std::function<double(const Vector&)> objective;
    Vector lower;
    Vector upper;
    std::function<bool(const Vector&)> feasible;   // empty: whole box feasible
    std::function<Vector(const Vector&)> repair;   // required for ConstraintPolicy::repair
    ConstraintPolicy policy = ConstraintPolicy::none;
    std::optional<KnownOptimum> optimum;
};

/// Throws ContractViolation if the problem is malformed (bounds, policy hooks).
void validate(const Problem& problem);

struct Individual {
    Vector position;
    double fitness = std::numeric_limits<double>::infinity();
    std::optional<Vector> velocity;
    std::optional<Vector> best_position;
    std::optional<double> best_fitness;
};

struct Population {
    std::vector<Individual> members;
    std::size_t best_index = 0;

    std::size_t size() const { return members.size(); }
    Individual& operator[](std::size_t i) { return members[i]; }
    const Individual& operator[](std::size_t i) const { return members[i]; }
    const Individual& best() const { return members.at(best_index); }
};

struct TracePoint {
    std::size_t evaluations;
    double best_fitness;
};

/// A scored candidate accepted by the problem's constraint policy.
struct Scored {
    Vector position;
    double fitness;
};

/// Budgeted, counting gateway to a problem's objective.
///
/// Every objective call in the library goes through here. The counter equals
/// the number of objective calls exactly, and a best-so-far trace is kept
/// indexed by that counter (one point per strict improvement).
class Evaluator {
public:
    Evaluator(const Problem& problem, std::size_t budget);

    const Problem& problem() const { return *problem_; }
    std::size_t budget() const { return budget_; }
    std::size_t used() const { return used_; }
    std::size_t remaining() const { return budget_ - used_; }
    bool exhausted() const { return used_ >= budget_; }
    std::size_t invalid_count() const { return invalid_; }

    /// One objective call. Non-finite outputs count as an evaluation, are
    /// reported as +inf and tallied in invalid_count().
    double evaluate(const Vector& position);

    /// Applies the constraint policy and evaluates. Returns nullopt (without
    /// counting an evaluation) when a reject-policy problem sees an
    /// infeasible candidate. Repair-policy candidates come back repaired.
    std::optional<Scored> propose(const Vector& candidate);

    const std::vector<TracePoint>& trace() const { return trace_; }
    double best_fitness() const { return best_fitness_; }
    const Vector& best_position() const { return best_position_; }

private:
    const Problem* problem_;
    std::size_t budget_;
    std::size_t used_ = 0;
    std::size_t invalid_ = 0;
    double best_fitness_ = std::numeric_limits<double>::infinity();
    Vector best_position_;
    std::vector<TracePoint> trace_;
};

/// Single objective call with dimension check (no budget).
double evaluate(const Problem& problem, const Vector& position);

Vector clamp_to_bounds(const Vector& position, const Problem& problem);

/// clamp_to_bounds(position + delta); the time step is always 1.
Vector apply_increment(const Vector& position, const Vector& delta, const Problem& problem);

/// Member with minimal fitness, lowest index on ties.
std::pair<std::size_t, const Individual&> select_best(const Population& population);

/// Recomputes population.best_index.
void refresh_best(Population& population);

Individual update_personal_best(Individual individual);

/// Per-run evaluation trace and outcome.
struct RunRecord {
    std::string algorithm;
    std::string problem;
    int dimension = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
    std::uint64_t engine_seed = 0;
    ParameterSet parameters;
    std::size_t budget = 0;
    std::size_t evaluations = 0;
    std::vector<TracePoint> trace;
    Vector best_position;
    double best_fitness = std::numeric_limits<double>::infinity();
    double initial_mean_fitness = 0.0;
    double wall_ms = 0.0;
};

} // namespace natopt
