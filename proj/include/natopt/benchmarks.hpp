#pragma once

#include "natopt/core.hpp"

#include <string>
#include <vector>

namespace natopt {

/// Multi-island function parameters. Islands are L1 diamonds of radius
/// b = 1/a around every integer grid point (i, j) with |i|, |j| <= N.
struct IslandParams {
    int N = 100;
    double a = 10.0;

    double radius() const { return 1.0 / a; }
    std::size_t island_count() const { return static_cast<std::size_t>(2 * N + 1) * static_cast<std::size_t>(2 * N + 1); }
};

/// Exponent arguments below this are skipped (exp underflows to zero).
inline constexpr double island_exponent_cutoff = -745.0;

/// sum_{i,j=-N..N} (|i|+|j|) exp(-a(x-i)^2 - a(y-j)^2), restricted to the
/// terms whose exponent is not below island_exponent_cutoff.
double multi_island_value(double x, double y, const IslandParams& params = {});

/// True iff (x, y) lies in some island diamond |x-i| + |y-j| <= 1/a.
bool multi_island_feasible(double x, double y, const IslandParams& params = {});

/// Value at the center of island (i, j). Throws for indices off the grid.
double island_peak_oracle(int i, int j, const IslandParams& params = {});

/// Nearest island center: coordinates rounded (halves toward zero), then
/// clamped to [-N, N].
std::pair<int, int> nearest_island(double x, double y, const IslandParams& params = {});

/// Offset t >= 0 of the exact maximizer (N - t, N - t) of the corner peak.
/// Neighbouring islands pull it slightly off the grid point.
double corner_peak_offset(const IslandParams& params = {});

/// Euclidean projection of (x, y) onto the diamond of its nearest island.
Vector repair_to_island(const Vector& point, const IslandParams& params = {});

/// The multi-island problem in minimization form (objective is the negated
/// function value), bounded by [-N - 1/a, N + 1/a]^2. The known optimum is
/// the four refined corner maximizers.
Problem make_island_problem(const IslandParams& params = {},
                            ConstraintPolicy policy = ConstraintPolicy::repair);

/// Returns base with the given constraint policy attached. Base must carry a
/// feasibility predicate; repair needs base.repair as well.
Problem wrap_constrained(Problem base, ConstraintPolicy policy);

enum class StandardFunctionId { sphere, rastrigin, ackley, rosenbrock };

struct StandardFunction {
    std::string name;
    StandardFunctionId id;
    double lower;
    double upper;
    double optimum_coordinate;
    double optimum_value;
};

const std::vector<StandardFunction>& standard_functions();

double sphere(const Vector& x);
double rastrigin(const Vector& x);
double ackley(const Vector& x);
double rosenbrock(const Vector& x);

Problem make_standard_problem(const std::string& name, int dimension);

/// Names accepted by make_problem: the standard suite plus "island".
std::vector<std::string> problem_names();
bool is_problem_name(const std::string& name);

} // namespace natopt
