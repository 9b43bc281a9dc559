#include "natopt/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace natopt {

double multi_island_value(double x, double y, const IslandParams& params)
{
    const double a = params.a;
    const int n = params.N;
    // |x - i| beyond this contributes nothing
    const double reach = std::sqrt(-island_exponent_cutoff / a);
    const int i_lo = std::max(-n, static_cast<int>(std::ceil(x - reach)));
    const int i_hi = std::min(n, static_cast<int>(std::floor(x + reach)));
    const int j_lo = std::max(-n, static_cast<int>(std::ceil(y - reach)));
    const int j_hi = std::min(n, static_cast<int>(std::floor(y + reach)));

    double total = 0.0;
    for (int i = i_lo; i <= i_hi; ++i) {
        const double ex = -a * (x - i) * (x - i);
        if (ex < island_exponent_cutoff)
            continue;
        for (int j = j_lo; j <= j_hi; ++j) {
            const double e = ex - a * (y - j) * (y - j);
            if (e < island_exponent_cutoff)
                continue;
            total += (std::abs(i) + std::abs(j)) * std::exp(e);
        }
    }
    return total;
}

std::pair<int, int> nearest_island(double x, double y, const IslandParams& params)
{
    auto snap = [&](double v) {
        // halfway points go to the island nearer the origin
        const double t = std::trunc(v);
        const double near = std::abs(v - t) <= 0.5 ? t : t + std::copysign(1.0, v);
        const double r = std::clamp(near, static_cast<double>(-params.N), static_cast<double>(params.N));
        return static_cast<int>(r);
    };
    return {snap(x), snap(y)};
}

bool multi_island_feasible(double x, double y, const IslandParams& params)
{
    auto [i, j] = nearest_island(x, y, params);
    return std::abs(x - i) + std::abs(y - j) <= params.radius();
}

double island_peak_oracle(int i, int j, const IslandParams& params)
{
    if (std::abs(i) > params.N || std::abs(j) > params.N)
        throw ContractViolation("island_peak_oracle: (" + std::to_string(i) + ", " + std::to_string(j) +
                                ") is off the grid");
    return multi_island_value(i, j, params);
}

double corner_peak_offset(const IslandParams& params)
{
    // the peak is symmetric in x and y, so search the diagonal (N - t, N - t)
    auto f = [&](double t) { return multi_island_value(params.N - t, params.N - t, params); };
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = params.radius() / 2.0;
    double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
    double f1 = f(m1), f2 = f(m2);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        if (f1 >= f2) {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - phi * (hi - lo);
            f1 = f(m1);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + phi * (hi - lo);
            f2 = f(m2);
        }
    }
    const double t = 0.5 * (lo + hi);
    return f(t) > f(0.0) ? t : 0.0;
}

Vector repair_to_island(const Vector& point, const IslandParams& params)
{
    if (point.size() != 2)
        throw ContractViolation("repair_to_island: needs a 2-D point");
    auto [ci, cj] = nearest_island(point[0], point[1], params);
    const double b = params.radius();
    const double dx = point[0] - ci;
    const double dy = point[1] - cj;
    const double ax = std::abs(dx), ay = std::abs(dy);
    Vector out(2);
    if (ax + ay <= b) {
        out = point;
        return out;
    }
    // soft-threshold both offsets by tau so that the L1 norm becomes b
    double tau = 0.5 * (ax + ay - b);
    double px = std::max(ax - tau, 0.0);
    double py = std::max(ay - tau, 0.0);
    if (ax - ay >= b) {
        px = b;
        py = 0.0;
    } else if (ay - ax >= b) {
        px = 0.0;
        py = b;
    }
    out[0] = ci + std::copysign(px, dx);
    out[1] = cj + std::copysign(py, dy);
    // ci + b can round to a point a few ulps outside the diamond
    for (double shrink = 0x1.0p-40; !multi_island_feasible(out[0], out[1], params); shrink *= 2.0) {
        px *= 1.0 - shrink;
        py *= 1.0 - shrink;
        out[0] = ci + std::copysign(px, dx);
        out[1] = cj + std::copysign(py, dy);
    }
    return out;
}

Problem wrap_constrained(Problem base, ConstraintPolicy policy)
{
    if (!base.feasible)
        throw ContractViolation("wrap_constrained: base problem has no feasibility predicate");
    if (policy == ConstraintPolicy::repair && !base.repair)
        throw ContractViolation("wrap_constrained: base problem has no repair map");
    base.policy = policy;
    validate(base);
    return base;
}

Problem make_island_problem(const IslandParams& params, ConstraintPolicy policy)
{
    if (params.N <= 0 || !(params.a > 0.0))
        throw std::invalid_argument("island: N and a must be positive");
    if (!(params.radius() < 0.5))
        throw std::invalid_argument("island: a must exceed 2 so that islands stay disjoint");

    Problem p;
    p.name = "island";
    p.dimension = 2;
    p.objective = [params](const Vector& x) { return -multi_island_value(x[0], x[1], params); };
    const double edge = params.N + params.radius();
    p.lower = Vector::Constant(2, -edge);
    p.upper = Vector::Constant(2, edge);
    p.feasible = [params](const Vector& x) { return multi_island_feasible(x[0], x[1], params); };
    p.repair = [params](const Vector& x) { return repair_to_island(x, params); };

    KnownOptimum opt;
    const double t = corner_peak_offset(params);
    opt.value = -multi_island_value(params.N - t, params.N - t, params);
    for (int sx : {-1, 1})
        for (int sy : {-1, 1}) {
            Vector c(2);
            c << sx * (params.N - t), sy * (params.N - t);
            opt.positions.push_back(c);
        }
    p.optimum = opt;
    if (policy == ConstraintPolicy::none)
        return p;
    return wrap_constrained(std::move(p), policy);
}

double sphere(const Vector& x)
{
    return x.squaredNorm();
}

double rastrigin(const Vector& x)
{
    const double two_pi = 2.0 * std::numbers::pi;
    return 10.0 * static_cast<double>(x.size()) +
           (x.array().square() - 10.0 * (two_pi * x.array()).cos()).sum();
}

double ackley(const Vector& x)
{
    const double d = static_cast<double>(x.size());
    const double two_pi = 2.0 * std::numbers::pi;
    const double s1 = x.squaredNorm() / d;
    const double s2 = (two_pi * x.array()).cos().sum() / d;
    return -20.0 * std::exp(-0.2 * std::sqrt(s1)) - std::exp(s2) + 20.0 + std::numbers::e;
}

double rosenbrock(const Vector& x)
{
    double total = 0.0;
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        total += 100.0 * a * a + b * b;
    }
    return total;
}

const std::vector<StandardFunction>& standard_functions()
{
    static const std::vector<StandardFunction> suite = {
        {"sphere", StandardFunctionId::sphere, -5.12, 5.12, 0.0, 0.0},
        {"rastrigin", StandardFunctionId::rastrigin, -5.12, 5.12, 0.0, 0.0},
        {"ackley", StandardFunctionId::ackley, -32.768, 32.768, 0.0, 0.0},
        {"rosenbrock", StandardFunctionId::rosenbrock, -5.0, 10.0, 1.0, 0.0},
    };
    return suite;
}

Problem make_standard_problem(const std::string& name, int dimension)
{
    if (dimension <= 0)
        throw std::invalid_argument("problem '" + name + "': dimension must be positive");
    auto& suite = standard_functions();
    auto it = std::find_if(suite.begin(), suite.end(), [&](const auto& f) { return f.name == name; });
    if (it == suite.end())
        throw std::invalid_argument("unknown problem '" + name + "'");
    if (it->id == StandardFunctionId::rosenbrock && dimension < 2)
        throw std::invalid_argument("rosenbrock needs dimension >= 2");

    Problem p;
    p.name = it->name;
    p.dimension = dimension;
    switch (it->id) {
    case StandardFunctionId::sphere: p.objective = sphere; break;
    case StandardFunctionId::rastrigin: p.objective = rastrigin; break;
    case StandardFunctionId::ackley: p.objective = ackley; break;
    case StandardFunctionId::rosenbrock: p.objective = rosenbrock; break;
    }
    p.lower = Vector::Constant(dimension, it->lower);
    p.upper = Vector::Constant(dimension, it->upper);
    p.optimum = KnownOptimum{{Vector::Constant(dimension, it->optimum_coordinate)}, it->optimum_value};
    return p;
}

std::vector<std::string> problem_names()
{
    std::vector<std::string> names;
    for (const auto& f : standard_functions())
        names.push_back(f.name);
    names.push_back("island");
    return names;
}

bool is_problem_name(const std::string& name)
{
    auto names = problem_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

} // namespace natopt
