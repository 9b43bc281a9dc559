#include <doctest.h>

#include "natopt/benchmarks.hpp"
#include "natopt/random.hpp"

#include <cmath>

using namespace natopt;

namespace {

// every one of the (2N+1)^2 terms, no truncation
double full_sum(double x, double y, const IslandParams& p)
{
    double total = 0.0;
    for (int i = -p.N; i <= p.N; ++i)
        for (int j = -p.N; j <= p.N; ++j)
            total += (std::abs(i) + std::abs(j)) * std::exp(-p.a * (x - i) * (x - i) - p.a * (y - j) * (y - j));
    return total;
}

bool brute_feasible(double x, double y, const IslandParams& p)
{
    for (int i = -p.N; i <= p.N; ++i)
        for (int j = -p.N; j <= p.N; ++j)
            if (std::abs(x - i) + std::abs(y - j) <= p.radius())
                return true;
    return false;
}

Vector vec2(double x, double y)
{
    Vector v(2);
    v << x, y;
    return v;
}

} // namespace

TEST_CASE("island values against high-precision oracles")
{
    // 30-digit evaluations of the full double sum
    CHECK(multi_island_value(0, 0) == doctest::Approx(1.81616208278952906e-4).epsilon(1e-12));
    CHECK(multi_island_value(100, 100) == doctest::Approx(200.0180695801538879).epsilon(1e-14));
    CHECK(multi_island_value(1, 0) == doctest::Approx(1.00027241606780393).epsilon(1e-14));
    CHECK(multi_island_value(0.3, 0.7) == doctest::Approx(0.171409525082824817).epsilon(1e-13));
    CHECK(std::abs(multi_island_value(0.3, 0.7) - multi_island_value(0.7, 0.3)) < 1e-15);
}

TEST_CASE("truncated evaluation matches the full sum")
{
    const IslandParams p;
    RandomStream s(3, 0);
    for (int k = 0; k < 200; ++k) {
        const double x = s.uniform(-100.1, 100.1), y = s.uniform(-100.1, 100.1);
        const double full = full_sum(x, y, p);
        CHECK(std::abs(multi_island_value(x, y, p) - full) <= 1e-12 * std::max(1.0, full));
    }
}

TEST_CASE("island symmetries")
{
    RandomStream s(4, 0);
    for (int k = 0; k < 200; ++k) {
        const double x = s.uniform(-100, 100), y = s.uniform(-100, 100);
        const double f = multi_island_value(x, y);
        const double tol = 1e-12 * std::max(1.0, f);
        CHECK(std::abs(multi_island_value(-x, -y) - f) <= tol);
        CHECK(std::abs(multi_island_value(y, x) - f) <= tol);
        CHECK(std::abs(multi_island_value(-x, y) - f) <= tol);
    }
}

TEST_CASE("feasibility")
{
    CHECK(multi_island_feasible(0.05, 0.04));
    CHECK_FALSE(multi_island_feasible(0.5, 0.5));
    CHECK(multi_island_feasible(100, 100));
    CHECK(multi_island_feasible(-100.1, 0));
    CHECK_FALSE(multi_island_feasible(-100.11, 0));

    const IslandParams small{10, 10.0};
    RandomStream s(5, 0);
    for (int k = 0; k < 2000; ++k) {
        // concentrate near islands so both outcomes are common
        const double x = std::round(s.uniform(-11, 11)) + s.uniform(-0.15, 0.15);
        const double y = std::round(s.uniform(-11, 11)) + s.uniform(-0.15, 0.15);
        CHECK(multi_island_feasible(x, y, small) == brute_feasible(x, y, small));
    }
}

TEST_CASE("peak oracle")
{
    const double corner = island_peak_oracle(100, 100);
    CHECK(corner == doctest::Approx(200.01807).epsilon(1e-7));
    CHECK(std::abs(island_peak_oracle(-100, 100) - corner) < 1e-12);
    CHECK(std::abs(island_peak_oracle(100, -100) - corner) < 1e-12);
    CHECK(std::abs(island_peak_oracle(-100, -100) - corner) < 1e-12);
    CHECK(island_peak_oracle(0, 0) == doctest::Approx(1.81616208278952906e-4).epsilon(1e-12));
    CHECK(island_peak_oracle(1, 0) == doctest::Approx(1.00027).epsilon(1e-5));
    CHECK_THROWS_AS(island_peak_oracle(101, 0), ContractViolation);
    CHECK_THROWS_AS(island_peak_oracle(0, -101), ContractViolation);
}

TEST_CASE("peaks grow toward the corners")
{
    RandomStream s(6, 0);
    for (int k = 0; k < 50; ++k) {
        int i = static_cast<int>(s.index(201)) - 100;
        int j = static_cast<int>(s.index(201)) - 100;
        while (std::abs(i) < 100) {
            const int next = i + (i >= 0 ? 1 : -1);
            CHECK(island_peak_oracle(next, j) > island_peak_oracle(i, j));
            i = next;
        }
        while (std::abs(j) < 100) {
            const int next = j + (j >= 0 ? 1 : -1);
            CHECK(island_peak_oracle(i, next) > island_peak_oracle(i, j));
            j = next;
        }
    }
}

TEST_CASE("island count and disjointness")
{
    const IslandParams p;
    CHECK(p.island_count() == 40401);
    CHECK(p.radius() < 0.5);
}

TEST_CASE("repair projects onto the nearest diamond")
{
    const Vector r = repair_to_island(vec2(0.5, 0.0));
    CHECK(r[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(r[1] == 0.0);
    const Vector inside = vec2(0.05, 0.04);
    CHECK(repair_to_island(inside) == inside);

    RandomStream s(8, 0);
    for (int k = 0; k < 2000; ++k) {
        const Vector x = vec2(s.uniform(-100.5, 100.5), s.uniform(-100.5, 100.5));
        const Vector y = repair_to_island(x);
        CHECK(multi_island_feasible(y[0], y[1]));
        // no point of the diamond is closer (checked against its vertices and the foot on each edge)
        auto [ci, cj] = nearest_island(x[0], x[1]);
        const double d = (y - x).norm();
        for (int t = 0; t <= 40; ++t) {
            const double ang = t / 40.0;
            const double b = 0.1;
            for (int sx : {-1, 1})
                for (int sy : {-1, 1}) {
                    const Vector q = vec2(ci + sx * b * ang, cj + sy * b * (1 - ang));
                    CHECK(d <= (q - x).norm() + 1e-12);
                }
        }
    }
}

TEST_CASE("island problem")
{
    const Problem rep = make_island_problem();
    CHECK(rep.dimension == 2);
    CHECK(rep.policy == ConstraintPolicy::repair);
    CHECK(rep.upper[0] == doctest::Approx(100.1));
    REQUIRE(rep.optimum);
    CHECK(rep.optimum->positions.size() == 4);
    // exact corner maximizer from a 30-digit root solve of the gradient along the diagonal
    CHECK(corner_peak_offset(IslandParams{}) == doctest::Approx(4.52117512859953560e-5).epsilon(1e-4));
    CHECK(rep.optimum->value == doctest::Approx(-200.018077749911092).epsilon(1e-14));
    for (const auto& c : rep.optimum->positions)
        CHECK(rep.objective(c) == rep.optimum->value);

    const Problem rej = make_island_problem({}, ConstraintPolicy::reject);
    Evaluator ev(rej, 10);
    CHECK_FALSE(ev.propose(vec2(0.5, 0.5)).has_value());
    CHECK(ev.used() == 0);
    Evaluator ev2(rep, 10);
    const auto fixed = ev2.propose(vec2(0.5, 0.0));
    CHECK(fixed->position[0] == doctest::Approx(0.1));
    CHECK_THROWS_AS(make_island_problem({10, 1.5}), std::invalid_argument);
}

TEST_CASE("wrap_constrained")
{
    Problem base = make_standard_problem("sphere", 2);
    CHECK_THROWS_AS(wrap_constrained(base, ConstraintPolicy::reject), ContractViolation);
    base.feasible = [](const Vector& x) { return x[0] >= 0; };
    CHECK(wrap_constrained(base, ConstraintPolicy::reject).policy == ConstraintPolicy::reject);
    CHECK_THROWS_AS(wrap_constrained(base, ConstraintPolicy::repair), ContractViolation);
}

TEST_CASE("standard suite optima")
{
    for (const auto& f : standard_functions())
        for (int d : {2, 5, 10}) {
            const Problem p = make_standard_problem(f.name, d);
            REQUIRE(p.optimum);
            CHECK(std::abs(p.objective(p.optimum->positions[0]) - p.optimum->value) <= 1e-12);
        }
    CHECK(rastrigin(Vector::Ones(2)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rosenbrock(Vector::Zero(2)) == 1.0);
    CHECK_THROWS_AS(make_standard_problem("rosenbrock", 1), std::invalid_argument);
    CHECK_THROWS_AS(make_standard_problem("nope", 2), std::invalid_argument);
    CHECK(is_problem_name("island"));
}
