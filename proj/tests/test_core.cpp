#include <doctest.h>

#include "natopt/benchmarks.hpp"
#include "natopt/core.hpp"

#include <cmath>
#include <limits>

using namespace natopt;

namespace {

Problem box(int d, double lo, double hi)
{
    Problem p;
    p.name = "box";
    p.dimension = d;
    p.objective = [](const Vector& x) { return x.squaredNorm(); };
    p.lower = Vector::Constant(d, lo);
    p.upper = Vector::Constant(d, hi);
    return p;
}

Vector vec(std::initializer_list<double> v)
{
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v)
        out[i++] = x;
    return out;
}

Population with_fitness(std::initializer_list<double> f)
{
    Population p;
    for (double v : f) {
        Individual m;
        m.position = Vector::Zero(1);
        m.fitness = v;
        p.members.push_back(m);
    }
    return p;
}

} // namespace

TEST_CASE("evaluate on the sphere")
{
    const Problem sphere = make_standard_problem("sphere", 2);
    CHECK(evaluate(sphere, vec({0, 0})) == 0.0);
    CHECK(evaluate(sphere, vec({1, 2})) == 5.0);
    CHECK_THROWS_AS(evaluate(sphere, vec({1, 2, 3})), ContractViolation);
}

TEST_CASE("evaluator counts every call and tracks strict improvements")
{
    const Problem sphere = make_standard_problem("sphere", 2);
    Evaluator ev(sphere, 4);
    CHECK(ev.evaluate(vec({2, 0})) == 4.0);
    CHECK(ev.evaluate(vec({3, 0})) == 9.0);
    CHECK(ev.evaluate(vec({1, 0})) == 1.0);
    CHECK(ev.used() == 3);
    CHECK(ev.remaining() == 1);
    REQUIRE(ev.trace().size() == 2);
    CHECK(ev.trace()[0].evaluations == 1);
    CHECK(ev.trace()[0].best_fitness == 4.0);
    CHECK(ev.trace()[1].evaluations == 3);
    CHECK(ev.best_fitness() == 1.0);
    ev.evaluate(vec({1, 0}));
    CHECK(ev.exhausted());
    CHECK_THROWS_AS(ev.evaluate(vec({0, 0})), ContractViolation);
}

TEST_CASE("non-finite objective values are flagged invalid")
{
    Problem p = box(1, -1, 1);
    p.objective = [](const Vector& x) { return x[0] > 0 ? std::numeric_limits<double>::quiet_NaN() : 1.0; };
    Evaluator ev(p, 10);
    CHECK(ev.evaluate(vec({0.5})) == std::numeric_limits<double>::infinity());
    CHECK(ev.evaluate(vec({-0.5})) == 1.0);
    CHECK(ev.invalid_count() == 1);
    CHECK(ev.used() == 2);
}

TEST_CASE("clamp_to_bounds")
{
    CHECK(clamp_to_bounds(vec({1.5}), box(1, 0, 1))[0] == 1.0);
    CHECK(clamp_to_bounds(vec({0.5}), box(1, 0, 1))[0] == 0.5);
    const Vector c = clamp_to_bounds(vec({-3, 7}), box(2, 0, 5));
    CHECK(c[0] == 0.0);
    CHECK(c[1] == 5.0);
    CHECK_THROWS_AS(clamp_to_bounds(vec({1, 2, 3}), box(2, 0, 5)), ContractViolation);
}

TEST_CASE("apply_increment")
{
    const Vector a = apply_increment(vec({1, 1}), vec({0, 0}), box(2, -5, 5));
    CHECK(a == vec({1, 1}));
    CHECK(apply_increment(vec({1}), vec({0.5}), box(1, 0, 1))[0] == 1.0);
    CHECK(apply_increment(vec({0, 0}), vec({1, 2}), box(2, -5, 5)) == vec({1, 2}));
    CHECK_THROWS_AS(apply_increment(vec({0}), vec({std::nan("")}), box(1, -5, 5)), ContractViolation);
    CHECK_THROWS_AS(apply_increment(vec({0}), vec({INFINITY}), box(1, -5, 5)), ContractViolation);
    CHECK_THROWS_AS(apply_increment(vec({0}), vec({1, 1}), box(1, -5, 5)), ContractViolation);
}

TEST_CASE("select_best breaks ties by lowest index")
{
    CHECK(select_best(with_fitness({3, 1, 2})).first == 1);
    CHECK(select_best(with_fitness({1, 1})).first == 0);
    CHECK(select_best(with_fitness({7})).first == 0);
    CHECK_THROWS_AS(select_best(Population{}), ContractViolation);
}

TEST_CASE("update_personal_best")
{
    Individual m;
    m.position = vec({1});
    m.fitness = 1.0;
    m.best_position = vec({2});
    m.best_fitness = 2.0;
    CHECK(*update_personal_best(m).best_fitness == 1.0);

    m.fitness = 2.0;
    m.best_fitness = 1.0;
    CHECK(*update_personal_best(m).best_fitness == 1.0);
    CHECK(*update_personal_best(m).best_position == vec({2}));

    Individual fresh;
    fresh.position = vec({0});
    fresh.fitness = 5.0;
    const Individual u = update_personal_best(fresh);
    CHECK(*u.best_fitness == 5.0);
    CHECK(*u.best_position == vec({0}));
}

TEST_CASE("problem validation")
{
    Problem p = box(2, 0, 1);
    CHECK_NOTHROW(validate(p));
    p.upper[1] = 0.0;
    CHECK_THROWS_AS(validate(p), ContractViolation);
    p = box(2, 0, 1);
    p.policy = ConstraintPolicy::reject;
    CHECK_THROWS_AS(validate(p), ContractViolation);
    CHECK(parse_constraint_policy("repair") == ConstraintPolicy::repair);
    CHECK_THROWS_AS(parse_constraint_policy("penalty"), std::invalid_argument);
}

TEST_CASE("propose applies the constraint policy")
{
    Problem p = box(1, -1, 1);
    p.feasible = [](const Vector& x) { return x[0] <= 0.0; };
    p.repair = [](const Vector&) { return Vector::Zero(1); };

    p.policy = ConstraintPolicy::reject;
    Evaluator rej(p, 10);
    CHECK_FALSE(rej.propose(vec({0.5})).has_value());
    CHECK(rej.used() == 0);
    CHECK(rej.propose(vec({-0.5}))->fitness == 0.25);

    p.policy = ConstraintPolicy::repair;
    Evaluator rep(p, 10);
    auto s = rep.propose(vec({0.5}));
    REQUIRE(s.has_value());
    CHECK(s->position[0] == 0.0);
    CHECK(rep.used() == 1);
}
