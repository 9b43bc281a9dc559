#include <doctest.h>

#include "natopt/core.hpp"
#include "natopt/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

using namespace natopt;

namespace {

// composite Simpson on [lo, hi] with n (even) panels
template <typename F>
double simpson(F f, double lo, double hi, int n)
{
    const double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i)
        s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

std::vector<WalkTrace> ensemble(std::uint64_t seed, std::size_t walks, std::size_t steps, const StepSampler& step)
{
    std::vector<WalkTrace> out;
    for (std::size_t w = 0; w < walks; ++w) {
        RandomStream s(seed, w);
        out.push_back(random_walk(s, steps, step));
    }
    return out;
}

} // namespace

TEST_CASE("cauchy density")
{
    const CauchyParams unit{0.0, 1.0};
    CHECK(cauchy_pdf(0.0, unit) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
    const CauchyParams p{2.0, 3.0};
    CHECK(cauchy_pdf(5.0, p) == doctest::Approx(1.0 / (2.0 * std::numbers::pi * 3.0)).epsilon(1e-15));
    for (double d : {0.1, 1.0, 7.5, 1e3})
        CHECK(std::abs(cauchy_pdf(2.0 + d, p) - cauchy_pdf(2.0 - d, p)) < 1e-12);
    CHECK_THROWS_AS(cauchy_pdf(0.0, {0.0, 0.0}), ContractViolation);
}

TEST_CASE("cauchy density integrates to one over [-1e6, 1e6]")
{
    // the mass outside is 2 atan-tail = 2/(pi 1e6), so the integral is 1 - 6.4e-7
    const CauchyParams unit{0.0, 1.0};
    auto f = [&](double x) { return cauchy_pdf(x, unit); };
    double total = 0.0;
    // panels refined near the peak
    const double edges[] = {-1e6, -1e4, -100, -10, 10, 100, 1e4, 1e6};
    for (int i = 0; i + 1 < 8; ++i)
        total += simpson(f, edges[i], edges[i + 1], 200000);
    CHECK(std::abs(total - 1.0) < 1e-4);
}

TEST_CASE("cauchy quantile and sampling")
{
    const CauchyParams p{1.5, 2.0};
    CHECK(cauchy_quantile(0.5, p) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(cauchy_quantile(0.75, p) == doctest::Approx(3.5).epsilon(1e-12));
    RandomStream s(3, 0);
    std::vector<double> draws(100000);
    for (auto& x : draws)
        x = sample_cauchy(s, p);
    std::nth_element(draws.begin(), draws.begin() + 50000, draws.end());
    CHECK(std::abs(draws[50000] - 1.5) < 0.02 * 2.0);
}

TEST_CASE("levy tail density")
{
    // oracle values from 30-digit evaluation of the closed form
    CHECK(levy_tail_density(10.0, {1.0, 1.0}) == doctest::Approx(3.18309886183790672e-3).epsilon(1e-13));
    CHECK(levy_tail_density(100.0, {1.5, 1.0}) == doctest::Approx(2.99206710301074508e-6).epsilon(1e-13));
    // beta = 1 tail equals the cauchy tail gamma / (pi s^2)
    for (double s : {50.0, 500.0})
        CHECK(levy_tail_density(s, {1.0, 2.0}) == doctest::Approx(2.0 / (std::numbers::pi * s * s)).epsilon(1e-13));
    for (double beta : {0.5, 1.0, 1.5, 2.0})
        for (double s : {1.0, 3.0, 40.0}) {
            const LevyParams p{beta, 1.0};
            CHECK(levy_tail_density(2 * s, p) / levy_tail_density(s, p) ==
                  doctest::Approx(std::pow(2.0, -(1.0 + beta))).epsilon(1e-12));
            CHECK(levy_tail_density(-s, p) == levy_tail_density(s, p));
            CHECK(levy_tail_density(s * 1.01, p) < levy_tail_density(s, p));
        }
    CHECK_THROWS_AS(levy_tail_density(0.0, {}), ContractViolation);
}

TEST_CASE("mantegna sigma and pinned step")
{
    CHECK(std::abs(mantegna_sigma(1.5) - 0.69657450255769679) < 1e-14);
    CHECK(mantegna_sigma(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mantegna_step(0.6966, 1.0, 1.5) == doctest::Approx(0.6966).epsilon(1e-15));
    CHECK(mantegna_step(0.5, -4.0, 2.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(mantegna_sigma(0.2), ContractViolation);
    CHECK_THROWS_AS(mantegna_sigma(2.0), ContractViolation);
    RandomStream s(1, 1);
    CHECK_THROWS_AS(sample_levy_mantegna(s, 2.5), ContractViolation);
}

TEST_CASE("mantegna samples: sign symmetry and tail index")
{
    RandomStream s(21, 0);
    std::vector<double> draws(100000);
    int positive = 0;
    for (auto& x : draws) {
        x = sample_levy_mantegna(s, 1.5);
        positive += x > 0;
    }
    CHECK(std::abs(positive / 1e5 - 0.5) < 0.01);
    // density exponent 1 + beta from the survival index
    CHECK(std::abs(1.0 + hill_tail_index(draws) - 2.5) < 0.15);
}

TEST_CASE("mantegna consumes exactly two gaussian draws")
{
    RandomStream a(5, 5), b(5, 5);
    const double s = sample_levy_mantegna(a, 1.5);
    const double u = b.gaussian() * mantegna_sigma(1.5);
    const double v = b.gaussian();
    CHECK(s == mantegna_step(u, v, 1.5));
    CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("hill estimator on an exact pareto sample")
{
    // survival x^-2 sampled by inverse transform on a fine grid
    std::vector<double> x;
    for (int i = 1; i <= 100000; ++i)
        x.push_back(1.0 / std::sqrt((i - 0.5) / 100000.0));
    CHECK(hill_tail_index(x, 0.01) == doctest::Approx(2.0).epsilon(0.01));
    CHECK_THROWS_AS(hill_tail_index(std::vector<double>{1.0}), ContractViolation);
}

TEST_CASE("random walks")
{
    RandomStream s(9, 0);
    CHECK(random_walk(s, 0, gaussian_steps()).states == std::vector<double>{0.0});

    const std::vector<double> steps{1, -1, 1};
    CHECK(walk_from_steps(steps).states == std::vector<double>{0, 1, 0, 1});

    // last state is the sum of drawn steps
    RandomStream a(4, 2), b(4, 2);
    const WalkTrace w = random_walk(a, 500, levy_steps(1.5));
    double sum = 0.0;
    for (int i = 0; i < 500; ++i)
        sum += sample_levy_mantegna(b, 1.5);
    CHECK(w.states.back() == sum);
    CHECK(w.step_count() == 500);
}

TEST_CASE("gaussian walks are centered")
{
    double total = 0.0;
    for (std::size_t k = 0; k < 10000; ++k) {
        RandomStream s(77, k);
        total += random_walk(s, 100, gaussian_steps()).states.back();
    }
    CHECK(std::abs(total / 10000.0) < 0.3);
}

TEST_CASE("diffusion exponent")
{
    std::vector<WalkTrace> straight(100, walk_from_steps(std::vector<double>(1000, 1.0)));
    CHECK(diffusion_exponent(straight) == doctest::Approx(1.0).epsilon(1e-12));

    const auto brownian = ensemble(1, 200, 2000, gaussian_steps());
    const double b = diffusion_exponent(brownian);
    CHECK(std::abs(b - 0.5) < 0.05);

    const auto levy = ensemble(1, 200, 2000, levy_steps(1.5));
    const double l = diffusion_exponent(levy);
    CHECK(std::abs(l - 0.75) < 0.10);
    CHECK(l > 0.6);

    CHECK_THROWS_AS(diffusion_exponent(std::vector<WalkTrace>(99, straight[0])), ContractViolation);
    std::vector<WalkTrace> short_walks(100, walk_from_steps(std::vector<double>(999, 1.0)));
    CHECK_THROWS_AS(diffusion_exponent(short_walks), ContractViolation);
}

TEST_CASE("log checkpoints")
{
    const auto c = log_checkpoints(10, 10000, 20);
    CHECK(c.front() == 10);
    CHECK(c.back() == 10000);
    CHECK(std::is_sorted(c.begin(), c.end()));
    CHECK(std::adjacent_find(c.begin(), c.end()) == c.end());
}

TEST_CASE("walk csv")
{
    std::ostringstream out;
    write_walk_csv(out, walk_from_steps(std::vector<double>{0.5, -1.5}));
    CHECK(out.str() == "step,state\n0,0\n1,0.5\n2,-1\n");
}
