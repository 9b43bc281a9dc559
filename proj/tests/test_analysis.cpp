#include <doctest.h>

#include "natopt/analysis.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace natopt;

namespace {

Eigen::MatrixXd two_state(double p)
{
    Eigen::MatrixXd P(2, 2);
    P << 1 - p, p, p, 1 - p;
    return P;
}

Eigen::MatrixXd random_chain(Eigen::Index m, RandomStream& s)
{
    Eigen::MatrixXd P(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j)
            P(i, j) = s.uniform01() + 0.01;
        P.row(i) /= P.row(i).sum();
    }
    return P;
}

// Jury margin: smallest slack of the three region inequalities
double region_margin(double theta, double zeta)
{
    return std::min({1.0 - theta, theta + 1.0, zeta, 2 * theta - zeta + 2});
}

} // namespace

TEST_CASE("bat system matrix")
{
    const auto a = ba_system_matrix(1.0, 0.0);
    CHECK(a.C == (Matrix2<double>() << 1, 1, 0, 1).finished());
    const auto b = ba_system_matrix(0.0, 1.0);
    CHECK(b.C == (Matrix2<double>() << 0, 0, -1, 0).finished());
    CHECK(b.M == Vector2<double>(1, 1));
    CHECK(ba_system_matrix(0.5, 0.3).C.determinant() == doctest::Approx(0.5).epsilon(1e-15));
    // works for other scalar types
    const auto f = ba_system_matrix(0.5f, 0.25f);
    CHECK(f.C(0, 0) == 0.75f);
}

TEST_CASE("spectral radius and verdicts")
{
    CHECK(spectral_radius(Matrix2<double>::Identity()) == 1.0);
    CHECK(spectral_radius((Matrix2<double>() << 0, 0, -1, 0).finished()) == 0.0);
    CHECK(spectral_radius(ba_system_matrix(1.5, 0.1).C) == doctest::Approx(1.22474487139158905).epsilon(1e-15));
    CHECK(spectral_radius(ba_system_matrix(0.5, 1.0).C) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(spectral_radius((Matrix2<double>() << 3, 0, 0, -4).finished()) == 4.0);

    CHECK(lyapunov_verdict(ba_system_matrix(0.5, 1.0).C) == Stability::asymptotically_stable);
    CHECK(lyapunov_verdict(ba_system_matrix(1.0, 0.0).C) == Stability::marginally_stable);
    CHECK(lyapunov_verdict(ba_system_matrix(1.5, 0.1).C) == Stability::unstable);
    CHECK(std::string(to_string(Stability::unstable)) == "unstable");
}

TEST_CASE("eigenvalues2 against a general solver")
{
    RandomStream s(1, 0);
    for (int k = 0; k < 200; ++k) {
        Matrix2<double> c;
        c << s.uniform(-3, 3), s.uniform(-3, 3), s.uniform(-3, 3), s.uniform(-3, 3);
        Eigen::EigenSolver<Matrix2<double>> es(c);
        const double ref = es.eigenvalues().cwiseAbs().maxCoeff();
        CHECK(spectral_radius(c) == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("stability region")
{
    CHECK(ba_stability_region(0.5, 1.0));
    CHECK_FALSE(ba_stability_region(1.5, 0.1));
    CHECK(ba_stability_region(-1.0, 0.0));
    CHECK_FALSE(ba_stability_region(0.0, -0.01));
    CHECK_FALSE(ba_stability_region(-0.5, 1.01));
}

TEST_CASE("region equals the spectral condition on random points")
{
    RandomStream s(2, 0);
    int disagreements = 0;
    for (int k = 0; k < 10000; ++k) {
        const double theta = s.uniform(-2, 2), zeta = s.uniform(-0.5, 4);
        const bool spectral = spectral_radius(ba_system_matrix(theta, zeta).C) <= 1.0 + 1e-9;
        disagreements += spectral != ba_stability_region(theta, zeta);
    }
    CHECK(disagreements == 0);
}

TEST_CASE("simulated trajectories")
{
    const auto fixed = simulate_ba_system<double>({0.5, 1.0, 3.0}, 3.0, 0.0, 50);
    for (const auto& y : fixed) {
        CHECK(y[0] == 3.0);
        CHECK(y[1] == 0.0);
    }

    // C(0, 1) is nilpotent: the state dies after two steps
    const auto nil = simulate_ba_system<double>({0.0, 1.0, 0.0}, 1.0, 0.0, 3);
    CHECK(nil[1] == Vector2<double>(0, -1));
    CHECK(nil[2] == Vector2<double>(0, 0));
    CHECK(nil[3] == Vector2<double>(0, 0));

    // theta = 1, zeta = 0 is the marginal Jordan block: v constant, x drifts linearly
    const auto drift = simulate_ba_system<double>({1.0, 0.0, 5.0}, 0.0, 1.0, 10);
    CHECK(drift[10] == Vector2<double>(10, 1));

    const auto decay = simulate_ba_system<double>({0.5, 1.0, 2.0}, -7.0, 4.0, 200);
    CHECK(std::abs(decay.back()[0] - 2.0) < 1e-6);
}

TEST_CASE("trajectories agree with the region")
{
    RandomStream s(3, 0);
    int stable = 0, unstable = 0;
    while (stable < 50 || unstable < 50) {
        const double theta = s.uniform(-2, 2), zeta = s.uniform(-0.5, 4);
        const double rho = spectral_radius(ba_system_matrix(theta, zeta).C);
        const double x0 = s.uniform(-7, 7), v0 = s.uniform(-7, 7);
        if (region_margin(theta, zeta) >= 0.05 && stable < 50) {
            ++stable;
            double peak = 0;
            for (const auto& y : simulate_ba_system<double>({theta, zeta, 0.0}, x0, v0, 1000))
                peak = std::max(peak, y.norm());
            CHECK(peak < 1e4);
        } else if (rho >= 1.05 && unstable < 50) {
            ++unstable;
            bool escaped = false;
            for (const auto& y : simulate_ba_system<double>({theta, zeta, 0.0}, x0, v0, 1000))
                escaped = escaped || y.norm() > 1e6;
            CHECK(escaped);
        }
    }
}

TEST_CASE("grid values")
{
    const auto g = grid_values(-2, 2, 0.1);
    CHECK(g.size() == 41);
    CHECK(g.front() == -2.0);
    CHECK(g.back() == 2.0);
    CHECK(g[20] == 0.0);
    CHECK(grid_values(1, 1, 0.5).size() == 1);
    CHECK_THROWS_AS(grid_values(1, 0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(grid_values(0, 1, 0), std::invalid_argument);

    const auto grid = stability_grid(g, grid_values(-0.5, 4, 0.1));
    CHECK(grid.size() == 41 * 46);
    for (const auto& p : grid)
        CHECK(p.in_region == (p.spectral_radius <= 1.0 + 1e-9));
}

TEST_CASE("contraction factor")
{
    const Vector lo = Vector::Constant(3, -1), hi = Vector::Constant(3, 1);
    RandomStream s(4, 0);
    auto scaled = [](double c) { return PointMap([c](const Vector& x) -> Vector { return c * x; }); };
    CHECK(contraction_factor(scaled(0.5), euclidean_metric, lo, hi, 100, s) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(contraction_factor(scaled(1.0), euclidean_metric, lo, hi, 100, s) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(contraction_factor(scaled(2.0), euclidean_metric, lo, hi, 100, s) == doctest::Approx(2.0).epsilon(1e-12));

    Eigen::Matrix3d A;
    A << 0.3, 0.2, 0.0, -0.1, 0.5, 0.1, 0.2, 0.0, 0.4;
    const PointMap a = [&](const Vector& x) -> Vector { return A * x; };
    const PointMap aa = [&](const Vector& x) -> Vector { return A * (A * x); };
    RandomStream s1(5, 0), s2(5, 0);
    const double k1 = contraction_factor(a, euclidean_metric, lo, hi, 2000, s1);
    const double k2 = contraction_factor(aa, euclidean_metric, lo, hi, 2000, s2);
    CHECK(k2 <= k1 * k1 + 1e-9);

    CHECK_THROWS_AS(contraction_factor(a, euclidean_metric, lo, hi, 0, s), ContractViolation);
    // every pair coincides: no valid pair
    const PointMap id = [](const Vector& x) { return x; };
    const Metric zero = [](const Vector&, const Vector&) { return 0.0; };
    CHECK_THROWS(contraction_factor(id, zero, lo, hi, 10, s));
}

TEST_CASE("second eigenvalue")
{
    CHECK(markov_second_eigenvalue(two_state(0.1)) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(markov_second_eigenvalue(two_state(0.5)) < 1e-12);
    Eigen::MatrixXd cycle(3, 3);
    cycle << 0.5, 0.5, 0, 0, 0.5, 0.5, 0.5, 0, 0.5;
    CHECK(markov_second_eigenvalue(cycle) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(markov_second_eigenvalue_power(cycle) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(markov_second_eigenvalue_power(two_state(0.1)) == doctest::Approx(0.8).epsilon(1e-9));

    RandomStream s(6, 0);
    const Eigen::MatrixXd big = random_chain(70, s);
    Eigen::EigenSolver<Eigen::MatrixXd> es(big, false);
    Eigen::VectorXd mods = es.eigenvalues().cwiseAbs();
    std::sort(mods.data(), mods.data() + mods.size(), std::greater<>());
    CHECK(markov_second_eigenvalue(big) == doctest::Approx(mods[1]).epsilon(1e-3));
    CHECK(markov_second_eigenvalue(big) <= 1.0);

    Eigen::MatrixXd bad(2, 2);
    bad << 0.5, 0.6, 0.5, 0.5;
    CHECK_THROWS_AS(markov_second_eigenvalue(bad), ContractViolation);
    Eigen::MatrixXd negative(2, 2);
    negative << 1.5, -0.5, 0.5, 0.5;
    CHECK_THROWS_AS(validate_transition_matrix(negative), ContractViolation);
    CHECK_THROWS_AS(validate_transition_matrix(Eigen::MatrixXd::Ones(1, 1)), ContractViolation);
}

TEST_CASE("stationary distribution")
{
    Eigen::MatrixXd P(2, 2);
    P << 0.9, 0.1, 0.3, 0.7;
    const Eigen::VectorXd pi = stationary_distribution(P);
    CHECK(pi[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(pi[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("empirical convergence rate")
{
    const auto fit = empirical_convergence_rate(two_state(0.1), Eigen::Vector2d(1, 0));
    CHECK(fit.status == ConvergenceStatus::converged);
    CHECK(fit.rate == doctest::Approx(0.8).epsilon(0.01 / 0.8));
    // exact distance 0.5 * 0.8^k
    for (std::size_t k = 0; k < 20; ++k)
        CHECK(fit.distances[k] == doctest::Approx(0.5 * std::pow(0.8, k)).epsilon(1e-10));

    const auto still = empirical_convergence_rate(two_state(0.1), Eigen::Vector2d(0.5, 0.5));
    CHECK(still.status == ConvergenceStatus::degenerate);
    CHECK(std::isnan(still.rate));

    const auto fast = empirical_convergence_rate(two_state(0.5), Eigen::Vector2d(1, 0));
    CHECK(fast.rate < 1e-6);

    Eigen::MatrixXd flip(2, 2);
    flip << 0, 1, 1, 0;
    CHECK(empirical_convergence_rate(flip, Eigen::Vector2d(1, 0)).status == ConvergenceStatus::non_convergent);
    CHECK_THROWS_AS(empirical_convergence_rate(flip, Eigen::Vector2d(0.7, 0.7)), ContractViolation);
}

TEST_CASE("fitted rate tracks the second eigenvalue")
{
    RandomStream s(7, 0);
    for (int k = 0; k < 5; ++k) {
        Eigen::MatrixXd P = random_chain(4, s);
        // slow the chain down so the decay spans the horizon
        P = 0.7 * Eigen::MatrixXd::Identity(4, 4) + 0.3 * P;
        Eigen::VectorXd start = Eigen::VectorXd::Zero(4);
        start[0] = 1.0;
        const auto fit = empirical_convergence_rate(P, start, 100);
        CHECK(std::abs(fit.rate - markov_second_eigenvalue(P)) < 0.02);
    }
}
