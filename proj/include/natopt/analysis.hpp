#pragma once

#include "natopt/core.hpp"
#include "natopt/random.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace natopt {

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

/// Linear bat-algorithm model Y_{k+1} = C Y_k + M g with state Y = (x, v).
template <typename Scalar>
struct BASystem {
    Matrix2<Scalar> C;
    Vector2<Scalar> M;
};

template <typename Scalar>
struct BASystemParams {
    Scalar theta;
    Scalar zeta;
    Scalar g;
};

/// C = [[1 - zeta, theta], [-zeta, theta]], M = (zeta, zeta).
template <typename Scalar>
BASystem<Scalar> ba_system_matrix(Scalar theta, Scalar zeta)
{
    BASystem<Scalar> s;
    s.C << Scalar(1) - zeta, theta,
           -zeta, theta;
    s.M << zeta, zeta;
    return s;
}

/// Eigenvalues of a real 2x2 matrix from its characteristic polynomial
/// lambda^2 - tr lambda + det.
template <typename Derived>
std::pair<std::complex<typename Derived::Scalar>, std::complex<typename Derived::Scalar>>
eigenvalues2(const Eigen::MatrixBase<Derived>& c)
{
    static_assert(Derived::RowsAtCompileTime == 2 && Derived::ColsAtCompileTime == 2);
    using Scalar = typename Derived::Scalar;
    using std::sqrt;
    const Scalar tr = c.trace();
    const Scalar det = c.determinant();
    const Scalar disc = tr * tr - Scalar(4) * det;
    if (disc < Scalar(0)) {
        const Scalar im = sqrt(-disc) / Scalar(2);
        return {{tr / Scalar(2), im}, {tr / Scalar(2), -im}};
    }
    const Scalar root = sqrt(disc);
    // avoid cancellation: larger-magnitude root first, other from det / root
    const Scalar big = tr >= Scalar(0) ? (tr + root) / Scalar(2) : (tr - root) / Scalar(2);
    const Scalar small = big != Scalar(0) ? det / big : Scalar(0);
    return {{big, Scalar(0)}, {small, Scalar(0)}};
}

/// Largest eigenvalue modulus of a 2x2 matrix; sqrt(det) for complex pairs.
template <typename Derived>
typename Derived::Scalar spectral_radius(const Eigen::MatrixBase<Derived>& c)
{
    using Scalar = typename Derived::Scalar;
    using std::abs;
    using std::sqrt;
    const Scalar tr = c.trace();
    const Scalar det = c.determinant();
    if (tr * tr - Scalar(4) * det < Scalar(0))
        return sqrt(det);
    auto [a, b] = eigenvalues2(c);
    return std::max(abs(a.real()), abs(b.real()));
}

enum class Stability { asymptotically_stable, marginally_stable, unstable };

const char* to_string(Stability s);

inline constexpr double stability_tolerance = 1e-12;

template <typename Derived>
Stability lyapunov_verdict(const Eigen::MatrixBase<Derived>& c)
{
    const double rho = static_cast<double>(spectral_radius(c));
    if (rho < 1.0 - stability_tolerance)
        return Stability::asymptotically_stable;
    if (rho <= 1.0 + stability_tolerance)
        return Stability::marginally_stable;
    return Stability::unstable;
}

/// -1 <= theta <= 1, zeta >= 0 and 2 theta - zeta + 2 >= 0.
template <typename Scalar>
bool ba_stability_region(Scalar theta, Scalar zeta)
{
    return theta >= Scalar(-1) && theta <= Scalar(1) && zeta >= Scalar(0) &&
           Scalar(2) * theta - zeta + Scalar(2) >= Scalar(0);
}

/// States Y_0 .. Y_k of the linear bat system (both updates read Y_{k}).
template <typename Scalar>
std::vector<Vector2<Scalar>> simulate_ba_system(const BASystemParams<Scalar>& params, Scalar x0, Scalar v0,
                                                std::size_t steps)
{
    const auto sys = ba_system_matrix(params.theta, params.zeta);
    std::vector<Vector2<Scalar>> states;
    states.reserve(steps + 1);
    Vector2<Scalar> y(x0, v0);
    states.push_back(y);
    const Vector2<Scalar> forcing = sys.M * params.g;
    for (std::size_t k = 0; k < steps; ++k) {
        y = (sys.C * y + forcing).eval();
        states.push_back(y);
    }
    return states;
}

/// One row of a (theta, zeta) stability scan.
struct StabilityPoint {
    double theta;
    double zeta;
    bool in_region;
    double spectral_radius;
};

/// Inclusive grid lo, lo + step, ..., hi (values snapped to 1e-9 so decimal
/// steps land on their boundary values exactly).
std::vector<double> grid_values(double lo, double hi, double step);

std::vector<StabilityPoint> stability_grid(const std::vector<double>& thetas, const std::vector<double>& zetas);

// ---------------------------------------------------------------------------
// Contraction
// ---------------------------------------------------------------------------

using PointMap = std::function<Vector(const Vector&)>;
using Metric = std::function<double(const Vector&, const Vector&)>;

double euclidean_metric(const Vector& a, const Vector& b);

/// max over sampled pairs of rho(A x, A y) / rho(x, y), pairs drawn
/// uniformly from the box [lower, upper]; pairs closer than 1e-12 are skipped.
/// An empirical lower bound on the Lipschitz constant of the map.
double contraction_factor(const PointMap& map, const Metric& metric, const Vector& lower, const Vector& upper,
                          std::size_t samples, RandomStream& stream);

// ---------------------------------------------------------------------------
// Markov chains
// ---------------------------------------------------------------------------

/// Throws ContractViolation unless P is square (m >= 2), entries lie in
/// [0, 1] and every row sums to 1 within 1e-12.
void validate_transition_matrix(const Eigen::MatrixXd& P);

/// Stationary distribution pi = pi P (least-squares solution with sum 1).
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& P);

/// Second-largest eigenvalue modulus. Full eigendecomposition for m <= 64,
/// power iteration on the deflated matrix P - 1 pi^T above that.
double markov_second_eigenvalue(const Eigen::MatrixXd& P);

/// Power-iteration route, exposed for cross-checks.
double markov_second_eigenvalue_power(const Eigen::MatrixXd& P, std::size_t iterations = 4000);

enum class ConvergenceStatus { converged, degenerate, non_convergent };

const char* to_string(ConvergenceStatus s);

struct ConvergenceFit {
    ConvergenceStatus status = ConvergenceStatus::converged;
    double rate = 0.0;                // fitted geometric decay ratio
    std::vector<double> distances;    // total-variation distance at k = 0..k_max
};

/// Iterates mu_{k+1} = mu_k P, records TV distance to the stationary law and
/// fits the geometric ratio over the tail half of the horizon.
ConvergenceFit empirical_convergence_rate(const Eigen::MatrixXd& P, const Eigen::VectorXd& initial,
                                          std::size_t k_max = 100);

} // namespace natopt
