#include "natopt/analysis.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace natopt {

const char* to_string(Stability s)
{
    switch (s) {
    case Stability::asymptotically_stable: return "asymptotically_stable";
    case Stability::marginally_stable: return "marginally_stable";
    case Stability::unstable: return "unstable";
    }
    return "unstable";
}

const char* to_string(ConvergenceStatus s)
{
    switch (s) {
    case ConvergenceStatus::converged: return "converged";
    case ConvergenceStatus::degenerate: return "degenerate";
    case ConvergenceStatus::non_convergent: return "non_convergent";
    }
    return "non_convergent";
}

std::vector<double> grid_values(double lo, double hi, double step)
{
    if (!(step > 0.0) || !(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("grid: need lo <= hi and step > 0");
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double v = lo + static_cast<double>(k) * step;
        out.push_back(std::round(v * 1e9) / 1e9);
    }
    return out;
}

std::vector<StabilityPoint> stability_grid(const std::vector<double>& thetas, const std::vector<double>& zetas)
{
    std::vector<StabilityPoint> out;
    out.reserve(thetas.size() * zetas.size());
    for (double theta : thetas)
        for (double zeta : zetas) {
            const auto sys = ba_system_matrix(theta, zeta);
            out.push_back({theta, zeta, ba_stability_region(theta, zeta), spectral_radius(sys.C)});
        }
    return out;
}

double euclidean_metric(const Vector& a, const Vector& b)
{
    return (a - b).norm();
}

double contraction_factor(const PointMap& map, const Metric& metric, const Vector& lower, const Vector& upper,
                          std::size_t samples, RandomStream& stream)
{
    if (samples == 0)
        throw ContractViolation("contraction_factor: needs at least one sample pair");
    if (lower.size() != upper.size() || !(lower.array() < upper.array()).all())
        throw ContractViolation("contraction_factor: bad sampling box");
    auto draw = [&] {
        Vector x(lower.size());
        for (Eigen::Index k = 0; k < x.size(); ++k)
            x[k] = stream.uniform(lower[k], upper[k]);
        return x;
    };
    double worst = -1.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const Vector x = draw();
        const Vector y = draw();
        const double d = metric(x, y);
        if (d < 1e-12)
            continue;
        worst = std::max(worst, metric(map(x), map(y)) / d);
    }
    if (worst < 0.0)
        throw std::runtime_error("contraction_factor: no valid sample pairs");
    return worst;
}

void validate_transition_matrix(const Eigen::MatrixXd& P)
{
    if (P.rows() != P.cols() || P.rows() < 2)
        throw ContractViolation("transition matrix must be square with at least 2 states");
    if (!P.allFinite() || (P.array() < 0.0).any() || (P.array() > 1.0).any())
        throw ContractViolation("transition matrix entries must lie in [0, 1]");
    for (Eigen::Index r = 0; r < P.rows(); ++r)
        if (std::abs(P.row(r).sum() - 1.0) > 1e-12)
            throw ContractViolation("transition matrix row " + std::to_string(r) + " does not sum to 1");
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& P)
{
    validate_transition_matrix(P);
    const Eigen::Index m = P.rows();
    Eigen::MatrixXd A(m + 1, m);
    A.topRows(m) = P.transpose() - Eigen::MatrixXd::Identity(m, m);
    A.row(m).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
    b[m] = 1.0;
    Eigen::VectorXd pi = A.colPivHouseholderQr().solve(b);
    pi = pi.cwiseMax(0.0);
    return pi / pi.sum();
}

double markov_second_eigenvalue(const Eigen::MatrixXd& P)
{
    validate_transition_matrix(P);
    if (P.rows() > 64)
        return markov_second_eigenvalue_power(P);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(P, false);
    const Eigen::VectorXcd values = solver.eigenvalues();
    Eigen::Index unit = 0;
    for (Eigen::Index i = 1; i < values.size(); ++i)
        if (std::abs(values[i] - 1.0) < std::abs(values[unit] - 1.0))
            unit = i;
    double second = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (i != unit)
            second = std::max(second, std::abs(values[i]));
    return std::min(second, 1.0);
}

double markov_second_eigenvalue_power(const Eigen::MatrixXd& P, std::size_t iterations)
{
    validate_transition_matrix(P);
    const Eigen::Index m = P.rows();
    const Eigen::VectorXd pi = stationary_distribution(P);
    // P - 1 pi^T keeps every eigenvalue of P except 1, which becomes 0
    const Eigen::MatrixXd A = P - Eigen::VectorXd::Ones(m) * pi.transpose();
    Eigen::VectorXd x(m);
    for (Eigen::Index i = 0; i < m; ++i)
        x[i] = std::sin(1.0 + static_cast<double>(i));
    x.normalize();
    const std::size_t burn_in = iterations / 2;
    double log_growth = 0.0;
    for (std::size_t k = 0; k < iterations; ++k) {
        x = A * x;
        const double norm = x.norm();
        if (norm < 1e-300)
            return 0.0;
        if (k >= burn_in)
            log_growth += std::log(norm);
        x /= norm;
    }
    return std::min(1.0, std::exp(log_growth / static_cast<double>(iterations - burn_in)));
}

ConvergenceFit empirical_convergence_rate(const Eigen::MatrixXd& P, const Eigen::VectorXd& initial,
                                          std::size_t k_max)
{
    validate_transition_matrix(P);
    if (initial.size() != P.rows() || (initial.array() < 0.0).any() || std::abs(initial.sum() - 1.0) > 1e-9)
        throw ContractViolation("initial distribution must be non-negative and sum to 1");
    if (k_max < 2)
        throw ContractViolation("empirical_convergence_rate: k_max must be at least 2");

    ConvergenceFit fit;
    if (markov_second_eigenvalue(P) >= 1.0 - 1e-9) {
        fit.status = ConvergenceStatus::non_convergent;
        fit.rate = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    const Eigen::VectorXd pi = stationary_distribution(P);
    Eigen::RowVectorXd mu = initial.transpose();
    for (std::size_t k = 0; k <= k_max; ++k) {
        fit.distances.push_back(0.5 * (mu.transpose() - pi).cwiseAbs().sum());
        mu = mu * P;
    }
    const double d0 = fit.distances.front();
    if (d0 <= 1e-15) {
        fit.status = ConvergenceStatus::degenerate;
        fit.rate = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    // only distances well above rounding noise carry rate information
    const double floor = 1e-12 * d0;
    std::size_t end = 0;
    while (end < fit.distances.size() && fit.distances[end] > floor)
        ++end;
    if (end <= 1) {
        fit.rate = 0.0;
        return fit;
    }
    std::size_t begin = end / 2;
    if (end - begin < 2)
        begin = 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(end - begin);
    for (std::size_t k = begin; k < end; ++k) {
        const double x = static_cast<double>(k);
        const double y = std::log(fit.distances[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.rate = std::exp(slope);
    return fit;
}

} // namespace natopt
