#include "natopt/stochastic.hpp"

#include "natopt/core.hpp"
#include "natopt/csv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace natopt {

using std::numbers::pi;

double sample_uniform(RandomStream& stream, double lo, double hi)
{
    return stream.uniform(lo, hi);
}

double sample_gaussian(RandomStream& stream)
{
    return stream.gaussian();
}

double cauchy_pdf(double x, const CauchyParams& params)
{
    if (!(params.gamma > 0.0))
        throw ContractViolation("cauchy_pdf: gamma must be positive");
    const double g = params.gamma;
    const double d = x - params.mu;
    return (1.0 / (pi * g)) * (g * g / (d * d + g * g));
}

double cauchy_quantile(double u, const CauchyParams& params)
{
    if (!(params.gamma > 0.0))
        throw ContractViolation("cauchy: gamma must be positive");
    return params.mu + params.gamma * std::tan(pi * (u - 0.5));
}

double sample_cauchy(RandomStream& stream, const CauchyParams& params)
{
    double u = stream.uniform01();
    // u = 0 maps to -inf
    while (u == 0.0)
        u = stream.uniform01();
    return cauchy_quantile(u, params);
}

double levy_tail_density(double s, const LevyParams& params)
{
    if (s == 0.0)
        throw ContractViolation("levy_tail_density: approximation undefined at s = 0");
    if (!(params.beta > 0.0 && params.beta <= 2.0) || !(params.alpha > 0.0))
        throw ContractViolation("levy_tail_density: need 0 < beta <= 2 and alpha > 0");
    const double b = params.beta;
    return params.alpha * b * std::tgamma(b) * std::sin(pi * b / 2.0) /
           (pi * std::pow(std::abs(s), 1.0 + b));
}

static void check_mantegna_beta(double beta)
{
    if (!(beta >= mantegna_min_beta && beta <= mantegna_max_beta))
        throw ContractViolation("Mantegna's method needs 0.3 <= beta <= 1.99, got " + std::to_string(beta));
}

double mantegna_sigma(double beta)
{
    check_mantegna_beta(beta);
    const double num = std::tgamma(1.0 + beta) * std::sin(pi * beta / 2.0);
    const double den = std::tgamma((1.0 + beta) / 2.0) * beta * std::pow(2.0, (beta - 1.0) / 2.0);
    return std::pow(num / den, 1.0 / beta);
}

double mantegna_step(double u, double v, double beta)
{
    return u / std::pow(std::abs(v), 1.0 / beta);
}

double sample_levy_mantegna(RandomStream& stream, double beta)
{
    thread_local double cached_beta = -1.0;
    thread_local double cached_sigma = 0.0;
    if (beta != cached_beta) {
        cached_sigma = mantegna_sigma(beta);
        cached_beta = beta;
    }
    const double sigma = cached_sigma;
    const double u = sigma * stream.gaussian();
    double v = stream.gaussian();
    // v == 0 has probability ~2^-53 and would give an infinite step
    while (v == 0.0)
        v = stream.gaussian();
    return mantegna_step(u, v, beta);
}

StepSampler gaussian_steps()
{
    return [](RandomStream& s) { return s.gaussian(); };
}

StepSampler cauchy_steps(CauchyParams params)
{
    return [params](RandomStream& s) { return sample_cauchy(s, params); };
}

StepSampler levy_steps(double beta)
{
    mantegna_sigma(beta);  // validates beta
    return [beta](RandomStream& s) { return sample_levy_mantegna(s, beta); };
}

WalkTrace random_walk(RandomStream& stream, std::size_t steps, const StepSampler& step)
{
    WalkTrace walk;
    walk.states.reserve(steps + 1);
    double state = 0.0;
    walk.states.push_back(state);
    for (std::size_t t = 0; t < steps; ++t) {
        state += step(stream);
        walk.states.push_back(state);
    }
    return walk;
}

WalkTrace walk_from_steps(std::span<const double> steps)
{
    WalkTrace walk;
    walk.states.reserve(steps.size() + 1);
    double state = 0.0;
    walk.states.push_back(state);
    for (double w : steps) {
        state += w;
        walk.states.push_back(state);
    }
    return walk;
}

std::vector<std::size_t> log_checkpoints(std::size_t first, std::size_t last, std::size_t count)
{
    std::vector<std::size_t> out;
    if (count < 2 || first >= last) {
        out.push_back(last);
        return out;
    }
    const double a = std::log(static_cast<double>(first));
    const double b = std::log(static_cast<double>(last));
    for (std::size_t k = 0; k < count; ++k) {
        double t = a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1);
        auto n = static_cast<std::size_t>(std::llround(std::exp(t)));
        n = std::clamp(n, first, last);
        if (out.empty() || out.back() != n)
            out.push_back(n);
    }
    return out;
}

static double median_of(std::vector<double>& v)
{
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
    double hi = v[m];
    if (v.size() % 2 == 1)
        return hi;
    double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
    return 0.5 * (lo + hi);
}

double diffusion_exponent(std::span<const WalkTrace> ensemble)
{
    if (ensemble.size() < diffusion_min_walks)
        throw ContractViolation("diffusion_exponent: needs at least 100 walks");
    const std::size_t steps = ensemble.front().step_count();
    if (steps < diffusion_min_steps)
        throw ContractViolation("diffusion_exponent: walks need at least 1000 steps");
    for (const auto& w : ensemble)
        if (w.step_count() != steps)
            throw ContractViolation("diffusion_exponent: walks differ in length");

    const auto checkpoints = log_checkpoints(10, steps, 20);
    std::vector<double> xs, ys, dist(ensemble.size());
    for (std::size_t n : checkpoints) {
        for (std::size_t w = 0; w < ensemble.size(); ++w)
            dist[w] = std::abs(ensemble[w].states[n] - ensemble[w].states[0]);
        const double med = median_of(dist);
        if (med > 0.0) {
            xs.push_back(std::log(static_cast<double>(n)));
            ys.push_back(std::log(med));
        }
    }
    if (xs.size() < 2)
        throw ContractViolation("diffusion_exponent: ensemble does not move");

    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

double hill_tail_index(std::span<const double> samples, double top_fraction)
{
    if (samples.size() < 2 || !(top_fraction > 0.0 && top_fraction < 1.0))
        throw ContractViolation("hill_tail_index: need >= 2 samples and 0 < top_fraction < 1");
    std::vector<double> a(samples.size());
    std::transform(samples.begin(), samples.end(), a.begin(), [](double x) { return std::abs(x); });
    std::sort(a.begin(), a.end(), std::greater<>());
    auto k = static_cast<std::size_t>(std::ceil(top_fraction * static_cast<double>(a.size())));
    k = std::clamp<std::size_t>(k, 1, a.size() - 1);
    const double threshold = a[k];
    if (!(threshold > 0.0))
        throw ContractViolation("hill_tail_index: threshold order statistic is zero");
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        acc += std::log(a[i] / threshold);
    return static_cast<double>(k) / acc;
}

void write_walk_csv(std::ostream& out, const WalkTrace& walk)
{
    out << "step,state\n";
    for (std::size_t t = 0; t < walk.states.size(); ++t)
        out << t << ',' << csv::number(walk.states[t]) << '\n';
}

} // namespace natopt
