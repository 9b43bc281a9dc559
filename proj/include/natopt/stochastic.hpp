#pragma once

#include "natopt/random.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace natopt {

struct CauchyParams {
    double mu = 0.0;
    double gamma = 1.0;
};

/// Lévy law with exponent beta in (0, 2] and scale alpha > 0.
struct LevyParams {
    double beta = 1.5;
    double alpha = 1.0;
};

struct WalkTrace {
    std::vector<double> states;  // S_0 .. S_N, S_0 is the origin

    std::size_t step_count() const { return states.empty() ? 0 : states.size() - 1; }
};

/// Draws one scalar step from a stream.
using StepSampler = std::function<double(RandomStream&)>;

double sample_uniform(RandomStream& stream, double lo, double hi);
double sample_gaussian(RandomStream& stream);

double cauchy_pdf(double x, const CauchyParams& params);

/// Inverse CDF: mu + gamma * tan(pi * (u - 1/2)).
double cauchy_quantile(double u, const CauchyParams& params);
double sample_cauchy(RandomStream& stream, const CauchyParams& params);

/// Large-step approximation alpha*beta*Gamma(beta)*sin(pi*beta/2) / (pi*|s|^(1+beta)).
double levy_tail_density(double s, const LevyParams& params);

inline constexpr double mantegna_min_beta = 0.3;
inline constexpr double mantegna_max_beta = 1.99;

/// sigma_u of Mantegna's method:
/// [Gamma(1+b) sin(pi b/2) / (Gamma((1+b)/2) b 2^((b-1)/2))]^(1/b).
double mantegna_sigma(double beta);

/// u / |v|^(1/beta) for already-drawn u ~ N(0, sigma_u^2), v ~ N(0, 1).
double mantegna_step(double u, double v, double beta);

/// One Lévy-distributed step. Consumes exactly two gaussian draws (u first).
double sample_levy_mantegna(RandomStream& stream, double beta);

/// Ready-made samplers for random_walk.
StepSampler gaussian_steps();
StepSampler cauchy_steps(CauchyParams params = {});
StepSampler levy_steps(double beta);

WalkTrace random_walk(RandomStream& stream, std::size_t steps, const StepSampler& step);

/// Walk from an explicit step list (origin 0).
WalkTrace walk_from_steps(std::span<const double> steps);

inline constexpr std::size_t diffusion_min_walks = 100;
inline constexpr std::size_t diffusion_min_steps = 1000;

/// Log-spaced step counts in [first, last] (duplicates removed).
std::vector<std::size_t> log_checkpoints(std::size_t first, std::size_t last, std::size_t count);

/// Least-squares slope of log(median |S_N|) against log(N) over log-spaced
/// checkpoints N in [10, steps]. Requires >= 100 walks of equal length >= 1000.
double diffusion_exponent(std::span<const WalkTrace> ensemble);

/// Hill estimate of the survival tail index from the largest
/// ceil(top_fraction * n) absolute values.
double hill_tail_index(std::span<const double> samples, double top_fraction = 0.01);

/// "step,state" CSV, one row per state.
void write_walk_csv(std::ostream& out, const WalkTrace& walk);

} // namespace natopt
