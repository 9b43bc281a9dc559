// natopt: batch experiments, random walks, stability grids and self-tuning.

#include "natopt/analysis.hpp"
#include "natopt/csv.hpp"
#include "natopt/experiment.hpp"
#include "natopt/stochastic.hpp"
#include "natopt/tuning.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace natopt;

// Bad input from the user: exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs `body` with an output stream bound to `path`, or stdout when empty.
template <typename F>
void with_output(const std::string& path, F&& body)
{
    if (path.empty()) {
        body(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    body(out);
    out.flush();
    if (!out)
        throw std::runtime_error("failed writing " + path);
}

std::vector<double> parse_range(const std::string& text, const char* flag)
{
    double lo, hi, step;
    char c1, c2;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !in.eof())
        throw UsageError(std::string(flag) + " expects LO:HI:STEP, got '" + text + "'");
    try {
        return grid_values(lo, hi, step);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

struct RunOptions {
    std::string config;
    std::string out;
    std::size_t parallel = 1;
    std::optional<std::uint64_t> seed;
};

void cmd_run(const RunOptions& o)
{
    ExperimentConfig cfg = parse_config(read_file(o.config));
    if (o.seed)
        cfg.seed = *o.seed;
    if (!o.out.empty())
        cfg.output = o.out;
    const ExperimentResult result = run_experiment(cfg, o.parallel);
    write_experiment(cfg.output, cfg, result);
    std::cerr << "wrote " << cfg.output << "/report.csv and " << cfg.output << "/runs.csv\n";
}

struct WalkOptions {
    std::string dist;
    double beta = 1.5;
    std::size_t steps = 0;
    std::size_t walks = 0;
    std::uint64_t seed = 0;
    std::string out;
};

void cmd_walk(const WalkOptions& o)
{
    StepSampler sampler;
    if (o.dist == "gaussian") {
        sampler = gaussian_steps();
    } else if (o.dist == "cauchy") {
        sampler = cauchy_steps();
    } else {
        if (!(o.beta >= mantegna_min_beta && o.beta <= mantegna_max_beta))
            throw UsageError("--beta must lie in [0.3, 1.99]");
        sampler = levy_steps(o.beta);
    }
    if (o.steps < 1 || o.walks < 1)
        throw UsageError("--steps and --walks must be positive");

    std::vector<WalkTrace> ensemble;
    ensemble.reserve(o.walks);
    for (std::size_t w = 0; w < o.walks; ++w) {
        RandomStream stream(o.seed, w);
        ensemble.push_back(random_walk(stream, o.steps, sampler));
    }
    with_output(o.out, [&](std::ostream& out) { write_walk_csv(out, ensemble.front()); });
    if (o.walks >= diffusion_min_walks && o.steps >= diffusion_min_steps)
        std::cerr << "diffusion_exponent " << csv::number(diffusion_exponent(ensemble)) << '\n';
    else
        std::cerr << "diffusion_exponent NA (needs >= " << diffusion_min_walks << " walks of >= "
                  << diffusion_min_steps << " steps)\n";
}

struct StabilityOptions {
    std::string theta;
    std::string zeta;
    std::string out;
};

void cmd_stability(const StabilityOptions& o)
{
    const auto thetas = parse_range(o.theta, "--theta");
    const auto zetas = parse_range(o.zeta, "--zeta");
    const auto grid = stability_grid(thetas, zetas);
    with_output(o.out, [&](std::ostream& out) {
        out << "theta,zeta,in_region,spectral_radius\n";
        for (const auto& p : grid)
            csv::write_row(out, {csv::number(p.theta), csv::number(p.zeta), p.in_region ? "1" : "0",
                                 csv::number(p.spectral_radius)});
    });
}

struct TuneOptions {
    std::string config;
    std::string out;
};

void cmd_tune(const TuneOptions& o)
{
    const TuningConfig cfg = parse_tuning_config(read_file(o.config));
    RandomStream stream(cfg.task.seed, meta_stream_id);
    const TuningResult result = self_tune(cfg.task, stream);
    const std::string path = o.out.empty() ? cfg.output : o.out;
    with_output(path, [&](std::ostream& out) { write_tuning_csv(out, cfg.task, result); });
    std::cerr << "best";
    for (const auto& [name, value] : result.best)
        std::cerr << ' ' << name << '=' << csv::number(value);
    std::cerr << " meta_objective=" << csv::number(result.best_value) << " inner_evaluations="
              << result.inner_evaluations << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Nature-inspired optimization toolkit"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto* run = app.add_subcommand("run", "Run a batch experiment from a JSON config");
    run->add_option("--config", run_opts.config, "Experiment config (JSON)")->required();
    run->add_option("--out", run_opts.out, "Output directory (overrides the config)");
    run->add_option("--parallel", run_opts.parallel, "Worker threads")->check(CLI::PositiveNumber);
    run->add_option("--seed", run_opts.seed, "Master seed (overrides the config)");

    WalkOptions walk_opts;
    auto* walk = app.add_subcommand("walk", "Simulate random walks and fit the diffusion exponent");
    walk->add_option("--dist", walk_opts.dist, "Step distribution")
        ->required()
        ->check(CLI::IsMember({"gaussian", "cauchy", "levy"}));
    walk->add_option("--beta", walk_opts.beta, "Levy exponent");
    walk->add_option("--steps", walk_opts.steps, "Steps per walk")->required();
    walk->add_option("--walks", walk_opts.walks, "Number of walks")->required();
    walk->add_option("--seed", walk_opts.seed, "Master seed")->required();
    walk->add_option("--out", walk_opts.out, "CSV file for the first walk (default stdout)");

    StabilityOptions stab_opts;
    auto* stab = app.add_subcommand("stability", "Scan the bat-system stability region");
    stab->add_option("--theta", stab_opts.theta, "LO:HI:STEP")->required();
    stab->add_option("--zeta", stab_opts.zeta, "LO:HI:STEP")->required();
    stab->add_option("--out", stab_opts.out, "CSV file (default stdout)");

    TuneOptions tune_opts;
    auto* tune = app.add_subcommand("tune", "Self-tune an algorithm's parameters");
    tune->add_option("--config", tune_opts.config, "Tuning config (JSON)")->required();
    tune->add_option("--out", tune_opts.out, "CSV file (overrides the config; default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*run)
            cmd_run(run_opts);
        else if (*walk)
            cmd_walk(walk_opts);
        else if (*stab)
            cmd_stability(stab_opts);
        else if (*tune)
            cmd_tune(tune_opts);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
