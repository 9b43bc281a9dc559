#include "natopt/experiment.hpp"

#include "natopt/csv.hpp"
#include "natopt/measures.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

namespace natopt {

using json = nlohmann::ordered_json;

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            ok = ok || key == a;
        if (!ok)
            throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

double get_number(const json& obj, const char* key, const std::string& where)
{
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
}

std::size_t get_count(const json& obj, const char* key, const std::string& where)
{
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(where + "." + key + " must be a non-negative integer");
    return v.get<std::size_t>();
}

std::string get_string(const json& obj, const char* key, const std::string& where)
{
    const json& v = obj.at(key);
    if (!v.is_string())
        throw ConfigError(where + "." + key + " must be a string");
    return v.get<std::string>();
}

json parse_json(std::string_view text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
}

const AlgorithmDescriptor& lookup_algorithm(const std::string& name, const std::string& where)
{
    try {
        return find_algorithm(name);
    } catch (const ParameterError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

AlgorithmEntry parse_algorithm(const json& j, const std::string& where)
{
    AlgorithmEntry entry;
    if (j.is_string()) {
        entry.name = j.get<std::string>();
    } else if (j.is_object()) {
        check_keys(j, where, {"name", "label", "params", "schedules", "per_coordinate"});
        if (!j.contains("name"))
            throw ConfigError(where + ": missing key 'name'");
        entry.name = get_string(j, "name", where);
        if (j.contains("label"))
            entry.label = get_string(j, "label", where);
        if (j.contains("params")) {
            const json& params = j.at("params");
            if (!params.is_object())
                throw ConfigError(where + ".params must be an object");
            for (const auto& [key, value] : params.items()) {
                if (!value.is_number())
                    throw ConfigError(where + ".params." + key + " must be a number");
                entry.parameters[key] = value.get<double>();
            }
        }
        if (j.contains("schedules")) {
            const json& list = j.at("schedules");
            if (!list.is_array())
                throw ConfigError(where + ".schedules must be an array");
            for (std::size_t i = 0; i < list.size(); ++i) {
                const std::string w = where + ".schedules[" + std::to_string(i) + "]";
                const json& s = list[i];
                if (!s.is_object())
                    throw ConfigError(w + " must be an object");
                check_keys(s, w, {"parameter", "kind", "start", "end"});
                for (const char* k : {"parameter", "kind", "start", "end"})
                    if (!s.contains(k))
                        throw ConfigError(w + ": missing key '" + k + "'");
                ParameterSchedule sched;
                sched.parameter = get_string(s, "parameter", w);
                try {
                    sched.kind = parse_schedule_kind(get_string(s, "kind", w));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(w + ".kind: " + e.what());
                }
                sched.start = get_number(s, "start", w);
                sched.end = get_number(s, "end", w);
                entry.schedules.push_back(sched);
            }
        }
        if (j.contains("per_coordinate")) {
            if (!j.at("per_coordinate").is_boolean())
                throw ConfigError(where + ".per_coordinate must be true or false");
            entry.per_coordinate = j.at("per_coordinate").get<bool>();
        }
    } else {
        throw ConfigError(where + " must be a name or an object");
    }

    const AlgorithmDescriptor& d = lookup_algorithm(entry.name, where);
    try {
        resolve_parameters(d, entry.parameters);
    } catch (const ParameterError& e) {
        throw ConfigError(where + ".params: " + e.what());
    }
    for (const auto& s : entry.schedules) {
        const ParameterSpec* spec = d.find(s.parameter);
        if (!spec)
            throw ConfigError(where + ".schedules: algorithm '" + d.name + "' has no parameter '" + s.parameter + "'");
        if (!spec->admits(s.start) || !spec->admits(s.end))
            throw ConfigError(where + ".schedules: endpoints for " + s.parameter + " must lie in " +
                              spec->range_text());
        if (s.kind == ScheduleKind::geometric && !(s.start * s.end > 0.0))
            throw ConfigError(where + ".schedules: geometric schedule for " + s.parameter +
                              " needs nonzero endpoints of equal sign");
    }
    if (entry.per_coordinate && d.name != "pso")
        throw ConfigError(where + ".per_coordinate applies to pso only");
    if (entry.label.empty())
        entry.label = entry.name;
    return entry;
}

ProblemEntry parse_problem(const json& j, const std::string& where)
{
    ProblemEntry entry;
    if (!j.is_object())
        throw ConfigError(where + " must be an object");
    check_keys(j, where, {"name", "label", "dimension", "N", "a", "policy"});
    if (!j.contains("name"))
        throw ConfigError(where + ": missing key 'name'");
    entry.name = get_string(j, "name", where);
    if (!is_problem_name(entry.name)) {
        std::string names;
        for (const auto& n : problem_names())
            names += (names.empty() ? "" : ", ") + n;
        throw ConfigError(where + ": unknown problem '" + entry.name + "' (expected one of " + names + ")");
    }
    if (j.contains("label"))
        entry.label = get_string(j, "label", where);
    const bool island = entry.name == "island";
    if (island) {
        if (j.contains("dimension") && !(j.at("dimension").is_number_integer() && j.at("dimension") == 2))
            throw ConfigError(where + ".dimension: island is two-dimensional");
        if (j.contains("N")) {
            const json& v = j.at("N");
            if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 100000)
                throw ConfigError(where + ".N must be an integer in [1, 100000]");
            entry.island.N = v.get<int>();
        }
        if (j.contains("a")) {
            entry.island.a = get_number(j, "a", where);
            if (!(entry.island.a > 2.0))
                throw ConfigError(where + ".a must exceed 2 so that islands stay disjoint");
        }
        if (j.contains("policy")) {
            try {
                entry.policy = parse_constraint_policy(get_string(j, "policy", where));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(where + ".policy: " + e.what());
            }
        }
    } else {
        for (const char* k : {"N", "a", "policy"})
            if (j.contains(k))
                throw ConfigError(where + "." + k + " applies to the island problem only");
        if (!j.contains("dimension"))
            throw ConfigError(where + ": missing key 'dimension'");
        const json& v = j.at("dimension");
        if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 100000)
            throw ConfigError(where + ".dimension must be an integer in [1, 100000]");
        entry.dimension = v.get<int>();
        if (entry.name == "rosenbrock" && entry.dimension < 2)
            throw ConfigError(where + ".dimension: rosenbrock needs at least 2");
    }
    if (entry.label.empty())
        entry.label = entry.name;
    return entry;
}

std::vector<ProblemEntry> parse_problem_list(const json& root, const std::string& key)
{
    if (!root.contains(key))
        throw ConfigError("missing key '" + key + "'");
    const json& list = root.at(key);
    if (!list.is_array() || list.empty())
        throw ConfigError(key + " must be a non-empty array");
    std::vector<ProblemEntry> out;
    std::set<std::string> labels;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = key + "[" + std::to_string(i) + "]";
        out.push_back(parse_problem(list[i], where));
        if (!labels.insert(out.back().label).second)
            throw ConfigError(where + ": duplicate problem label '" + out.back().label + "' (set 'label')");
    }
    return out;
}

std::string na_or(const std::optional<double>& v)
{
    return v ? csv::number(*v) : std::string("NA");
}

} // namespace

Problem ProblemEntry::build() const
{
    Problem p = name == "island" ? make_island_problem(island, policy) : make_standard_problem(name, dimension);
    p.name = label;
    return p;
}

ExperimentConfig parse_config(std::string_view json_text)
{
    const json root = parse_json(json_text);
    if (!root.is_object())
        throw ConfigError("configuration must be a JSON object");
    check_keys(root, "config",
               {"algorithms", "problems", "population_size", "budget", "runs", "seed", "delta", "output"});

    ExperimentConfig cfg;
    if (!root.contains("algorithms"))
        throw ConfigError("missing key 'algorithms'");
    const json& algos = root.at("algorithms");
    if (!algos.is_array() || algos.empty())
        throw ConfigError("algorithms must be a non-empty array");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < algos.size(); ++i) {
        const std::string where = "algorithms[" + std::to_string(i) + "]";
        cfg.algorithms.push_back(parse_algorithm(algos[i], where));
        if (!labels.insert(cfg.algorithms.back().label).second)
            throw ConfigError(where + ": duplicate algorithm label '" + cfg.algorithms.back().label + "' (set 'label')");
    }
    cfg.problems = parse_problem_list(root, "problems");

    if (root.contains("population_size"))
        cfg.population_size = get_count(root, "population_size", "config");
    if (root.contains("budget"))
        cfg.budget = get_count(root, "budget", "config");
    if (root.contains("runs"))
        cfg.runs = get_count(root, "runs", "config");
    if (root.contains("seed")) {
        const json& v = root.at("seed");
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            throw ConfigError("config.seed must be a non-negative integer");
        cfg.seed = v.get<std::uint64_t>();
    }
    if (root.contains("delta")) {
        cfg.delta = get_number(root, "delta", "config");
        if (!(cfg.delta > 0.0))
            throw ConfigError("config.delta must be positive");
    }
    if (root.contains("output"))
        cfg.output = get_string(root, "output", "config");

    if (cfg.runs < 1)
        throw ConfigError("config.runs must be at least 1");
    if (cfg.population_size < 1)
        throw ConfigError("config.population_size must be at least 1");
    if (cfg.budget < cfg.population_size)
        throw ConfigError("config.budget must be at least population_size (" + std::to_string(cfg.population_size) +
                          ")");
    for (const auto& a : cfg.algorithms) {
        const auto& d = find_algorithm(a.name);
        if (cfg.population_size < d.min_population)
            throw ConfigError("config.population_size: " + d.name + " needs at least " +
                              std::to_string(d.min_population) + " members");
        if (d.name == "ga") {
            const auto elite = resolve_parameters(d, a.parameters).at("elite_count");
            if (elite >= static_cast<double>(cfg.population_size))
                throw ConfigError("algorithms: ga elite_count must be below population_size");
        }
    }
    return cfg;
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t threads)
{
    const std::size_t n_alg = config.algorithms.size();
    const std::size_t n_prob = config.problems.size();
    std::vector<Problem> problems;
    for (const auto& p : config.problems)
        problems.push_back(p.build());

    ExperimentResult result;
    for (std::size_t a = 0; a < n_alg; ++a)
        for (std::size_t p = 0; p < n_prob; ++p)
            result.cells.push_back({a, p, std::vector<RunRecord>(config.runs)});

    const std::size_t total = result.cells.size() * config.runs;
    auto execute = [&](std::size_t task) {
        const std::size_t cell = task / config.runs;
        const std::size_t r = task % config.runs;
        const AlgorithmEntry& alg = config.algorithms[result.cells[cell].algorithm];
        RunSettings settings;
        settings.population_size = config.population_size;
        settings.budget = config.budget;
        settings.schedules = alg.schedules;
        settings.pso_per_coordinate = alg.per_coordinate;
        RandomStream stream(config.seed, run_stream_id(cell, r));
        RunRecord rec = run(alg.name, alg.parameters, problems[result.cells[cell].problem], settings, stream);
        rec.algorithm = alg.label;
        result.cells[cell].runs[r] = std::move(rec);
    };

    threads = std::max<std::size_t>(1, std::min(threads, total));
    if (threads == 1) {
        for (std::size_t t = 0; t < total; ++t)
            execute(t);
        return result;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t t = next++; t < total; t = next++) {
                    try {
                        execute(t);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                        next = total;
                    }
                }
            });
    }
    if (failure)
        std::rethrow_exception(failure);
    return result;
}

void write_report_csv(std::ostream& out, const ExperimentConfig& config, const ExperimentResult& result)
{
    const std::size_t n_alg = config.algorithms.size();
    const std::size_t n_prob = config.problems.size();
    std::vector<Problem> problems;
    for (const auto& p : config.problems)
        problems.push_back(p.build());

    Eigen::MatrixXd means(n_alg, n_prob);
    std::vector<BudgetStats> stats(result.cells.size());
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        stats[c] = fixed_budget_stats(result.cells[c].runs);
        means(result.cells[c].algorithm, result.cells[c].problem) = stats[c].mean;
    }
    Eigen::MatrixXd ranks = Eigen::MatrixXd::Ones(n_alg, n_prob);
    if (n_alg >= 2)
        ranks = rank_algorithms(means).ranks;

    out << report_header << '\n';
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        const CellResult& cell = result.cells[c];
        const Problem& problem = problems[cell.problem];
        std::optional<double> obj, pos, mean_evals;
        if (problem.optimum) {
            obj = success_rate(cell.runs, {SuccessMode::objective, config.delta}, problem.optimum);
            pos = success_rate(cell.runs, {SuccessMode::position, config.delta}, problem.optimum);
            double sum = 0.0;
            std::size_t hits = 0;
            for (const auto& r : cell.runs)
                if (auto e = evals_to_target(r, problem.optimum->value + config.delta)) {
                    sum += static_cast<double>(*e);
                    ++hits;
                }
            if (hits > 0)
                mean_evals = sum / static_cast<double>(hits);
        }
        const BudgetStats& s = stats[c];
        csv::write_row(out, {csv::field(config.algorithms[cell.algorithm].label),
                             csv::field(config.problems[cell.problem].label), std::to_string(cell.runs.size()),
                             csv::number(s.best), csv::number(s.worst), csv::number(s.mean),
                             csv::number(s.sample_std), csv::number(s.median), na_or(obj), na_or(pos),
                             na_or(mean_evals), csv::number(ranks(cell.algorithm, cell.problem))});
    }
}

void write_raw_csv(std::ostream& out, const ExperimentConfig& config, const ExperimentResult& result)
{
    std::vector<Problem> problems;
    for (const auto& p : config.problems)
        problems.push_back(p.build());

    out << raw_header << '\n';
    std::size_t run_id = 0;
    for (const CellResult& cell : result.cells) {
        const Problem& problem = problems[cell.problem];
        for (const RunRecord& r : cell.runs) {
            std::string obj = "NA", pos = "NA";
            if (problem.optimum) {
                obj = run_succeeded(r, {SuccessMode::objective, config.delta}, *problem.optimum) ? "1" : "0";
                pos = run_succeeded(r, {SuccessMode::position, config.delta}, *problem.optimum) ? "1" : "0";
            }
            csv::write_row(out, {std::to_string(run_id++), csv::field(config.algorithms[cell.algorithm].label),
                                 csv::field(config.problems[cell.problem].label), std::to_string(r.dimension),
                                 std::to_string(r.engine_seed), std::to_string(r.evaluations),
                                 csv::number(r.best_fitness), obj, pos, csv::number(r.wall_ms)});
        }
    }
}

void write_experiment(const std::filesystem::path& directory, const ExperimentConfig& config,
                      const ExperimentResult& result)
{
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + directory.string() + ": " + ec.message());
    auto write = [&](const char* name, auto&& writer) {
        const auto path = directory / name;
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write " + path.string());
        writer(out, config, result);
        out.flush();
        if (!out)
            throw std::runtime_error("failed writing " + path.string());
    };
    write("report.csv", write_report_csv);
    write("runs.csv", write_raw_csv);
}

TuningConfig parse_tuning_config(std::string_view json_text)
{
    const json root = parse_json(json_text);
    if (!root.is_object())
        throw ConfigError("tuning configuration must be a JSON object");
    check_keys(root, "config",
               {"algorithm", "bounds", "problems", "inner_budget", "repetitions", "meta_budget", "weight",
                "population_size", "meta_population", "seed", "target_delta", "output"});

    TuningConfig cfg;
    TuningTask& task = cfg.task;
    if (!root.contains("algorithm"))
        throw ConfigError("missing key 'algorithm'");
    task.algorithm = get_string(root, "algorithm", "config");
    const AlgorithmDescriptor& d = lookup_algorithm(task.algorithm, "config.algorithm");

    if (!root.contains("bounds"))
        throw ConfigError("missing key 'bounds'");
    const json& bounds = root.at("bounds");
    if (!bounds.is_object() || bounds.empty())
        throw ConfigError("bounds must be a non-empty object of [lo, hi] pairs");
    for (const auto& [key, value] : bounds.items()) {
        const std::string where = "bounds." + key;
        if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number())
            throw ConfigError(where + " must be a [lo, hi] pair");
        task.bounds.push_back({key, value[0].get<double>(), value[1].get<double>()});
    }
    for (const auto& p : parse_problem_list(root, "problems"))
        task.problems.push_back(p.build());

    if (root.contains("inner_budget"))
        task.inner_budget = get_count(root, "inner_budget", "config");
    if (root.contains("repetitions"))
        task.repetitions = get_count(root, "repetitions", "config");
    if (root.contains("meta_budget"))
        task.meta_budget = get_count(root, "meta_budget", "config");
    if (root.contains("weight"))
        task.weight = get_number(root, "weight", "config");
    if (root.contains("population_size"))
        task.population_size = get_count(root, "population_size", "config");
    if (root.contains("meta_population"))
        task.meta_population = get_count(root, "meta_population", "config");
    if (root.contains("seed")) {
        const json& v = root.at("seed");
        if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0))
            throw ConfigError("config.seed must be a non-negative integer");
        task.seed = v.get<std::uint64_t>();
    }
    if (root.contains("target_delta")) {
        task.target_delta = get_number(root, "target_delta", "config");
        if (!(task.target_delta > 0.0))
            throw ConfigError("config.target_delta must be positive");
    }
    if (root.contains("output"))
        cfg.output = get_string(root, "output", "config");

    if (task.population_size < d.min_population)
        throw ConfigError("config.population_size: " + d.name + " needs at least " +
                          std::to_string(d.min_population) + " members");
    try {
        validate(task);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

} // namespace natopt
