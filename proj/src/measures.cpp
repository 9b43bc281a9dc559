#include "natopt/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace natopt {

bool run_succeeded(const RunRecord& record, const SuccessCriterion& criterion, const KnownOptimum& optimum)
{
    if (!(criterion.delta > 0.0))
        throw ContractViolation("success criterion: delta must be positive");
    if (criterion.mode == SuccessMode::objective)
        return std::abs(record.best_fitness - optimum.value) <= criterion.delta;
    if (record.best_position.size() == 0)
        return false;
    for (const auto& x : optimum.positions) {
        if (x.size() != record.best_position.size())
            throw ContractViolation("success criterion: optimum dimension mismatch");
        if ((record.best_position - x).cwiseAbs().maxCoeff() <= criterion.delta)
            return true;
    }
    return false;
}

double success_rate(std::span<const RunRecord> records, const SuccessCriterion& criterion,
                    const std::optional<KnownOptimum>& optimum)
{
    if (!optimum)
        throw std::invalid_argument("success_rate: problem has no known optimum");
    if (records.empty())
        throw ContractViolation("success_rate: needs at least one run");
    for (const auto& r : records)
        if (r.problem != records.front().problem)
            throw ContractViolation("success_rate: records mix problems");
    std::size_t hits = 0;
    for (const auto& r : records)
        if (run_succeeded(r, criterion, *optimum))
            ++hits;
    return static_cast<double>(hits) / static_cast<double>(records.size());
}

BudgetStats summarize(std::span<const double> values)
{
    if (values.empty())
        throw ContractViolation("summarize: no values");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v)
        ss += (x - mean) * (x - mean);
    const std::size_t m = v.size() / 2;
    const double median = v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
    return {v.front(), v.back(), mean, v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0, median};
}

BudgetStats fixed_budget_stats(std::span<const RunRecord> records)
{
    if (records.empty())
        throw ContractViolation("fixed_budget_stats: needs at least one run");
    for (const auto& r : records)
        if (r.budget != records.front().budget)
            throw ContractViolation("fixed_budget_stats: runs used different evaluation budgets (" +
                                    std::to_string(records.front().budget) + " vs " + std::to_string(r.budget) + ")");
    std::vector<double> finals;
    finals.reserve(records.size());
    for (const auto& r : records)
        finals.push_back(r.best_fitness);
    return summarize(finals);
}

std::optional<std::size_t> evals_to_target(const RunRecord& record, double target)
{
    for (const auto& point : record.trace)
        if (point.best_fitness <= target)
            return point.evaluations;
    return std::nullopt;
}

std::vector<double> fractional_ranks(std::span<const double> values)
{
    const std::size_t m = values.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(m);
    for (std::size_t i = 0; i < m;) {
        std::size_t j = i;
        while (j + 1 < m && values[order[j + 1]] == values[order[i]])
            ++j;
        // positions i..j share ranks i+1..j+1
        const double shared = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

RankingTable rank_algorithms(const Eigen::MatrixXd& scores)
{
    if (scores.rows() < 2)
        throw ContractViolation("rank_algorithms: needs at least two algorithms");
    if (scores.cols() < 1)
        throw ContractViolation("rank_algorithms: needs at least one problem");
    if (scores.array().isNaN().any())
        throw std::invalid_argument("rank_algorithms: missing (algorithm, problem) cell");
    RankingTable table;
    table.ranks.resize(scores.rows(), scores.cols());
    for (Eigen::Index p = 0; p < scores.cols(); ++p) {
        const Eigen::VectorXd column = scores.col(p);
        const auto r = fractional_ranks(std::span<const double>(column.data(), static_cast<std::size_t>(column.size())));
        for (Eigen::Index a = 0; a < scores.rows(); ++a)
            table.ranks(a, p) = r[static_cast<std::size_t>(a)];
    }
    table.mean_rank = table.ranks.rowwise().mean();
    return table;
}

} // namespace natopt
