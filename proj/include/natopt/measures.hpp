#pragma once

#include "natopt/core.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace natopt {

enum class SuccessMode { position, objective };

struct SuccessCriterion {
    SuccessMode mode = SuccessMode::objective;
    double delta = 1e-5;
};

/// |f - f_min| <= delta (objective) or L-infinity distance to the nearest
/// known minimizer <= delta (position).
bool run_succeeded(const RunRecord& record, const SuccessCriterion& criterion, const KnownOptimum& optimum);

/// N_s / N_r over runs of one problem.
double success_rate(std::span<const RunRecord> records, const SuccessCriterion& criterion,
                    const std::optional<KnownOptimum>& optimum);

struct BudgetStats {
    double best;
    double worst;
    double mean;
    double sample_std;  // divisor N_r - 1, zero for a single run
    double median;
};

/// Statistics of final best fitness. All records must share one budget.
BudgetStats fixed_budget_stats(std::span<const RunRecord> records);

/// Statistics of a plain list of values (same definitions).
BudgetStats summarize(std::span<const double> values);

/// First evaluation count whose best-so-far is <= target.
std::optional<std::size_t> evals_to_target(const RunRecord& record, double target);

enum class RankBasis { mean, median };

struct RankingTable {
    /// ranks(a, p): rank of algorithm a on problem p, 1 = best, ties averaged.
    Eigen::MatrixXd ranks;
    /// Mean rank of each algorithm across problems.
    Eigen::VectorXd mean_rank;
};

/// Ranks rows (algorithms) within each column (problem) of a score matrix,
/// lower score is better. NaN cells count as missing and are rejected.
RankingTable rank_algorithms(const Eigen::MatrixXd& scores);

/// Fractional ranks of a list (1 = smallest, ties share the mean rank).
std::vector<double> fractional_ranks(std::span<const double> values);

} // namespace natopt
