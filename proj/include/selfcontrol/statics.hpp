#pragma once

// Comparative statics in the willpower parameter w of the piecewise-linear cost.

#include <span>
#include <string>
#include <vector>

#include "selfcontrol/model.hpp"
#include "selfcontrol/solver.hpp"

namespace selfcontrol {

struct SweepRecord {
    double w = 0.0;
    int case_index = 0;
    std::string sold_id;
    double e_sold = 0.0;
    double u_sold = 0.0;
    double price = 0.0;
    double profit = 0.0;
    double welfare = 0.0;
    ContractKind kind = ContractKind::Commitment;
};

/// Optimal contract at every w of the grid with the instance's l and k. The
/// three regime thresholds falling inside [w_grid.front(), w_grid.back()] are
/// added to the grid. The grid must be strictly increasing and nonnegative.
std::vector<SweepRecord> sweep_willpower(const ProblemInstance& inst, std::span<const double> w_grid,
                                         const SolverOptions& opts = {});

struct CurvePoint {
    double excess = 0.0;  ///< e of the sold alternative
    double markup = 0.0;  ///< price - u of the sold alternative
};

std::vector<CurvePoint> contract_curve(std::span<const SweepRecord> records);

}  // namespace selfcontrol
