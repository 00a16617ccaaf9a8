#pragma once

// Brute-force check of the analytic contracts: enumerate menus on a price grid,
// run each through the consumer model and keep the most profitable accepted one.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "selfcontrol/model.hpp"
#include "selfcontrol/solver.hpp"

namespace selfcontrol {

class GridTooLarge : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct GridSpec {
    double price_step = 0.01;
    double price_min = 0.0;
    double price_max = 20.0;
    int max_menu_size = 3;
    /// Add every alternative's commitment, indulging, compromising and decoy
    /// prices to its grid.
    bool include_analytic_prices = false;
    /// Credit a menu only if the consumer strictly prefers the credited offer
    /// after its price is lowered by `discount` (no tie tolerance).
    bool epsilon_discount = false;
    double discount = 1e-9;
    /// Enumerate every price tuple instead of pinning the bait's price.
    bool exhaustive = false;
};

/// Throws GridTooLarge when a grid exceeds 10^4 points per alternative or the
/// enumeration would exceed max_evaluations menus.
void validate_grid(const GridSpec& grid, std::size_t n_alternatives, double max_evaluations = 4e9);

struct GridSearchResult {
    std::vector<Offer> menu;  ///< empty if no menu on the grid is accepted
    std::size_t chosen = 0;
    double profit = 0.0;
    double welfare = 0.0;
    std::size_t evaluations = 0;
};

/// Price points searched for alternative `alt`, ascending.
std::vector<double> price_points(const ProblemInstance& inst, std::size_t alt, const GridSpec& grid,
                                 const SolverOptions& opts = {});

/**
 * Best accepted menu of at most grid.max_menu_size offers (1..4; 4 is a
 * diagnostic for the three-offer restriction).
 *
 * Unless grid.exhaustive is set, a menu whose credited offer is priced above
 * its utility needs a bait with u - p >= 0; raising that bait's price (while
 * keeping u - p >= 0) lowers only the bait's own overall utility, so the bait
 * is pinned to its highest admissible grid price. The remaining prices are
 * enumerated in full. The attained profit equals the exhaustive one.
 *
 * Menus are visited in a fixed order (size, subset, roles, prices) and only a
 * strictly better profit replaces the incumbent, so the result is deterministic.
 */
GridSearchResult grid_search(const ProblemInstance& inst, const GridSpec& grid, const SolverOptions& opts = {});

/// grid_search packaged as a Solution. Menus are limited to three offers.
/// Throws std::runtime_error if the grid admits no accepted menu.
Solution grid_best_contract(const ProblemInstance& inst, const GridSpec& grid, const SolverOptions& opts = {});

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<Check> checks;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] std::vector<std::string> failures() const;
};

/// Replays a solution through the consumer model: participation, the intended
/// offer being chosen, credited profit and welfare, incentive slack against
/// every other offer (>= -1e-8) and the implicit-equation residuals.
VerificationReport verify_solution(const Solution& sol, const ProblemInstance& inst, const SolverOptions& opts = {});

}  // namespace selfcontrol
