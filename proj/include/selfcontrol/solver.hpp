#pragma once

// Revenue-maximizing contracts against a naive consumer with convex
// self-control costs.
//
// For an alternative x the monopolist can sell it
//   - on commitment at u(x),
//   - in an indulging menu next to the bait y* priced at u(y*), or
//   - in a compromising menu that adds the decoy z* as the most tempting offer.
// The indulging and decoy prices solve p = u + phi(v - p - e(y*)); the
// compromise price solves p = u(x) + p(z*) - u(z*) - phi(v(z*) - p(z*) - v(x) + p).
// Both residuals are strictly increasing in p, so bisection finds the unique root.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "selfcontrol/model.hpp"
#include "selfcontrol/root_finding.hpp"

namespace selfcontrol {

/// Preconditions of compromising_contract do not hold (x is y* or z*).
class NotCompromisable : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A modelling assumption needed by a closed-form result fails.
class AssumptionViolated : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct SolverOptions {
    /// Absolute bound on implicit-equation residuals, in money units.
    double tolerance = 1e-10;
    /// Profits closer than this are ties; ties go to the simpler contract
    /// and then to the lower alternative index.
    double tie_tolerance = 1e-9;
    ChoiceOptions choice{};
};

struct Solution {
    Contract contract;
    std::size_t sold = 0;  ///< index of the sold alternative in the instance
    double price = 0.0;
    double profit = 0.0;
    double welfare = 0.0;  ///< overall utility of the intended offer under the actual choice rule
    std::vector<double> residuals;
    std::vector<std::string> notes;

    [[nodiscard]] ContractKind kind() const noexcept { return contract.kind(); }
    [[nodiscard]] const Offer& sold_offer() const { return contract.intended_offer(); }
};

Offer make_offer(const ProblemInstance& inst, std::size_t alt, double price);

Solution commitment_contract(std::size_t x, const ProblemInstance& inst);

/// Price solving p = u(x) + phi(v(x) - p - e(y*)). Returns the commitment
/// solution (with a note) when x is y* itself.
Solution indulging_contract(std::size_t x, const ProblemInstance& inst, const SolverOptions& opts = {});

/// Decoy price p(z*) = u(z*) + phi(v(z*) - p(z*) - e(y*)).
RootResult price_of_z(const ProblemInstance& inst, const SolverOptions& opts = {});

/// Three-offer menu {x, y*, z*}. Throws NotCompromisable if x is y* or z*.
Solution compromising_contract(std::size_t x, const ProblemInstance& inst, const SolverOptions& opts = {});

/// Most profitable applicable construction for x. Equal revenue resolves
/// toward the smaller menu, except that a piecewise-linear instance whose
/// decoy lies past the kink, e(z*) - e(y*) > (1 + l) w, keeps the compromise.
Solution best_contract_for(std::size_t x, const ProblemInstance& inst, const SolverOptions& opts = {});

/// Profit-maximizing contract over all alternatives; ties go to the lowest index.
Solution optimal_contract(const ProblemInstance& inst, const SolverOptions& opts = {});

enum class Branch { Linear, Kink };

/// Which closed form yields the compromise price. With the decoy price on its
/// linear branch the compromise and indulging prices coincide.
enum class CompromiseBranch { SameAsIndulging, Linear, Kink };

struct ClosedForm {
    double p_ind = 0.0;
    double p_z = 0.0;
    double p_comp = 0.0;
    Branch ind_branch = Branch::Linear;
    Branch z_branch = Branch::Linear;
    CompromiseBranch comp_branch = CompromiseBranch::SameAsIndulging;
};

/// Explicit prices for the piecewise-linear cost. Boundaries take the "<=" branch.
/// Throws std::invalid_argument for any other cost family.
ClosedForm closed_form_piecewise(std::size_t x, const ProblemInstance& inst);

struct WillpowerRegime {
    int case_index = 0;  ///< 1..4
    std::size_t sold = 0;
    double price = 0.0;
    ContractKind kind = ContractKind::Commitment;
    std::size_t x_k = 0;  ///< argmax of (u + k v)/(1 + k) - c
    /// argmax of (u + l v)/(1 + l) - c. Tied candidates earn the same profit in
    /// cases 3 and 4, so a tie goes to the lowest index (with a note).
    std::size_t x_l = 0;
    /// (e(z*) - e(x_k))/(1+l), (e(z*) - e(x_l))/(1+l), (e(z*) - e(y*))/(1+l).
    std::array<double, 3> thresholds{};
    /// Sold alternative from the constrained maximizations over the two
    /// willpower regions; compared against the x_k / x_l prediction.
    std::size_t constrained_sold = 0;
    double constrained_price = 0.0;
    std::vector<std::string> notes;
};

/// Classifies a piecewise-linear instance into the four willpower regimes and
/// predicts the sold alternative and its price. Case 2 has no closed form for
/// the sold alternative; it is taken from the constrained maximization.
/// Throws AssumptionViolated if x_k is tied.
WillpowerRegime classify_willpower(const ProblemInstance& inst, const SolverOptions& opts = {});

}  // namespace selfcontrol
