#pragma once

// Consumer side of the contracting problem: alternatives, the self-control
// cost function, menus of priced offers and the naive consumer's perceived
// and actual choice rules.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace selfcontrol {

/// Raised when an instance or a cost function breaks a modelling assumption.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One product. All three values are in money units.
struct Alternative {
    std::string id;
    double u = 0.0;  ///< commitment utility
    double v = 0.0;  ///< temptation utility
    double c = 0.0;  ///< production cost

    friend bool operator==(const Alternative&, const Alternative&) = default;
};

/// v - u: how much more tempting than valuable an alternative is.
double excess_temptation(const Alternative& a) noexcept;

/// phi(t) = l*t below the kink w, k*(t - w) + l*w above it. Requires k > 1 > l > 0, w >= 0.
struct PiecewiseLinear {
    double l = 0.5;
    double k = 2.0;
    double w = 1.0;

    friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;
};

/// phi(t) = alpha * t^gamma. Requires alpha > 0, gamma >= 1.
struct Power {
    double alpha = 1.0;
    double gamma = 2.0;

    friend bool operator==(const Power&, const Power&) = default;
};

using CostFunction = std::variant<PiecewiseLinear, Power>;

/// Self-control cost at t. Negative arguments are clamped to zero.
double phi_eval(const CostFunction& cost, double t) noexcept;

/// Throws ValidationError if the parameters leave the admissible family.
void validate_cost(const CostFunction& cost);

bool is_strictly_convex(const CostFunction& cost) noexcept;

std::string describe(const CostFunction& cost);

/**
 * A validated problem: a finite set of alternatives plus the cost function.
 *
 * Construction enforces that u - c and v - c have unique, distinct maximizers
 * and that excess temptation has a unique maximizer (the decoy z*) and a unique
 * minimizer (the bait y*). The error message lists the tied alternatives.
 */
class ProblemInstance {
public:
    ProblemInstance(std::vector<Alternative> alternatives, CostFunction cost);

    [[nodiscard]] std::span<const Alternative> alternatives() const noexcept { return alternatives_; }
    [[nodiscard]] const Alternative& alternative(std::size_t i) const { return alternatives_.at(i); }
    [[nodiscard]] std::size_t size() const noexcept { return alternatives_.size(); }
    [[nodiscard]] const CostFunction& cost() const noexcept { return cost_; }

    /// Index of the unique maximizer of u - c.
    [[nodiscard]] std::size_t efficient_u() const noexcept { return x_u_; }
    /// Index of the unique maximizer of v - c.
    [[nodiscard]] std::size_t efficient_v() const noexcept { return x_v_; }
    /// Index of the unique minimizer of excess temptation (y*).
    [[nodiscard]] std::size_t bait() const noexcept { return y_star_; }
    /// Index of the unique maximizer of excess temptation (z*).
    [[nodiscard]] std::size_t decoy() const noexcept { return z_star_; }

    [[nodiscard]] std::optional<std::size_t> find(std::string_view id) const;

    /// Same alternatives, different cost function (revalidated).
    [[nodiscard]] ProblemInstance with_cost(CostFunction cost) const;

    friend bool operator==(const ProblemInstance& a, const ProblemInstance& b) {
        return a.alternatives_ == b.alternatives_ && a.cost_ == b.cost_;
    }

private:
    std::vector<Alternative> alternatives_;
    CostFunction cost_;
    std::size_t x_u_ = 0;
    std::size_t x_v_ = 0;
    std::size_t y_star_ = 0;
    std::size_t z_star_ = 0;
};

enum class ContractKind { Commitment, Indulging, Compromising };

std::string_view to_string(ContractKind kind) noexcept;

/// An alternative offered at a price. `index` is the alternative's position in
/// its instance and is the last-resort tie-breaker in consumer choice.
struct Offer {
    std::size_t index = 0;
    Alternative alternative;
    double price = 0.0;

    [[nodiscard]] double margin() const noexcept { return price - alternative.c; }
    /// U(s, p) = u - p
    [[nodiscard]] double perceived_utility() const noexcept { return alternative.u - price; }
    /// V(s, p) = v - p
    [[nodiscard]] double temptation_value() const noexcept { return alternative.v - price; }
};

/// A menu of one to three offers with the offer the monopolist intends to sell.
class Contract {
public:
    Contract(std::vector<Offer> offers, std::size_t intended);

    [[nodiscard]] std::span<const Offer> offers() const noexcept { return offers_; }
    [[nodiscard]] std::size_t intended() const noexcept { return intended_; }
    [[nodiscard]] const Offer& intended_offer() const { return offers_[intended_]; }
    [[nodiscard]] ContractKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t size() const noexcept { return offers_.size(); }

    static ContractKind kind_for_size(std::size_t n);

private:
    std::vector<Offer> offers_;
    std::size_t intended_;
    ContractKind kind_;
};

/// Utilities within tie_tolerance * max(1, |best|) of the best are treated as
/// ties and resolved for the monopolist: highest margin, then lowest index.
/// The same tolerance is used for the participation check.
struct ChoiceOptions {
    double tie_tolerance = 1e-9;
};

/// Self-control-inclusive utility of menu[i]: U(i) - phi(max_j V(j) - V(i)).
double overall_utility(std::span<const Offer> menu, std::size_t i, const CostFunction& cost);

/// Index of the offer the consumer actually takes.
std::size_t actual_choice(std::span<const Offer> menu, const CostFunction& cost, ChoiceOptions opts = {});
const Offer& actual_choice(const Contract& contract, const CostFunction& cost, ChoiceOptions opts = {});

/// Index of the offer the naive consumer expects to take (argmax of u - p).
std::size_t perceived_choice(std::span<const Offer> menu, ChoiceOptions opts = {});
const Offer& perceived_choice(const Contract& contract, ChoiceOptions opts = {});

/// Naive participation: the perceived choice leaves nonnegative utility.
bool accepts(std::span<const Offer> menu, ChoiceOptions opts = {});
bool accepts(const Contract& contract, ChoiceOptions opts = {});

struct Outcome {
    double profit = 0.0;
    double welfare = 0.0;
    /// Position in the menu of the offer taken; empty when the menu is rejected.
    std::optional<std::size_t> chosen;
};

/// Profit and welfare once the consumer has accepted (or rejected) the menu.
Outcome realized_outcome(std::span<const Offer> menu, const CostFunction& cost, ChoiceOptions opts = {});
Outcome realized_outcome(const Contract& contract, const CostFunction& cost, ChoiceOptions opts = {});

}  // namespace selfcontrol
